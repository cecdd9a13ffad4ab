#include "bosemix/observables.hpp"

#include <cmath>
#include <string>

#include "bosemix/parallel.hpp"

namespace bosemix {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

Index kernel_dim(int sites, int bodies) {
  Index d = 1;
  for (int i = 0; i < bodies; ++i) d *= sites;
  return d;
}

// The four slot-embedded operators of a witness for a given layout.
struct Embedded {
  EmbeddedOperator a1, b1, a2, b2;

  Embedded(const WitnessTuple& k, const CommutatorLayout& l, const SpeciesConfig& config,
           const LatticeGrid& grid)
      : a1(k.a1, SlotSet::range(Species::A, 1, l.n1), {}, config, grid),
        b1(k.b1, {}, SlotSet::range(Species::B, 1, l.n2), config, grid),
        a2(k.a2, SlotSet::range(Species::A, l.n1 + 1, l.m1), {}, config, grid),
        b2(k.b2, {}, SlotSet::range(Species::B, l.n2 + 1, l.m2), config, grid) {}

  CVector first(const CVector& v) const { return a1.apply(b1.apply(v)); }
  CVector second(const CVector& v) const { return a2.apply(b2.apply(v)); }
  // A1 and B1 act on different species and commute, so (A1 B1)^dagger is
  // A1^dagger B1^dagger in either order.
  CVector first_adjoint(const CVector& v) const {
    return a1.adjoint().apply(b1.adjoint().apply(v));
  }
  CVector second_adjoint(const CVector& v) const {
    return a2.adjoint().apply(b2.adjoint().apply(v));
  }
};

void check_correlation_layout(const SpeciesConfig& config, int n, int m) {
  const int smaller = std::min(config.n_a(), config.n_b());
  require(n >= 1 && m >= 1, "correlation: n and m must be positive");
  require(n < smaller && m < smaller, "correlation: need n, m < min{N1, N2}");
  require(n + m <= smaller, "correlation: slot overflow, need n + m <= min{N1, N2}");
}

}  // namespace

OperatorNorms WitnessTuple::norms() const {
  return OperatorNorms{spectral_norm(a1), spectral_norm(a2), spectral_norm(b1),
                       spectral_norm(b2)};
}

// ---------------------------------------------------------------------------
// Witnesses

WitnessTuple WitnessSet::sample(std::uint64_t seed, std::size_t index, int sites,
                                const CommutatorLayout& layout, bool hermitian) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(static_cast<std::uint64_t>(index) >> 32)};
  std::mt19937_64 rng(seq);
  WitnessTuple w;
  w.a1 = random_unit_kernel(rng, kernel_dim(sites, layout.n1), hermitian);
  w.a2 = random_unit_kernel(rng, kernel_dim(sites, layout.m1), hermitian);
  w.b1 = random_unit_kernel(rng, kernel_dim(sites, layout.n2), hermitian);
  w.b2 = random_unit_kernel(rng, kernel_dim(sites, layout.m2), hermitian);
  return w;
}

WitnessSet WitnessSet::generate(std::uint64_t seed, std::size_t count, int sites,
                                const CommutatorLayout& layout, bool hermitian) {
  WitnessSet set;
  set.seed = seed;
  set.layout = layout;
  set.hermitian = hermitian;
  set.samples.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    set.samples.push_back(sample(seed, i, sites, layout, hermitian));
  }
  return set;
}

// ---------------------------------------------------------------------------
// Correlation

CorrelationResult correlation(const Propagator& propagator, const MixtureState& psi0, double t,
                              const WitnessTuple& kernels, int n, int m) {
  const SparseHamiltonian& H = propagator.hamiltonian();
  require(psi0.compatible_with(H.grid(), H.config()), "correlation: incompatible state");
  check_correlation_layout(H.config(), n, m);

  const Embedded ops(kernels, CommutatorLayout{n, n, m, m}, H.config(), H.grid());
  const CVector psi_t = propagator.apply(psi0.amplitudes(), t);
  const CVector first = ops.first(psi_t);

  CorrelationResult result;
  result.t = t;
  result.value = psi_t.dot(ops.second(first)) - psi_t.dot(ops.second(psi_t)) * psi_t.dot(first);
  result.abs = std::abs(result.value);
  result.params = bound_params(H.config(), H.potentials(), n, m, kernels.norms());
  if (psi0.product_factors()) {
    result.bound_applicable = true;
    result.bound = theorem1_rhs(result.params, std::abs(t));
  }
  return result;
}

CorrelationResult correlation(const SparseHamiltonian& H, const MixtureState& psi0, double t,
                              const WitnessTuple& kernels, int n, int m,
                              const PropagatorConfig& cfg) {
  return correlation(Propagator(H, cfg), psi0, t, kernels, n, m);
}

// ---------------------------------------------------------------------------
// Commutator norms

CommutatorNormResult commutator_norm(const Propagator& propagator, double t,
                                     const WitnessTuple& kernels, const CommutatorLayout& layout,
                                     const PowerIterationOptions& power) {
  const SparseHamiltonian& H = propagator.hamiltonian();
  layout.validate(H.config());
  const Embedded ops(kernels, layout, H.config(), H.grid());
  const Index dim = H.dimension();

  CommutatorNormResult result;
  if (propagator.eigenvalues() != nullptr) {
    const CMatrix U = propagator.unitary(t);
    CMatrix first(dim, dim);
    CMatrix second(dim, dim);
    CVector e = CVector::Zero(dim);
    for (Index j = 0; j < dim; ++j) {
      e(j) = 1.0;
      first.col(j) = ops.first(e);
      second.col(j) = ops.second(e);
      e(j) = 0.0;
    }
    const CMatrix evolved = U.adjoint() * first * U;
    result.value = spectral_norm(CMatrix(second * evolved - evolved * second));
    result.dense = true;
    return result;
  }

  auto evolved = [&](const CVector& v) {
    return propagator.apply(ops.first(propagator.apply(v, t)), -t);
  };
  auto evolved_adjoint = [&](const CVector& v) {
    return propagator.apply(ops.first_adjoint(propagator.apply(v, t)), -t);
  };
  const MatVec apply = [&](const CVector& v) {
    return CVector(ops.second(evolved(v)) - evolved(ops.second(v)));
  };
  const MatVec apply_adjoint = [&](const CVector& v) {
    return CVector(evolved_adjoint(ops.second_adjoint(v)) - ops.second_adjoint(evolved_adjoint(v)));
  };
  const SpectralNormResult sn = spectral_norm(apply, apply_adjoint, dim, power);
  result.value = sn.value;
  result.converged = sn.converged;
  result.iterations = sn.iterations;
  return result;
}

double commutator_norm(const SparseHamiltonian& H, double t, const WitnessTuple& kernels,
                       const CommutatorLayout& layout, const PropagatorConfig& cfg) {
  return commutator_norm(Propagator(H, cfg), t, kernels, layout).value;
}

double bound_ratio(double measured, double bound) {
  constexpr double kFloor = 1e-12;
  if (bound <= kFloor) {
    return measured <= kFloor ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return measured / bound;
}

std::vector<LrRow> lr_witness_sweep(const Propagator& propagator, const std::vector<double>& times,
                                    const WitnessSet& witnesses, int threads) {
  const SparseHamiltonian& H = propagator.hamiltonian();
  witnesses.layout.validate(H.config());
  for (double t : times) require(t >= 0.0, "lr_witness_sweep: times must be non-negative");

  const std::size_t samples = witnesses.samples.size();
  std::vector<LrRow> rows(times.size() * samples);
  parallel_for(rows.size(), threads, [&](std::size_t cell) {
    LrRow& row = rows[cell];
    row.t = times[cell / samples];
    row.sample = cell % samples;
    const WitnessTuple& w = witnesses.samples[row.sample];
    const BoundParams params = lr_bound_params(H.config(), H.potentials(), witnesses.layout, w.norms());
    row.bound = theorem2_rhs(params, witnesses.layout, row.t);
    try {
      const CommutatorNormResult r = commutator_norm(propagator, row.t, w, witnesses.layout);
      row.measured = r.value;
      row.converged = r.converged;
      row.ratio = bound_ratio(row.measured, row.bound);
    } catch (const NumericalError& e) {
      row.error = e.what();
      row.measured = std::numeric_limits<double>::quiet_NaN();
      row.ratio = std::numeric_limits<double>::quiet_NaN();
    }
  });
  return rows;
}

// ---------------------------------------------------------------------------
// Projector decomposition

namespace {

CMatrix condensate_kernel(const CVector& orbital) { return orbital * orbital.adjoint(); }

EmbeddedOperator single_slot(const CMatrix& kernel, Species species, int slot,
                             const SpeciesConfig& config, const LatticeGrid& grid) {
  const SlotSet slots(species, {slot});
  return species == Species::A ? EmbeddedOperator(kernel, slots, {}, config, grid)
                               : EmbeddedOperator(kernel, {}, slots, config, grid);
}

int population(const SpeciesConfig& config, Species species) {
  return species == Species::A ? config.n_a() : config.n_b();
}

}  // namespace

CVector apply_condensate_projector(const CVector& amplitudes, Species species,
                                   const CVector& orbital, const SpeciesConfig& config,
                                   const LatticeGrid& grid) {
  const CMatrix p = condensate_kernel(orbital);
  CVector out = amplitudes;
  for (int s = 1; s <= population(config, species); ++s) {
    out = single_slot(p, species, s, config, grid).apply(out);
  }
  return out;
}

CVector apply_depletion_term(const CVector& amplitudes, Species species, int j,
                             const CVector& orbital, const SpeciesConfig& config,
                             const LatticeGrid& grid) {
  require(j >= 1 && j <= population(config, species), "apply_depletion_term: slot out of range");
  const CMatrix p = condensate_kernel(orbital);
  const CMatrix q = CMatrix::Identity(p.rows(), p.cols()) - p;
  CVector out = single_slot(q, species, j, config, grid).apply(amplitudes);
  for (int s = 1; s < j; ++s) out = single_slot(p, species, s, config, grid).apply(out);
  return out;
}

DecompositionReport projector_decomposition(const Propagator& propagator,
                                            const MixtureState& psi0, double t,
                                            const WitnessTuple& kernels, int n, int m) {
  const SparseHamiltonian& H = propagator.hamiltonian();
  require(psi0.compatible_with(H.grid(), H.config()), "projector_decomposition: incompatible state");
  require(psi0.product_factors().has_value(),
          "projector_decomposition: initial state must be a product state");
  check_correlation_layout(H.config(), n, m);

  const auto& config = H.config();
  const auto& grid = H.grid();
  const CVector& u = psi0.product_factors()->u;
  const CVector& v = psi0.product_factors()->v;
  const Embedded ops(kernels, CommutatorLayout{n, n, m, m}, config, grid);

  // <psi0, X2_t Pi X1_t psi0> = <chi, Pi phi> with X_t = U^dagger X U.
  const CVector psi_t = propagator.apply(psi0.amplitudes(), t);
  const CVector phi = propagator.apply(ops.first(psi_t), -t);
  const CVector chi = propagator.apply(ops.second_adjoint(psi_t), -t);

  DecompositionReport report;
  const CVector phi_pb = apply_condensate_projector(phi, Species::B, v, config, grid);
  for (int j1 = 1; j1 <= config.n_a(); ++j1) {
    report.P += chi.dot(apply_depletion_term(phi_pb, Species::A, j1, u, config, grid));
  }
  const CVector phi_pa = apply_condensate_projector(phi, Species::A, u, config, grid);
  for (int j2 = 1; j2 <= config.n_b(); ++j2) {
    report.Q += chi.dot(apply_depletion_term(phi_pa, Species::B, j2, v, config, grid));
  }
  for (int j1 = 1; j1 <= config.n_a(); ++j1) {
    const CVector left = apply_depletion_term(phi, Species::A, j1, u, config, grid);
    for (int j2 = 1; j2 <= config.n_b(); ++j2) {
      report.R += chi.dot(apply_depletion_term(left, Species::B, j2, v, config, grid));
    }
  }

  report.correlation = correlation(propagator, psi0, t, kernels, n, m).value;
  report.residual = std::abs(report.P + report.Q + report.R - report.correlation);
  return report;
}

}  // namespace bosemix
