#pragma once

// Left-hand sides of the correlation and commutator growth bounds, measured
// on seeded random operator witnesses, and the projector expansion of the
// correlation function around the initial condensate.

#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "bosemix/bounds.hpp"
#include "bosemix/linalg.hpp"
#include "bosemix/propagator.hpp"

namespace bosemix {

/// Kernels of one witness: A1 (n1-body), A2 (m1-body), B1 (n2-body),
/// B2 (m2-body).
struct WitnessTuple {
  CMatrix a1, a2, b1, b2;

  OperatorNorms norms() const;
};

/// Complex Ginibre kernel (optionally Hermitized) scaled to unit spectral norm.
template <typename Rng>
CMatrix random_unit_kernel(Rng& rng, Index dimension, bool hermitian);

/// Seeded collection of witnesses. Sample i depends only on (seed, i).
struct WitnessSet {
  std::uint64_t seed = 0;
  CommutatorLayout layout;
  bool hermitian = false;
  std::vector<WitnessTuple> samples;

  static WitnessTuple sample(std::uint64_t seed, std::size_t index, int sites,
                             const CommutatorLayout& layout, bool hermitian);
  static WitnessSet generate(std::uint64_t seed, std::size_t count, int sites,
                             const CommutatorLayout& layout, bool hermitian = false);
};

struct CorrelationResult {
  double t = 0.0;
  Complex value;
  double abs = 0.0;
  /// Correlation bound; NaN when the initial state is not a product state.
  double bound = std::numeric_limits<double>::quiet_NaN();
  bool bound_applicable = false;
  BoundParams params;
};

/// <A2 B2 A1 B1>_t - <A2 B2>_t <A1 B1>_t with A1, B1 on slots 1..n and
/// A2, B2 on slots n+1..n+m of each species. `kernels.a1/b1` are n-body,
/// `kernels.a2/b2` m-body. Requires n, m < min{N1, N2} and n + m <= min{N1, N2}.
CorrelationResult correlation(const Propagator& propagator, const MixtureState& psi0, double t,
                              const WitnessTuple& kernels, int n, int m);

CorrelationResult correlation(const SparseHamiltonian& H, const MixtureState& psi0, double t,
                              const WitnessTuple& kernels, int n, int m,
                              const PropagatorConfig& cfg = {});

struct CommutatorNormResult {
  double value = 0.0;
  bool converged = true;
  int iterations = 0;
  bool dense = false;
};

/// || [A2 B2, exp(itH) A1 B1 exp(-itH)] || for the given layout. Dense SVD
/// when the propagator is dense, otherwise restarted Lanczos on C^dagger C with matvecs that
/// propagate through the Krylov method.
CommutatorNormResult commutator_norm(const Propagator& propagator, double t,
                                     const WitnessTuple& kernels, const CommutatorLayout& layout,
                                     const PowerIterationOptions& power = {});

double commutator_norm(const SparseHamiltonian& H, double t, const WitnessTuple& kernels,
                       const CommutatorLayout& layout, const PropagatorConfig& cfg = {});

/// measured / bound, with 0 when both are <= 1e-12 and +inf when only the
/// bound is.
double bound_ratio(double measured, double bound);

struct LrRow {
  double t = 0.0;
  std::size_t sample = 0;
  double measured = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
  bool converged = true;
  std::string error;  // non-empty when propagation failed for this row
};

/// Rows ordered by (time index, sample index) regardless of `threads`.
std::vector<LrRow> lr_witness_sweep(const Propagator& propagator, const std::vector<double>& times,
                                    const WitnessSet& witnesses, int threads = 1);

struct DecompositionReport {
  Complex P, Q, R;
  Complex correlation;
  double residual = 0.0;
};

/// Applies p^{(x)N} (the condensate projector onto `orbital` on every slot of
/// `species`).
CVector apply_condensate_projector(const CVector& amplitudes, Species species,
                                   const CVector& orbital, const SpeciesConfig& config,
                                   const LatticeGrid& grid);

/// Applies p on slots 1..j-1 and q = 1 - p on slot j of `species`.
CVector apply_depletion_term(const CVector& amplitudes, Species species, int j,
                             const CVector& orbital, const SpeciesConfig& config,
                             const LatticeGrid& grid);

/// Splits the correlation at time t into the terms with depletion in A only
/// (P), in B only (Q) and in both (R). `psi0` must come from product_state().
DecompositionReport projector_decomposition(const Propagator& propagator,
                                            const MixtureState& psi0, double t,
                                            const WitnessTuple& kernels, int n, int m);

// ---------------------------------------------------------------------------

template <typename Rng>
CMatrix random_unit_kernel(Rng& rng, Index dimension, bool hermitian) {
  std::normal_distribution<double> gauss;
  CMatrix k(dimension, dimension);
  for (Index c = 0; c < dimension; ++c) {
    for (Index r = 0; r < dimension; ++r) k(r, c) = Complex(gauss(rng), gauss(rng));
  }
  if (hermitian) k = (k + k.adjoint()).eval() * 0.5;
  return k / spectral_norm(k);
}

}  // namespace bosemix
