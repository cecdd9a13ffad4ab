#include "bosemix/propagator.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace bosemix {

namespace {

constexpr int kMaxSplitDepth = 24;

}  // namespace

void PropagatorConfig::validate() const {
  if (krylov_dim < 2) throw InvalidArgument("PropagatorConfig: krylov_dim must be >= 2");
  if (!(tol > 0.0)) throw InvalidArgument("PropagatorConfig: tol must be positive");
  if (substep < 0.0 || !std::isfinite(substep)) {
    throw InvalidArgument("PropagatorConfig: substep must be a finite non-negative number");
  }
  if (dense_threshold < 1) throw InvalidArgument("PropagatorConfig: dense_threshold must be positive");
}

struct Propagator::Spectral {
  RVector energies;
  CMatrix basis;
};

Propagator::Propagator(const SparseHamiltonian& H, PropagatorConfig cfg)
    : H_(std::make_shared<const SparseHamiltonian>(H)), cfg_(cfg) {
  cfg_.validate();
  if (cfg_.method == PropagationMethod::Dense) {
    if (H.dimension() > cfg_.dense_threshold) {
      throw InvalidArgument("Propagator: dimension " + std::to_string(H.dimension()) +
                            " exceeds the dense threshold " +
                            std::to_string(cfg_.dense_threshold));
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(H.to_dense());
    auto spectral = std::make_shared<Spectral>();
    spectral->energies = eig.eigenvalues();
    spectral->basis = eig.eigenvectors();
    spectral_ = std::move(spectral);
  }
  substep_ = cfg_.substep > 0.0 ? cfg_.substep
                                : (H.norm_bound() > 0.0 ? 5.0 / H.norm_bound() : 1.0);
}

const RVector* Propagator::eigenvalues() const noexcept {
  return spectral_ ? &spectral_->energies : nullptr;
}

CMatrix Propagator::unitary(double t) const {
  if (!spectral_) throw InvalidArgument("Propagator::unitary: requires the dense method");
  const CVector phases =
      (spectral_->energies * Complex(0.0, -t)).array().exp().matrix();
  return spectral_->basis * phases.asDiagonal() * spectral_->basis.adjoint();
}

CVector Propagator::apply(const CVector& psi, double t) const {
  if (psi.size() != H_->dimension()) {
    throw InvalidArgument("Propagator::apply: dimension mismatch");
  }
  if (t == 0.0) return psi;

  if (spectral_) {
    const CVector phases =
        (spectral_->energies * Complex(0.0, -t)).array().exp().matrix();
    CVector coeffs = spectral_->basis.adjoint() * psi;
    coeffs.array() *= phases.array();
    return spectral_->basis * coeffs;
  }

  const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(t) / substep_ - 1e-12)));
  const double dt = t / steps;
  CVector state = psi;
  for (int s = 0; s < steps; ++s) state = krylov_step(state, dt, 0);
  return state;
}

CVector Propagator::krylov_step(const CVector& psi, double dt, int depth) const {
  const double beta0 = psi.norm();
  if (beta0 == 0.0) return psi;

  const Index dim = psi.size();
  const int max_dim = static_cast<int>(std::min<Index>(cfg_.krylov_dim, dim));
  std::vector<CVector> basis;
  basis.reserve(static_cast<std::size_t>(max_dim));
  basis.push_back(psi / beta0);
  std::vector<double> alpha;
  std::vector<double> beta;  // beta[j] couples basis j and j+1

  // Lanczos coefficients of exp(-i dt T) e_1 for the current basis size.
  auto small_exponential = [&](int size) {
    RMatrix T = RMatrix::Zero(size, size);
    for (int j = 0; j < size; ++j) {
      T(j, j) = alpha[static_cast<std::size_t>(j)];
      if (j + 1 < size) {
        T(j, j + 1) = beta[static_cast<std::size_t>(j)];
        T(j + 1, j) = beta[static_cast<std::size_t>(j)];
      }
    }
    Eigen::SelfAdjointEigenSolver<RMatrix> eig(T);
    const RMatrix& Q = eig.eigenvectors();
    CVector weights(size);
    for (int k = 0; k < size; ++k) {
      weights(k) = std::exp(Complex(0.0, -dt * eig.eigenvalues()(k))) * Q(0, k);
    }
    return CVector(Q.cast<Complex>() * weights);
  };

  auto assemble = [&](const CVector& coeffs) {
    CVector out = CVector::Zero(dim);
    for (Index j = 0; j < coeffs.size(); ++j) out += coeffs(j) * basis[static_cast<std::size_t>(j)];
    return CVector(beta0 * out);
  };

  const double breakdown = 1e-13 * std::max(1.0, H_->norm_bound());
  double estimate = 0.0;
  CVector w;
  for (int j = 0; j < max_dim; ++j) {
    H_->apply(basis[static_cast<std::size_t>(j)], w);
    alpha.push_back(basis[static_cast<std::size_t>(j)].dot(w).real());
    // Full reorthogonalization, applied twice.
    for (int pass = 0; pass < 2; ++pass) {
      for (const CVector& q : basis) w -= q.dot(w) * q;
    }
    const double b = w.norm();
    const int size = j + 1;
    const CVector coeffs = small_exponential(size);

    if (b <= breakdown || size == dim) return assemble(coeffs);  // invariant subspace
    estimate = b * std::abs(coeffs(size - 1));
    if (estimate <= cfg_.tol) return assemble(coeffs);

    beta.push_back(b);
    if (size < max_dim) basis.push_back(w / b);
  }

  if (depth >= kMaxSplitDepth) {
    throw NumericalError("Krylov propagation did not reach tol " + std::to_string(cfg_.tol) +
                             " (estimate " + std::to_string(estimate) + ")",
                         estimate);
  }
  return krylov_step(krylov_step(psi, dt / 2, depth + 1), dt / 2, depth + 1);
}

MixtureState evolve(const SparseHamiltonian& H, const MixtureState& psi, double t,
                    const PropagatorConfig& cfg) {
  if (!psi.compatible_with(H.grid(), H.config())) {
    throw InvalidArgument("evolve: state and Hamiltonian live on different spaces");
  }
  if (t == 0.0) return psi;
  const Propagator propagator(H, cfg);
  return psi.with_amplitudes(propagator.apply(psi.amplitudes(), t));
}

CMatrix heisenberg_dense(const Propagator& propagator, const CMatrix& op, double t) {
  const CMatrix U = propagator.unitary(t);
  return U.adjoint() * op * U;
}

CMatrix heisenberg_dense(const SparseHamiltonian& H, const EmbeddedOperator& op, double t,
                         Index dense_threshold) {
  if (H.dimension() > dense_threshold) {
    throw InvalidArgument("heisenberg_dense: dimension exceeds the dense threshold");
  }
  PropagatorConfig cfg;
  cfg.method = PropagationMethod::Dense;
  cfg.dense_threshold = dense_threshold;
  return heisenberg_dense(Propagator(H, cfg), op.to_dense(), t);
}

}  // namespace bosemix
