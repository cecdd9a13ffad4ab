#pragma once

#include <memory>

#include "bosemix/hamiltonian.hpp"
#include "bosemix/tensor_space.hpp"

namespace bosemix {

enum class PropagationMethod { Dense, Krylov };

struct PropagatorConfig {
  PropagationMethod method = PropagationMethod::Krylov;
  int krylov_dim = 30;
  /// Time substep; 0 selects 5 / norm_bound(H).
  double substep = 0.0;
  double tol = 1e-10;
  Index dense_threshold = 4096;

  void validate() const;
};

/// Applies exp(-i t H) to vectors of the tensor space.
///
/// The dense method diagonalizes H once at construction and reuses the
/// eigenbasis for every time; the Krylov method runs Lanczos with full
/// reorthogonalization on fixed substeps, splitting a substep further when
/// the a-posteriori error estimate exceeds `tol`. Instances are immutable and
/// safe to share between threads.
class Propagator {
 public:
  Propagator(const SparseHamiltonian& H, PropagatorConfig cfg = {});

  const SparseHamiltonian& hamiltonian() const noexcept { return *H_; }
  const PropagatorConfig& config() const noexcept { return cfg_; }

  /// exp(-i t H) psi for an arbitrary (not necessarily normalized) vector.
  CVector apply(const CVector& psi, double t) const;

  /// Dense exp(-i t H). Requires the dense method.
  CMatrix unitary(double t) const;

  /// Eigen-decomposition used by the dense method (null otherwise).
  const RVector* eigenvalues() const noexcept;

 private:
  CVector krylov_step(const CVector& psi, double dt, int depth) const;

  std::shared_ptr<const SparseHamiltonian> H_;
  PropagatorConfig cfg_;
  double substep_ = 0.0;
  struct Spectral;
  std::shared_ptr<const Spectral> spectral_;
};

/// exp(-i t H) psi. Throws InvalidArgument when the dense method is asked for
/// a dimension above cfg.dense_threshold, NumericalError on Krylov failure.
MixtureState evolve(const SparseHamiltonian& H, const MixtureState& psi, double t,
                    const PropagatorConfig& cfg = {});

/// exp(itH) op exp(-itH) as a dense matrix (dimension <= dense_threshold).
CMatrix heisenberg_dense(const SparseHamiltonian& H, const EmbeddedOperator& op, double t,
                         Index dense_threshold = 4096);

/// Same, reusing a dense propagator.
CMatrix heisenberg_dense(const Propagator& propagator, const CMatrix& op, double t);

}  // namespace bosemix
