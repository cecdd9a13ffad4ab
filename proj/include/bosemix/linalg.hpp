#pragma once

#include <cstdint>
#include <functional>

#include "bosemix/types.hpp"

namespace bosemix {

using MatVec = std::function<CVector(const CVector&)>;

struct PowerIterationOptions {
  /// Budget of C^dagger C products.
  int max_iterations = 5000;
  /// Converged once the Ritz residual, or the change of the estimate over
  /// three consecutive steps, falls below rtol relative to the estimate.
  double rtol = 1e-13;
  /// Krylov basis size before restarting from the current Ritz vector.
  int restart = 64;
  std::uint64_t seed = 0x5eed;
};

struct SpectralNormResult {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Largest singular value of a dense matrix (via SVD).
double spectral_norm(const CMatrix& matrix);

/// Largest singular value of an implicit operator C given C* and C^dagger*.
/// Restarted Lanczos on C^dagger C from a seeded random start. Ritz values
/// sit inside the spectrum, so the returned value never exceeds the true
/// norm beyond round-off. Plain power iteration stalls when the top singular
/// values cluster, which the Krylov basis avoids. Non-convergence is
/// reported through `converged`, with the last estimate in `value`.
SpectralNormResult spectral_norm(const MatVec& apply, const MatVec& apply_adjoint,
                                 Index dimension,
                                 const PowerIterationOptions& options = {});

/// Dimension at or below which the implicit overload is not used by callers
/// that can form the dense matrix.
inline constexpr Index kDenseSvdThreshold = 512;

}  // namespace bosemix
