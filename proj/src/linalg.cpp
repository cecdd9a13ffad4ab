#include "bosemix/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

namespace bosemix {

double spectral_norm(const CMatrix& matrix) {
  if (matrix.size() == 0) return 0.0;
  Eigen::BDCSVD<CMatrix> svd(matrix);
  return svd.singularValues()(0);
}

SpectralNormResult spectral_norm(const MatVec& apply, const MatVec& apply_adjoint,
                                 Index dimension,
                                 const PowerIterationOptions& options) {
  SpectralNormResult result;
  if (dimension <= 0) {
    result.converged = true;
    return result;
  }

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss;
  CVector x(dimension);
  for (Index i = 0; i < dimension; ++i) x(i) = Complex(gauss(rng), gauss(rng));
  x.normalize();

  const Index basis_cap =
      std::min<Index>(dimension, std::max(2, options.restart));
  double previous = -1.0;
  int stable = 0;

  while (result.iterations < options.max_iterations) {
    std::vector<CVector> basis{x};
    std::vector<double> alpha, beta;
    Eigen::VectorXd ritz_vector;

    for (Index j = 0;; ++j) {
      CVector w = apply_adjoint(apply(basis[static_cast<std::size_t>(j)]));
      ++result.iterations;
      alpha.push_back(basis.back().dot(w).real());
      // Full reorthogonalization, twice, keeps the Ritz values honest.
      for (int pass = 0; pass < 2; ++pass) {
        for (const CVector& q : basis) w -= q * q.dot(w);
      }
      const double b = w.norm();

      const Index k = static_cast<Index>(alpha.size());
      Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
      for (Index i = 0; i < k; ++i) {
        T(i, i) = alpha[static_cast<std::size_t>(i)];
        if (i + 1 < k) T(i, i + 1) = T(i + 1, i) = beta[static_cast<std::size_t>(i)];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(T);
      const double theta = std::max(0.0, eig.eigenvalues()(k - 1));
      ritz_vector = eig.eigenvectors().col(k - 1);
      result.value = std::sqrt(theta);

      const double residual = b * std::abs(ritz_vector(k - 1));
      // An exhausted Krylov space is an invariant subspace; with a Gaussian
      // start it contains the top eigenvector with probability one.
      const bool exhausted = b <= 1e-14 * std::max(theta, 1e-300) || k == dimension;
      if (theta == 0.0 && b == 0.0) {
        result.converged = true;
        return result;
      }
      if (exhausted || residual <= options.rtol * theta) {
        result.converged = true;
        return result;
      }
      if (previous >= 0.0 && std::abs(result.value - previous) <= options.rtol * result.value) {
        if (++stable >= 3) {
          result.converged = true;
          return result;
        }
      } else {
        stable = 0;
      }
      previous = result.value;

      if (k == basis_cap || result.iterations >= options.max_iterations) break;
      beta.push_back(b);
      basis.push_back(w / b);
    }

    CVector restart_vector = CVector::Zero(dimension);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      restart_vector += ritz_vector(static_cast<Index>(i)) * basis[i];
    }
    x = restart_vector.normalized();
  }
  return result;
}

}  // namespace bosemix
