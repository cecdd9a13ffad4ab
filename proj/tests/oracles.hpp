#pragma once

// Independent reference constructions for tests. Nothing here calls into the
// library beyond plain data types: every matrix is assembled from Kronecker
// products or explicit index loops over the documented layout (global slot 0
// slowest, A-slots before B-slots).

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline long ipow(long base, int e) {
  long r = 1;
  while (e-- > 0) r *= base;
  return r;
}

/// Site labels of a flat index, slot 0 first.
inline std::vector<int> digits(long index, int M, int K) {
  std::vector<int> d(static_cast<std::size_t>(K));
  for (int s = K - 1; s >= 0; --s) {
    d[static_cast<std::size_t>(s)] = static_cast<int>(index % M);
    index /= M;
  }
  return d;
}

inline long flat(const std::vector<int>& d, int M) {
  long i = 0;
  for (int x : d) i = i * M + x;
  return i;
}

inline Mat kron_chain(const std::vector<Mat>& factors) {
  Mat out = Mat::Identity(1, 1);
  for (const Mat& f : factors) out = Eigen::kroneckerProduct(out, f).eval();
  return out;
}

inline Mat unit(int M, int r, int c) {
  Mat e = Mat::Zero(M, M);
  e(r, c) = 1.0;
  return e;
}

/// Kernel K on global slots `slots` (increasing), identity on the other
/// K_total - k slots, as sum_{r,s} K(r,s) (x)_slot E_{r_slot, s_slot}.
inline Mat embed_kron(const Mat& kernel, const std::vector<int>& slots, int M, int K_total) {
  const int k = static_cast<int>(slots.size());
  const long d = ipow(M, K_total);
  Mat out = Mat::Zero(d, d);
  const long kd = ipow(M, k);
  for (long r = 0; r < kd; ++r) {
    const auto rd = digits(r, M, k);
    for (long c = 0; c < kd; ++c) {
      if (kernel(r, c) == Complex(0.0)) continue;
      const auto cd = digits(c, M, k);
      std::vector<Mat> factors;
      int used = 0;
      for (int s = 0; s < K_total; ++s) {
        if (used < k && slots[static_cast<std::size_t>(used)] == s) {
          factors.push_back(unit(M, rd[static_cast<std::size_t>(used)], cd[static_cast<std::size_t>(used)]));
          ++used;
        } else {
          factors.push_back(Mat::Identity(M, M));
        }
      }
      out += kernel(r, c) * kron_chain(factors);
    }
  }
  return out;
}

/// Periodic stencil -Laplacian + U, couplings accumulated link by link.
inline Mat stencil(int M, double h, const std::vector<double>& U) {
  Mat out = Mat::Zero(M, M);
  const double w = 1.0 / (h * h);
  for (int j = 0; j < M; ++j) {
    out(j, j) += 2.0 * w + U[static_cast<std::size_t>(j)];
    out(j, (j + 1) % M) -= w;
    out(j, (j + M - 1) % M) -= w;
  }
  return out;
}

struct Potentials {
  std::vector<double> U1, U2, V1, V2, V12;
};

inline double pair(const std::vector<double>& V, int x, int y, int M) {
  return V[static_cast<std::size_t>(((x - y) % M + M) % M)];
}

/// Dense many-body Hamiltonian. Pairs are kept only when `keep(slot_i,
/// slot_j)` holds (global slots); the default keeps all pairs.
template <typename Keep>
Mat hamiltonian(int M, double h, int N1, int N2, const Potentials& p, Keep keep) {
  const int K = N1 + N2;
  const long d = ipow(M, K);
  Mat H = Mat::Zero(d, d);
  const Mat h1 = stencil(M, h, p.U1);
  const Mat h2 = stencil(M, h, p.U2);
  for (int s = 0; s < K; ++s) {
    std::vector<Mat> f(static_cast<std::size_t>(K), Mat::Identity(M, M));
    f[static_cast<std::size_t>(s)] = s < N1 ? h1 : h2;
    H += kron_chain(f);
  }
  const double N = N1 + N2;
  for (long i = 0; i < d; ++i) {
    const auto x = digits(i, M, K);
    double v = 0.0;
    for (int a = 0; a < K; ++a) {
      for (int b = a + 1; b < K; ++b) {
        if (!keep(a, b)) continue;
        const int xa = x[static_cast<std::size_t>(a)];
        const int xb = x[static_cast<std::size_t>(b)];
        if (b < N1) v += pair(p.V1, xa, xb, M) / N1;
        else if (a >= N1) v += pair(p.V2, xa, xb, M) / N2;
        else v += pair(p.V12, xa, xb, M) / N;
      }
    }
    H(i, i) += v;
  }
  return H;
}

inline Mat hamiltonian(int M, double h, int N1, int N2, const Potentials& p) {
  return hamiltonian(M, h, N1, N2, p, [](int, int) { return true; });
}

/// exp(-i t H) by Pade scaling and squaring.
inline Mat expm(const Mat& H, double t) {
  const Mat X = Complex(0.0, -t) * H;
  return X.exp();
}

/// Reduced density matrix of global slot `slot` by direct index summation.
inline Mat partial_trace(const Vec& psi, int M, int K, int slot) {
  Mat rho = Mat::Zero(M, M);
  const long d = ipow(M, K);
  for (long i = 0; i < d; ++i) {
    auto x = digits(i, M, K);
    for (int y = 0; y < M; ++y) {
      auto z = x;
      z[static_cast<std::size_t>(slot)] = y;
      const long j = flat(z, M);
      rho(x[static_cast<std::size_t>(slot)], y) += psi(i) * std::conj(psi(j));
    }
  }
  return rho;
}

/// Naive DFT coefficients (1/M) sum_x V(x) exp(-2 pi i q x / M).
inline std::vector<Complex> dft(const std::vector<double>& V) {
  const int M = static_cast<int>(V.size());
  std::vector<Complex> out(static_cast<std::size_t>(M));
  for (int q = 0; q < M; ++q) {
    Complex acc = 0.0;
    for (int x = 0; x < M; ++x) {
      acc += V[static_cast<std::size_t>(x)] * std::polar(1.0, -2.0 * M_PI * q * x / M);
    }
    out[static_cast<std::size_t>(q)] = acc / static_cast<double>(M);
  }
  return out;
}

inline Vec random_vector(std::mt19937_64& rng, long n) {
  std::normal_distribution<double> g;
  Vec v(n);
  for (long i = 0; i < n; ++i) v(i) = Complex(g(rng), g(rng));
  return v;
}

inline Mat random_matrix(std::mt19937_64& rng, long n) {
  std::normal_distribution<double> g;
  Mat a(n, n);
  for (long c = 0; c < n; ++c)
    for (long r = 0; r < n; ++r) a(r, c) = Complex(g(rng), g(rng));
  return a;
}

inline Mat random_hermitian(std::mt19937_64& rng, long n) {
  const Mat a = random_matrix(rng, n);
  return 0.5 * (a + a.adjoint());
}

/// Even pair potential with random entries (V[d] == V[M - d]).
inline std::vector<double> random_even(std::mt19937_64& rng, int M, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> V(static_cast<std::size_t>(M));
  for (int d = 0; d <= M / 2; ++d) {
    const double x = u(rng);
    V[static_cast<std::size_t>(d)] = x;
    V[static_cast<std::size_t>((M - d) % M)] = x;
  }
  return V;
}

inline std::vector<double> random_trap(std::mt19937_64& rng, int M, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> U(static_cast<std::size_t>(M));
  for (double& x : U) x = u(rng);
  return U;
}

/// u^{(x)N1} (x) v^{(x)N2} by repeated Kronecker products.
inline Vec product(const Vec& u, int N1, const Vec& v, int N2) {
  Vec out = Vec::Ones(1);
  for (int i = 0; i < N1; ++i) out = Eigen::kroneckerProduct(out, u).eval();
  for (int i = 0; i < N2; ++i) out = Eigen::kroneckerProduct(out, v).eval();
  return out;
}

inline double opnorm(const Mat& a) {
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues()(0);
}

}  // namespace oracle
