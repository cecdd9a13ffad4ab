#include "bosemix/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <unsupported/Eigen/FFT>

namespace bosemix {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

double max_abs(const std::vector<double>& values) {
  double m = 0.0;
  for (double x : values) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// Potentials

PotentialSet PotentialSet::zero(int sites) {
  const auto n = static_cast<std::size_t>(sites);
  return PotentialSet{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                      std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                      std::vector<double>(n, 0.0)};
}

PotentialSet PotentialSet::v12_delta(int sites, double strength) {
  PotentialSet p = zero(sites);
  p.V12[0] = strength;
  return p;
}

void PotentialSet::validate(int sites) const {
  const auto n = static_cast<std::size_t>(sites);
  auto check = [&](const std::vector<double>& values, const char* name, bool pair) {
    require(values.size() == n, std::string(name) + ": expected " + std::to_string(n) + " entries");
    for (double x : values) require(std::isfinite(x), std::string(name) + ": non-finite entry");
    if (!pair) return;
    for (std::size_t d = 1; d < n; ++d) {
      require(std::abs(values[d] - values[n - d]) <= 1e-12,
              std::string(name) + ": pair potential must be even, V(d) = V(-d)");
    }
  };
  check(U1, "U1", false);
  check(U2, "U2", false);
  check(V1, "V1", true);
  check(V2, "V2", true);
  check(V12, "V12", true);
}

CMatrix one_body(const LatticeGrid& grid, const std::vector<double>& trap) {
  const int m = grid.sites();
  require(static_cast<int>(trap.size()) == m, "one_body: trap must have M entries");
  const double hop = 1.0 / (grid.spacing() * grid.spacing());
  CMatrix h = CMatrix::Zero(m, m);
  for (int j = 0; j < m; ++j) {
    require(std::isfinite(trap[static_cast<std::size_t>(j)]), "one_body: non-finite trap entry");
    h(j, j) += 2.0 * hop + trap[static_cast<std::size_t>(j)];
    h(j, grid.wrap(j + 1)) -= hop;
    h(j, grid.wrap(j - 1)) -= hop;
  }
  return h;
}

double dft_l1_norm(const std::vector<double>& potential) {
  if (potential.empty()) return 0.0;
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spectrum;
  fft.fwd(spectrum, potential);
  // Real-input transforms may come back half-length; the full spectrum is
  // recovered from Hermitian symmetry.
  const std::size_t m = potential.size();
  double total = 0.0;
  if (spectrum.size() == m) {
    for (const auto& c : spectrum) total += std::abs(c);
  } else {
    for (std::size_t q = 0; q < m; ++q) {
      const std::size_t k = q < spectrum.size() ? q : m - q;
      total += std::abs(spectrum[k]);
    }
  }
  return total / static_cast<double>(m);
}

// ---------------------------------------------------------------------------
// Hamiltonian

SparseHamiltonian assemble(const LatticeGrid& grid, const SpeciesConfig& config,
                           const PotentialSet& potentials, HamiltonianKind kind, int n1, int n2) {
  potentials.validate(grid.sites());
  require(n1 >= 0 && n1 <= config.n_a(), "assemble: n1 must lie in [0, N1]");
  require(n2 >= 0 && n2 <= config.n_b(), "assemble: n2 must lie in [0, N2]");

  SparseHamiltonian H(grid, config, potentials);
  H.kind_ = kind;
  H.block_a_ = n1;
  H.block_b_ = n2;
  H.hopping_ = 1.0 / (grid.spacing() * grid.spacing());

  const int m = grid.sites();
  const int na = config.n_a();
  const int nb = config.n_b();
  const int total = config.total();
  const Index dim = tensor_dimension(grid, config);

  H.strides_.assign(static_cast<std::size_t>(total), 1);
  for (int s = total - 2; s >= 0; --s) {
    H.strides_[static_cast<std::size_t>(s)] = H.strides_[static_cast<std::size_t>(s + 1)] * m;
  }

  // Block membership: 0 = leading block, 1 = rest. The full Hamiltonian puts
  // every slot in the same block.
  std::vector<int> block(static_cast<std::size_t>(total), 0);
  if (kind == HamiltonianKind::Modified) {
    for (int i = 0; i < na; ++i) block[static_cast<std::size_t>(i)] = i < n1 ? 0 : 1;
    for (int r = 0; r < nb; ++r) block[static_cast<std::size_t>(na + r)] = r < n2 ? 0 : 1;
  }

  const double w1 = 1.0 / na;
  const double w2 = 1.0 / nb;
  const double w12 = 1.0 / total;
  const double kinetic = 2.0 * H.hopping_ * total;
  auto pair = [m](const std::vector<double>& v, int a, int b) {
    return v[static_cast<std::size_t>(((a - b) % m + m) % m)];
  };

  H.diagonal_.resize(dim);
  std::vector<int> digit(static_cast<std::size_t>(total));
  for (Index idx = 0; idx < dim; ++idx) {
    Index rem = idx;
    for (int s = total - 1; s >= 0; --s) {
      digit[static_cast<std::size_t>(s)] = static_cast<int>(rem % m);
      rem /= m;
    }
    auto x = [&](int s) { return digit[static_cast<std::size_t>(s)]; };
    auto same_block = [&](int s, int t) {
      return block[static_cast<std::size_t>(s)] == block[static_cast<std::size_t>(t)];
    };

    double e = kinetic;
    for (int i = 0; i < na; ++i) e += potentials.U1[static_cast<std::size_t>(x(i))];
    for (int r = 0; r < nb; ++r) e += potentials.U2[static_cast<std::size_t>(x(na + r))];
    for (int i = 0; i < na; ++i) {
      for (int j = i + 1; j < na; ++j) {
        if (same_block(i, j)) e += w1 * pair(potentials.V1, x(i), x(j));
      }
    }
    for (int r = 0; r < nb; ++r) {
      for (int s = r + 1; s < nb; ++s) {
        if (same_block(na + r, na + s)) e += w2 * pair(potentials.V2, x(na + r), x(na + s));
      }
    }
    for (int i = 0; i < na; ++i) {
      for (int r = 0; r < nb; ++r) {
        if (same_block(i, na + r)) e += w12 * pair(potentials.V12, x(i), x(na + r));
      }
    }
    H.diagonal_(idx) = e;
  }

  H.norm_bound_ = H.diagonal_.cwiseAbs().maxCoeff() + 2.0 * H.hopping_ * total;
  return H;
}

SparseHamiltonian assemble_full(const LatticeGrid& grid, const SpeciesConfig& config,
                                const PotentialSet& potentials) {
  return assemble(grid, config, potentials, HamiltonianKind::Full, config.n_a(), config.n_b());
}

SparseHamiltonian assemble_modified(const LatticeGrid& grid, const SpeciesConfig& config,
                                    const PotentialSet& potentials, int n1, int n2) {
  return assemble(grid, config, potentials, HamiltonianKind::Modified, n1, n2);
}

void SparseHamiltonian::apply(const CVector& psi, CVector& out) const {
  const Index dim = dimension();
  require(psi.size() == dim, "SparseHamiltonian::apply: dimension mismatch");
  out = diagonal_.cast<Complex>().cwiseProduct(psi);

  const Index m = grid_.sites();
  for (Index stride : strides_) {
    const Index period = stride * m;
    for (Index outer = 0; outer < dim; outer += period) {
      for (Index d = 0; d < m; ++d) {
        const Index row = outer + d * stride;
        const Index up = outer + ((d + 1) % m) * stride;
        const Index down = outer + ((d + m - 1) % m) * stride;
        for (Index inner = 0; inner < stride; ++inner) {
          out(row + inner) -= hopping_ * (psi(up + inner) + psi(down + inner));
        }
      }
    }
  }
}

CVector SparseHamiltonian::apply(const CVector& psi) const {
  CVector out;
  apply(psi, out);
  return out;
}

CMatrix SparseHamiltonian::to_dense() const {
  const Index dim = dimension();
  CMatrix dense(dim, dim);
  CVector e = CVector::Zero(dim);
  for (Index j = 0; j < dim; ++j) {
    e(j) = 1.0;
    dense.col(j) = apply(e);
    e(j) = 0.0;
  }
  return dense;
}

// ---------------------------------------------------------------------------
// Constants

double correlation_prefactor(int N, int n, int m) {
  const double mn = static_cast<double>(m) * n;
  return 4.0 * mn / 9.0 * (8.0 * mn / N + 4.0 * (4.0 + 3.0 * m + 3.0 * n));
}

namespace {

BoundParams base_params(const SpeciesConfig& config, const PotentialSet& potentials,
                        const OperatorNorms& norms) {
  BoundParams p;
  p.N = config.total();
  p.c1 = static_cast<double>(config.n_a()) / p.N;
  p.c2 = static_cast<double>(config.n_b()) / p.N;
  p.c = std::min(p.c1, p.c2);
  const double strength =
      std::max({max_abs(potentials.V1), max_abs(potentials.V2), dft_l1_norm(potentials.V12)});
  p.Vcal = 12.0 * strength;
  p.Vbig = 2.0 * p.Vcal;
  p.Wcal = p.Vcal / 12.0;
  p.opnorm_product = norms.product();
  return p;
}

}  // namespace

BoundParams bound_params(const SpeciesConfig& config, const PotentialSet& potentials, int n,
                         int m, const OperatorNorms& norms) {
  const int smaller = std::min(config.n_a(), config.n_b());
  require(n >= 1 && n < smaller, "bound_params: need 1 <= n < min{N1, N2}");
  require(m >= 0 && m < smaller, "bound_params: need 0 <= m < min{N1, N2}");
  BoundParams p = base_params(config, potentials, norms);
  p.alpha = correlation_prefactor(p.N, n, m);
  return p;
}

void CommutatorLayout::validate(const SpeciesConfig& config) const {
  require(n1 >= 1 && m1 >= 1 && n2 >= 1 && m2 >= 1, "layout: block sizes must be positive");
  require(n1 < config.n_a() && m1 < config.n_a(), "layout: need n1, m1 < N1");
  require(n2 < config.n_b() && m2 < config.n_b(), "layout: need n2, m2 < N2");
  require(n1 + m1 <= config.n_a(), "layout: A-slot blocks overlap (n1 + m1 > N1)");
  require(n2 + m2 <= config.n_b(), "layout: B-slot blocks overlap (n2 + m2 > N2)");
}

BoundParams lr_bound_params(const SpeciesConfig& config, const PotentialSet& potentials,
                            const CommutatorLayout& layout, const OperatorNorms& norms) {
  layout.validate(config);
  return base_params(config, potentials, norms);
}

}  // namespace bosemix
