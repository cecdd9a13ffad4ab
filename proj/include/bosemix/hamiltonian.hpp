#pragma once

// Mean-field two-species Hamiltonian on the periodic lattice
//
//   H = sum_i (h1)_i + (1/N1) sum_{i<j} V1(x_i - x_j)
//     + sum_r (h2)_r + (1/N2) sum_{r<s} V2(y_r - y_s)
//     + (1/(N1+N2)) sum_{i,r} V12(x_i - y_r),      h = -Laplacian + U,
//
// and its decoupled variant H^(n1,n2), in which only pairs inside the block
// {first n1 A-slots, first n2 B-slots} or inside its complement interact.

#include <optional>
#include <vector>

#include "bosemix/tensor_space.hpp"

namespace bosemix {

/// Trap and pair potentials. Pair potentials are indexed by the periodic
/// displacement residue: V[d] = V(d mod M), so V[d] == V[M - d] is required.
struct PotentialSet {
  std::vector<double> U1, U2;
  std::vector<double> V1, V2, V12;

  /// All entries zero.
  static PotentialSet zero(int sites);
  /// V12 = unit delta at displacement 0, everything else zero.
  static PotentialSet v12_delta(int sites, double strength = 1.0);

  /// Throws InvalidArgument on wrong lengths, non-finite entries or odd pair
  /// potentials (tolerance 1e-12).
  void validate(int sites) const;
};

/// One-body operator -Laplacian + U (periodic stencil, spacing h).
CMatrix one_body(const LatticeGrid& grid, const std::vector<double>& trap);

/// Sum over q of |V~(q)| with V~(q) = (1/M) sum_x V(x) exp(-2 pi i q x / M).
double dft_l1_norm(const std::vector<double>& potential);

enum class HamiltonianKind { Full, Modified };

/// Hermitian operator stored as a position-diagonal vector plus on-the-fly
/// nearest-neighbour hopping in every slot.
class SparseHamiltonian {
 public:
  Index dimension() const noexcept { return diagonal_.size(); }
  const LatticeGrid& grid() const noexcept { return grid_; }
  const SpeciesConfig& config() const noexcept { return config_; }
  const PotentialSet& potentials() const noexcept { return potentials_; }
  HamiltonianKind kind() const noexcept { return kind_; }
  /// (n1, n2) for modified Hamiltonians, (N1, N2) for the full one.
  int block_a() const noexcept { return block_a_; }
  int block_b() const noexcept { return block_b_; }

  /// Diagonal in the position basis (traps, pair terms, kinetic 2/h^2 per slot).
  const RVector& diagonal() const noexcept { return diagonal_; }

  CVector apply(const CVector& psi) const;
  void apply(const CVector& psi, CVector& out) const;

  /// Gershgorin upper bound on the spectral norm.
  double norm_bound() const noexcept { return norm_bound_; }

  CMatrix to_dense() const;

 private:
  friend SparseHamiltonian assemble(const LatticeGrid&, const SpeciesConfig&,
                                    const PotentialSet&, HamiltonianKind, int, int);
  SparseHamiltonian(LatticeGrid grid, SpeciesConfig config, PotentialSet potentials)
      : grid_(grid), config_(config), potentials_(std::move(potentials)) {}

  LatticeGrid grid_;
  SpeciesConfig config_;
  PotentialSet potentials_;
  HamiltonianKind kind_ = HamiltonianKind::Full;
  int block_a_ = 0;
  int block_b_ = 0;
  RVector diagonal_;
  double hopping_ = 1.0;  // 1/h^2
  std::vector<Index> strides_;
  double norm_bound_ = 0.0;
};

SparseHamiltonian assemble(const LatticeGrid& grid, const SpeciesConfig& config,
                           const PotentialSet& potentials, HamiltonianKind kind, int n1, int n2);

SparseHamiltonian assemble_full(const LatticeGrid& grid, const SpeciesConfig& config,
                                const PotentialSet& potentials);

/// Requires 0 <= n1 <= N1 and 0 <= n2 <= N2.
SparseHamiltonian assemble_modified(const LatticeGrid& grid, const SpeciesConfig& config,
                                    const PotentialSet& potentials, int n1, int n2);

/// Scalar constants entering both growth bounds.
struct BoundParams {
  int N = 0;
  double c1 = 0.0, c2 = 0.0, c = 0.0;
  double Vbig = 0.0;   // 24 max{|V1|_inf, |V2|_inf, |V12~|_1}
  double Vcal = 0.0;   // 12 max{...}
  double Wcal = 0.0;   // Vcal / 12
  double alpha = 0.0;  // correlation prefactor; 0 when built for commutator bounds
  double opnorm_product = 1.0;
};

struct OperatorNorms {
  double a1 = 1.0, a2 = 1.0, b1 = 1.0, b2 = 1.0;
  double product() const noexcept { return a1 * a2 * b1 * b2; }
};

/// (4mn/9) (8mn/N + 4(4 + 3m + 3n)).
double correlation_prefactor(int N, int n, int m);

/// Constants for the correlation bound with n-body A1, B1 and m-body A2, B2.
/// Requires n, m < min{N1, N2}.
BoundParams bound_params(const SpeciesConfig& config, const PotentialSet& potentials, int n,
                         int m, const OperatorNorms& norms);

/// Slot layout of a commutator bound: A1 on A-slots 1..n1, B1 on B-slots
/// 1..n2, A2 on A-slots n1+1..n1+m1, B2 on B-slots n2+1..n2+m2.
struct CommutatorLayout {
  int n1 = 1, n2 = 1, m1 = 1, m2 = 1;
  /// Throws unless n1, m1 < N1, n2, m2 < N2 and the slots fit.
  void validate(const SpeciesConfig& config) const;
};

/// Constants for the commutator bound (alpha left at 0).
BoundParams lr_bound_params(const SpeciesConfig& config, const PotentialSet& potentials,
                            const CommutatorLayout& layout, const OperatorNorms& norms);

}  // namespace bosemix
