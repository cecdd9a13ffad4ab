#pragma once

// First-quantized tensor space of a two-species mixture on a periodic 1D
// lattice.
//
// Index layout: a basis state is the tuple (x_1, ..., x_N1; y_1, ..., y_N2)
// of site labels in [0, M). Global slot s runs over the A-slots first, then
// the B-slots, and the flat index is row-major with global slot 0 (A-slot 1)
// slowest:
//
//   index = sum_s digit_s * M^(N1 + N2 - 1 - s)
//
// Kernels of embedded operators use the same convention on their own k
// slots, listed A-slots first, in increasing slot order.

#include <memory>
#include <optional>
#include <vector>

#include "bosemix/types.hpp"

namespace bosemix {

/// Periodic lattice with M sites and lattice constant `spacing`.
class LatticeGrid {
 public:
  explicit LatticeGrid(int sites, double spacing = 1.0);

  int sites() const noexcept { return sites_; }
  double spacing() const noexcept { return spacing_; }

  /// Residue of `site` modulo M, in [0, M).
  int wrap(Index site) const noexcept;

  /// Periodic displacement j - k reduced to {-floor(M/2), ..., ceil(M/2) - 1}.
  int displacement(int j, int k) const noexcept;

  bool operator==(const LatticeGrid&) const = default;

 private:
  int sites_;
  double spacing_;
};

class SpeciesConfig {
 public:
  SpeciesConfig(int n_a, int n_b);

  int n_a() const noexcept { return n_a_; }
  int n_b() const noexcept { return n_b_; }
  int total() const noexcept { return n_a_ + n_b_; }

  bool operator==(const SpeciesConfig&) const = default;

 private:
  int n_a_;
  int n_b_;
};

/// Largest tensor dimension any constructor accepts (2^27 amplitudes, 2 GiB).
inline constexpr Index kMaxTensorDimension = Index{1} << 27;

/// M^(N1+N2); throws InvalidArgument when it exceeds kMaxTensorDimension.
Index tensor_dimension(const LatticeGrid& grid, const SpeciesConfig& config);

enum class Species { A, B };

/// Ordered particle slots (1-based) within one species.
class SlotSet {
 public:
  SlotSet() = default;
  SlotSet(Species species, std::vector<int> indices);

  /// Slots first, first+1, ..., first+count-1.
  static SlotSet range(Species species, int first, int count);

  Species species() const noexcept { return species_; }
  const std::vector<int>& indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }

  /// Throws unless every index fits the species population of `config`.
  void check_against(const SpeciesConfig& config) const;

 private:
  Species species_ = Species::A;
  std::vector<int> indices_;
};

/// Global slot position (0-based, A-slots first) of a 1-based species slot.
int global_slot(const SpeciesConfig& config, Species species, int slot);

/// Flat offsets that address a subset of global slots.
///
/// `local[l]` is the flat offset of local multi-index l (first listed slot
/// slowest); `bases` enumerates the flat indices whose selected digits are all
/// zero. Every flat index is uniquely bases[b] + local[l].
struct SlotLayout {
  std::vector<Index> local;
  std::vector<Index> bases;

  static SlotLayout build(const LatticeGrid& grid, const SpeciesConfig& config,
                          const std::vector<int>& global_slots);
};

struct ProductFactors {
  CVector u;
  CVector v;
};

/// Amplitude vector over the full distinguishable tensor space.
class MixtureState {
 public:
  MixtureState(LatticeGrid grid, SpeciesConfig config, CVector amplitudes,
               std::optional<ProductFactors> factors = std::nullopt);

  const LatticeGrid& grid() const noexcept { return grid_; }
  const SpeciesConfig& config() const noexcept { return config_; }
  const CVector& amplitudes() const noexcept { return amplitudes_; }
  Index dimension() const noexcept { return amplitudes_.size(); }
  double norm() const { return amplitudes_.norm(); }

  /// Set only for states built by product_state(); the factors are dropped
  /// by every operation that produces a new state.
  const std::optional<ProductFactors>& product_factors() const noexcept {
    return factors_;
  }

  /// Same grid and config, new amplitudes, no product factors.
  MixtureState with_amplitudes(CVector amplitudes) const;

  bool compatible_with(const LatticeGrid& grid,
                       const SpeciesConfig& config) const noexcept {
    return grid_ == grid && config_ == config;
  }

 private:
  LatticeGrid grid_;
  SpeciesConfig config_;
  CVector amplitudes_;
  std::optional<ProductFactors> factors_;
};

/// u^{(x)N1} (x) v^{(x)N2}. Both factors must have unit norm within 1e-12.
MixtureState product_state(const CVector& u, const CVector& v,
                           const SpeciesConfig& config, const LatticeGrid& grid);

/// A k-particle kernel lifted to chosen A- and B-slots (identity elsewhere).
class EmbeddedOperator {
 public:
  EmbeddedOperator(CMatrix kernel, SlotSet slots_a, SlotSet slots_b,
                   SpeciesConfig config, LatticeGrid grid);

  const CMatrix& kernel() const noexcept { return kernel_; }
  const SlotSet& slots_a() const noexcept { return slots_a_; }
  const SlotSet& slots_b() const noexcept { return slots_b_; }
  const SpeciesConfig& config() const noexcept { return config_; }
  const LatticeGrid& grid() const noexcept { return grid_; }

  /// Spectral norm of the kernel (equal to the norm of the embedding).
  /// Computed once, thread-safe.
  double spectral_norm() const;

  /// Same slots, adjoint kernel.
  EmbeddedOperator adjoint() const;

  /// Action on a raw amplitude vector of the full tensor space.
  CVector apply(const CVector& amplitudes) const;

  /// Dense matrix of the embedding on the full tensor space.
  CMatrix to_dense() const;

 private:
  struct NormCache;

  CMatrix kernel_;
  SlotSet slots_a_;
  SlotSet slots_b_;
  SpeciesConfig config_;
  LatticeGrid grid_;
  SlotLayout layout_;
  std::shared_ptr<NormCache> norm_cache_;
};

EmbeddedOperator embed(const CMatrix& kernel, const SlotSet& slots_a,
                       const SlotSet& slots_b, const SpeciesConfig& config,
                       const LatticeGrid& grid);

/// op * psi, not renormalized.
MixtureState apply(const EmbeddedOperator& op, const MixtureState& psi);

/// <psi, op psi>.
Complex expectation(const MixtureState& psi, const EmbeddedOperator& op);

/// Reduced density matrix of slot 1 of `species` (partial trace over all
/// other slots), an M x M matrix.
CMatrix one_body_rdm(const MixtureState& psi, Species species);

/// Amplitudes with the digits of two global slots exchanged.
CVector transpose_slots(const CVector& amplitudes, const LatticeGrid& grid,
                        const SpeciesConfig& config, int global_a, int global_b);

/// max over adjacent same-species transpositions P of ||psi - P psi||.
double symmetry_defect(const MixtureState& psi);

}  // namespace bosemix
