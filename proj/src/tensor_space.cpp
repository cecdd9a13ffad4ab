#include "bosemix/tensor_space.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include "bosemix/linalg.hpp"

namespace bosemix {

namespace {

Index int_pow(Index base, int exponent) {
  Index r = 1;
  for (int i = 0; i < exponent; ++i) r *= base;
  return r;
}

// Stride of global slot s in the flat index.
Index slot_stride(int sites, int total_slots, int s) {
  return int_pow(sites, total_slots - 1 - s);
}

void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

}  // namespace

// ---------------------------------------------------------------------------
// LatticeGrid / SpeciesConfig

LatticeGrid::LatticeGrid(int sites, double spacing) : sites_(sites), spacing_(spacing) {
  require(sites >= 2, "LatticeGrid: need at least 2 sites");
  require(std::isfinite(spacing) && spacing > 0.0, "LatticeGrid: spacing must be positive");
}

int LatticeGrid::wrap(Index site) const noexcept {
  const Index r = site % sites_;
  return static_cast<int>(r < 0 ? r + sites_ : r);
}

int LatticeGrid::displacement(int j, int k) const noexcept {
  const int lo = -(sites_ / 2);
  return wrap(j - k - lo) + lo;
}

SpeciesConfig::SpeciesConfig(int n_a, int n_b) : n_a_(n_a), n_b_(n_b) {
  require(n_a >= 1 && n_b >= 1, "SpeciesConfig: both species need at least one particle");
}

Index tensor_dimension(const LatticeGrid& grid, const SpeciesConfig& config) {
  Index dim = 1;
  for (int s = 0; s < config.total(); ++s) {
    dim *= grid.sites();
    require(dim <= kMaxTensorDimension,
            "tensor dimension M^(N1+N2) exceeds " + std::to_string(kMaxTensorDimension));
  }
  return dim;
}

// ---------------------------------------------------------------------------
// Slots

SlotSet::SlotSet(Species species, std::vector<int> indices)
    : species_(species), indices_(std::move(indices)) {
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    require(indices_[i] >= 1, "SlotSet: slot indices are 1-based");
    if (i > 0) require(indices_[i] > indices_[i - 1], "SlotSet: indices must be strictly increasing");
  }
}

SlotSet SlotSet::range(Species species, int first, int count) {
  std::vector<int> idx(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) idx[static_cast<std::size_t>(i)] = first + i;
  return SlotSet(species, std::move(idx));
}

void SlotSet::check_against(const SpeciesConfig& config) const {
  const int n = species_ == Species::A ? config.n_a() : config.n_b();
  for (int i : indices_) {
    require(i <= n, "SlotSet: slot " + std::to_string(i) + " exceeds species population " +
                        std::to_string(n));
  }
}

int global_slot(const SpeciesConfig& config, Species species, int slot) {
  return species == Species::A ? slot - 1 : config.n_a() + slot - 1;
}

SlotLayout SlotLayout::build(const LatticeGrid& grid, const SpeciesConfig& config,
                             const std::vector<int>& global_slots) {
  const int m = grid.sites();
  const int total = config.total();
  std::vector<char> selected(static_cast<std::size_t>(total), 0);
  for (int g : global_slots) selected[static_cast<std::size_t>(g)] = 1;
  std::vector<int> rest;
  for (int s = 0; s < total; ++s) {
    if (!selected[static_cast<std::size_t>(s)]) rest.push_back(s);
  }

  // Offsets for a list of slots, first slot slowest.
  auto offsets = [&](const std::vector<int>& slots) {
    const int n = static_cast<int>(slots.size());
    std::vector<Index> out(static_cast<std::size_t>(int_pow(m, n)));
    for (std::size_t l = 0; l < out.size(); ++l) {
      Index rem = static_cast<Index>(l);
      Index off = 0;
      for (int j = n - 1; j >= 0; --j) {
        off += (rem % m) * slot_stride(m, total, slots[static_cast<std::size_t>(j)]);
        rem /= m;
      }
      out[l] = off;
    }
    return out;
  };

  SlotLayout layout;
  layout.local = offsets(global_slots);
  layout.bases = offsets(rest);
  return layout;
}

// ---------------------------------------------------------------------------
// States

MixtureState::MixtureState(LatticeGrid grid, SpeciesConfig config, CVector amplitudes,
                           std::optional<ProductFactors> factors)
    : grid_(grid), config_(config), amplitudes_(std::move(amplitudes)),
      factors_(std::move(factors)) {
  require(amplitudes_.size() == tensor_dimension(grid_, config_),
          "MixtureState: amplitude length must equal M^(N1+N2)");
}

MixtureState MixtureState::with_amplitudes(CVector amplitudes) const {
  return MixtureState(grid_, config_, std::move(amplitudes));
}

MixtureState product_state(const CVector& u, const CVector& v, const SpeciesConfig& config,
                           const LatticeGrid& grid) {
  const int m = grid.sites();
  require(u.size() == m && v.size() == m, "product_state: orbitals must have length M");
  require(std::abs(u.norm() - 1.0) <= 1e-12, "product_state: u is not normalized");
  require(std::abs(v.norm() - 1.0) <= 1e-12, "product_state: v is not normalized");

  tensor_dimension(grid, config);  // overflow guard
  // Build by repeated Kronecker extension, slot 0 ending up slowest.
  CVector amps = CVector::Ones(1);
  auto extend = [m](const CVector& left, const CVector& factor) {
    CVector out(left.size() * m);
    for (Index i = 0; i < left.size(); ++i) out.segment(i * m, m) = left(i) * factor;
    return out;
  };
  for (int i = 0; i < config.n_a(); ++i) amps = extend(amps, u);
  for (int r = 0; r < config.n_b(); ++r) amps = extend(amps, v);
  return MixtureState(grid, config, std::move(amps), ProductFactors{u, v});
}

// ---------------------------------------------------------------------------
// Embedded operators

struct EmbeddedOperator::NormCache {
  std::once_flag once;
  double value = 0.0;
};

EmbeddedOperator::EmbeddedOperator(CMatrix kernel, SlotSet slots_a, SlotSet slots_b,
                                   SpeciesConfig config, LatticeGrid grid)
    : kernel_(std::move(kernel)), slots_a_(std::move(slots_a)), slots_b_(std::move(slots_b)),
      config_(config), grid_(grid), norm_cache_(std::make_shared<NormCache>()) {
  require(slots_a_.empty() || slots_a_.species() == Species::A,
          "embed: first slot set must address species A");
  require(slots_b_.empty() || slots_b_.species() == Species::B,
          "embed: second slot set must address species B");
  slots_a_.check_against(config_);
  slots_b_.check_against(config_);

  const int k = static_cast<int>(slots_a_.size() + slots_b_.size());
  const Index expected = int_pow(grid_.sites(), k);
  require(kernel_.rows() == expected && kernel_.cols() == expected,
          "embed: kernel dimension must be M^k with k = " + std::to_string(k));

  std::vector<int> globals;
  for (int i : slots_a_.indices()) globals.push_back(global_slot(config_, Species::A, i));
  for (int r : slots_b_.indices()) globals.push_back(global_slot(config_, Species::B, r));
  layout_ = SlotLayout::build(grid_, config_, globals);
}

double EmbeddedOperator::spectral_norm() const {
  std::call_once(norm_cache_->once,
                 [this] { norm_cache_->value = bosemix::spectral_norm(kernel_); });
  return norm_cache_->value;
}

EmbeddedOperator EmbeddedOperator::adjoint() const {
  return EmbeddedOperator(kernel_.adjoint(), slots_a_, slots_b_, config_, grid_);
}

CVector EmbeddedOperator::apply(const CVector& amplitudes) const {
  const auto& local = layout_.local;
  const Index block = static_cast<Index>(local.size());
  require(amplitudes.size() == block * static_cast<Index>(layout_.bases.size()),
          "EmbeddedOperator::apply: vector length does not match the tensor space");

  CVector out(amplitudes.size());
  CVector gathered(block);
  CVector mapped(block);
  for (Index base : layout_.bases) {
    for (Index l = 0; l < block; ++l) gathered(l) = amplitudes(base + local[static_cast<std::size_t>(l)]);
    mapped.noalias() = kernel_ * gathered;
    for (Index l = 0; l < block; ++l) out(base + local[static_cast<std::size_t>(l)]) = mapped(l);
  }
  return out;
}

CMatrix EmbeddedOperator::to_dense() const {
  const Index dim = tensor_dimension(grid_, config_);
  CMatrix dense = CMatrix::Zero(dim, dim);
  const auto& local = layout_.local;
  const Index block = static_cast<Index>(local.size());
  for (Index base : layout_.bases) {
    for (Index r = 0; r < block; ++r) {
      for (Index c = 0; c < block; ++c) {
        dense(base + local[static_cast<std::size_t>(r)], base + local[static_cast<std::size_t>(c)]) =
            kernel_(r, c);
      }
    }
  }
  return dense;
}

EmbeddedOperator embed(const CMatrix& kernel, const SlotSet& slots_a, const SlotSet& slots_b,
                       const SpeciesConfig& config, const LatticeGrid& grid) {
  return EmbeddedOperator(kernel, slots_a, slots_b, config, grid);
}

MixtureState apply(const EmbeddedOperator& op, const MixtureState& psi) {
  require(psi.compatible_with(op.grid(), op.config()), "apply: incompatible grid or config");
  return psi.with_amplitudes(op.apply(psi.amplitudes()));
}

Complex expectation(const MixtureState& psi, const EmbeddedOperator& op) {
  require(psi.compatible_with(op.grid(), op.config()), "expectation: incompatible grid or config");
  return psi.amplitudes().dot(op.apply(psi.amplitudes()));
}

CMatrix one_body_rdm(const MixtureState& psi, Species species) {
  const auto& grid = psi.grid();
  const auto& config = psi.config();
  const SlotLayout layout =
      SlotLayout::build(grid, config, {global_slot(config, species, 1)});

  const int m = grid.sites();
  CMatrix rho = CMatrix::Zero(m, m);
  CVector column(m);
  const CVector& amps = psi.amplitudes();
  for (Index base : layout.bases) {
    for (int x = 0; x < m; ++x) column(x) = amps(base + layout.local[static_cast<std::size_t>(x)]);
    rho.noalias() += column * column.adjoint();
  }
  return rho;
}

CVector transpose_slots(const CVector& amplitudes, const LatticeGrid& grid,
                        const SpeciesConfig& config, int global_a, int global_b) {
  const int m = grid.sites();
  const int total = config.total();
  require(global_a >= 0 && global_a < total && global_b >= 0 && global_b < total,
          "transpose_slots: slot out of range");
  const Index stride_a = slot_stride(m, total, global_a);
  const Index stride_b = slot_stride(m, total, global_b);

  CVector out(amplitudes.size());
  for (Index idx = 0; idx < amplitudes.size(); ++idx) {
    const Index da = (idx / stride_a) % m;
    const Index db = (idx / stride_b) % m;
    out(idx + (db - da) * stride_a + (da - db) * stride_b) = amplitudes(idx);
  }
  return out;
}

double symmetry_defect(const MixtureState& psi) {
  const auto& config = psi.config();
  double worst = 0.0;
  auto scan = [&](Species species, int count) {
    for (int s = 1; s < count; ++s) {
      const int a = global_slot(config, species, s);
      const CVector swapped = transpose_slots(psi.amplitudes(), psi.grid(), config, a, a + 1);
      worst = std::max(worst, (psi.amplitudes() - swapped).norm());
    }
  };
  scan(Species::A, config.n_a());
  scan(Species::B, config.n_b());
  return worst;
}

}  // namespace bosemix
