#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bosemix/propagator.hpp"
#include "oracles.hpp"

using namespace bosemix;

namespace {

PotentialSet random_potentials(std::mt19937_64& rng, int M) {
  PotentialSet p;
  p.U1 = oracle::random_trap(rng, M);
  p.U2 = oracle::random_trap(rng, M);
  p.V1 = oracle::random_even(rng, M);
  p.V2 = oracle::random_even(rng, M);
  p.V12 = oracle::random_even(rng, M);
  return p;
}

PropagatorConfig dense_cfg() {
  PropagatorConfig cfg;
  cfg.method = PropagationMethod::Dense;
  return cfg;
}

PropagatorConfig krylov_cfg() {
  PropagatorConfig cfg;
  cfg.method = PropagationMethod::Krylov;
  return cfg;
}

CVector normalized(CVector v) { return v / v.norm(); }

}  // namespace

TEST(PropagatorConfig, Validation) {
  PropagatorConfig cfg;
  cfg.krylov_dim = 1;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.tol = 0.0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.substep = -1.0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
}

TEST(Evolve, TimeZeroIsIdentity) {
  std::mt19937_64 rng(40);
  const LatticeGrid g(3);
  const SpeciesConfig c(2, 1);
  const auto H = assemble_full(g, c, random_potentials(rng, 3));
  const MixtureState psi(g, c, normalized(oracle::random_vector(rng, 27)));
  for (const auto& cfg : {dense_cfg(), krylov_cfg()}) {
    EXPECT_EQ(evolve(H, psi, 0.0, cfg).amplitudes(), psi.amplitudes());
  }
}

TEST(Evolve, EigenstatePicksUpExactPhase) {
  // Without interactions a product of lattice plane waves is an eigenstate
  // with energy sum_k (2 - 2 cos(2 pi q_k / M)).
  const int M = 4;
  const LatticeGrid g(M);
  const SpeciesConfig c(2, 2);
  auto wave = [&](int q) {
    CVector w(M);
    for (int x = 0; x < M; ++x) w(x) = std::polar(1.0 / std::sqrt(M), 2.0 * M_PI * q * x / M);
    return w;
  };
  const auto psi = product_state(wave(1), wave(2), c, g);
  const double E = 2 * (2 - 2 * std::cos(2 * M_PI / M)) + 2 * (2 - 2 * std::cos(4 * M_PI / M));
  const auto H = assemble_full(g, c, PotentialSet::zero(M));
  const double t = 1.3;
  for (const auto& cfg : {dense_cfg(), krylov_cfg()}) {
    const CVector got = evolve(H, psi, t, cfg).amplitudes();
    const CVector expected = std::polar(1.0, -E * t) * psi.amplitudes();
    for (Index i = 0; i < got.size(); ++i) EXPECT_LT(std::abs(got(i) - expected(i)), 1e-10);
  }
}

TEST(Evolve, PositionDiagonalPartGivesEntrywisePhases) {
  // exp(-itH) on a position eigenstate to first order in t: only the
  // diagonal phase and single hops appear. Check the diagonal amplitude
  // against exp(-i t H_ii) + O(t^2).
  std::mt19937_64 rng(41);
  const int M = 3;
  const LatticeGrid g(M);
  const SpeciesConfig c(1, 2);
  const auto H = assemble_full(g, c, random_potentials(rng, M));
  const double t = 1e-4;
  for (Index i : {Index{0}, Index{5}, Index{17}}) {
    CVector e = CVector::Zero(27);
    e(i) = 1.0;
    const CVector out = evolve(H, MixtureState(g, c, e), t, krylov_cfg()).amplitudes();
    EXPECT_LT(std::abs(out(i) - std::exp(Complex(0.0, -t * H.diagonal()(i)))), 1e-7);
  }
}

TEST(Evolve, KrylovMatchesPadeOracle) {
  std::mt19937_64 rng(42);
  struct Case { int M, N1, N2; };
  for (const Case cs : {Case{2, 2, 2}, Case{3, 2, 2}, Case{4, 2, 2}, Case{2, 3, 3}}) {
    const LatticeGrid g(cs.M);
    const SpeciesConfig c(cs.N1, cs.N2);
    const PotentialSet p = random_potentials(rng, cs.M);
    const auto H = assemble_full(g, c, p);
    const CMatrix U = oracle::expm(oracle::hamiltonian(cs.M, 1.0, cs.N1, cs.N2, {p.U1, p.U2, p.V1, p.V2, p.V12}), 0.7);
    const MixtureState psi(g, c, normalized(oracle::random_vector(rng, H.dimension())));
    const CVector ref = U * psi.amplitudes();
    EXPECT_LT((evolve(H, psi, 0.7, krylov_cfg()).amplitudes() - ref).norm(), 1e-8);
    EXPECT_LT((evolve(H, psi, 0.7, dense_cfg()).amplitudes() - ref).norm(), 1e-8);
  }
}

TEST(Evolve, NegativeTimeInvertsForwardEvolution) {
  std::mt19937_64 rng(43);
  const LatticeGrid g(3);
  const SpeciesConfig c(2, 2);
  const auto H = assemble_full(g, c, random_potentials(rng, 3));
  const MixtureState psi(g, c, normalized(oracle::random_vector(rng, 81)));
  const auto back = evolve(H, evolve(H, psi, 0.9, krylov_cfg()), -0.9, krylov_cfg());
  EXPECT_LT((back.amplitudes() - psi.amplitudes()).norm(), 1e-9);
}

TEST(Evolve, RejectsMismatchAndOversizedDense) {
  const auto H = assemble_full(LatticeGrid(2), SpeciesConfig(2, 2), PotentialSet::zero(2));
  const MixtureState other(LatticeGrid(2), SpeciesConfig(1, 3), CVector::Ones(16) / 4.0);
  EXPECT_THROW(evolve(H, other, 0.1), InvalidArgument);
  PropagatorConfig cfg = dense_cfg();
  cfg.dense_threshold = 8;
  EXPECT_THROW(Propagator(H, cfg), InvalidArgument);
  EXPECT_THROW(Propagator(H, krylov_cfg()).unitary(0.1), InvalidArgument);
}

TEST(Evolve, UnreachableToleranceRaisesNumericalError) {
  std::mt19937_64 rng(44);
  const auto H = assemble_full(LatticeGrid(3), SpeciesConfig(2, 2), random_potentials(rng, 3));
  PropagatorConfig cfg = krylov_cfg();
  cfg.krylov_dim = 2;
  cfg.tol = 1e-300;
  cfg.substep = 1.0;
  const Propagator prop(H, cfg);
  try {
    prop.apply(normalized(oracle::random_vector(rng, 81)), 1.0);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_GT(e.residual(), 0.0);
  }
}

TEST(Propagator, DenseUnitaryMatchesOracle) {
  std::mt19937_64 rng(45);
  const int M = 2;
  const PotentialSet p = random_potentials(rng, M);
  const auto H = assemble_full(LatticeGrid(M), SpeciesConfig(2, 2), p);
  const Propagator prop(H, dense_cfg());
  const CMatrix ref = oracle::expm(oracle::hamiltonian(M, 1.0, 2, 2, {p.U1, p.U2, p.V1, p.V2, p.V12}), -0.4);
  EXPECT_LT((prop.unitary(-0.4) - ref).norm(), 1e-10);
  ASSERT_NE(prop.eigenvalues(), nullptr);
  EXPECT_EQ(Propagator(H, krylov_cfg()).eigenvalues(), nullptr);
}

TEST(Heisenberg, TimeZeroAndIdentity) {
  std::mt19937_64 rng(46);
  const LatticeGrid g(2);
  const SpeciesConfig c(2, 2);
  const auto H = assemble_full(g, c, random_potentials(rng, 2));
  const auto op = embed(oracle::random_matrix(rng, 4), SlotSet(Species::A, {1}), SlotSet(Species::B, {2}), c, g);
  EXPECT_LT((heisenberg_dense(H, op, 0.0) - op.to_dense()).norm(), 1e-12);
  const auto id = embed(CMatrix::Identity(2, 2), SlotSet(Species::A, {2}), SlotSet(), c, g);
  EXPECT_LT((heisenberg_dense(H, id, 0.8) - CMatrix::Identity(16, 16)).norm(), 1e-12);
}

TEST(Heisenberg, PreservesSpectrum) {
  std::mt19937_64 rng(47);
  const LatticeGrid g(2);
  const SpeciesConfig c(2, 2);
  const auto H = assemble_full(g, c, random_potentials(rng, 2));
  const auto op = embed(oracle::random_hermitian(rng, 4), SlotSet(Species::A, {1}), SlotSet(Species::B, {1}), c, g);
  const CMatrix evolved = heisenberg_dense(H, op, 1.1);
  const RVector before = Eigen::SelfAdjointEigenSolver<CMatrix>(op.to_dense(), Eigen::EigenvaluesOnly).eigenvalues();
  const RVector after = Eigen::SelfAdjointEigenSolver<CMatrix>(0.5 * (evolved + evolved.adjoint()), Eigen::EigenvaluesOnly).eigenvalues();
  EXPECT_LT((before - after).cwiseAbs().maxCoeff(), 1e-8);
  const CMatrix U = oracle::expm(H.to_dense(), 1.1);
  EXPECT_LT((evolved - U.adjoint() * op.to_dense() * U).norm(), 1e-9);
}

// --- properties --------------------------------------------------------------

class PropagatorProperty : public ::testing::TestWithParam<PropagationMethod> {};

TEST_P(PropagatorProperty, UnitarityGroupLawEnergyAndSymmetry) {
  std::mt19937_64 rng(50 + static_cast<int>(GetParam()));
  PropagatorConfig cfg;
  cfg.method = GetParam();
  for (int trial = 0; trial < 4; ++trial) {
    const int M = 2 + trial % 3;
    const LatticeGrid g(M);
    const SpeciesConfig c(2, 2);
    const auto H = assemble_full(g, c, random_potentials(rng, M));
    const Propagator prop(H, cfg);
    const auto psi = product_state(normalized(oracle::random_vector(rng, M)), normalized(oracle::random_vector(rng, M)), c, g);
    ASSERT_LE(symmetry_defect(psi), 1e-10);
    const double s = 0.3 + 0.1 * trial;
    const double t = 0.55;
    const CVector a = prop.apply(psi.amplitudes(), s);
    const CVector st = prop.apply(psi.amplitudes(), s + t);
    const CVector composed = prop.apply(a, t);

    EXPECT_LE(std::abs(st.norm() - 1.0), 1e-9);
    EXPECT_LT((composed - st).norm(), 1e-8);
    const double e0 = psi.amplitudes().dot(H.apply(psi.amplitudes())).real();
    const double e1 = st.dot(H.apply(st)).real();
    EXPECT_LE(std::abs(e1 - e0), 1e-8 * H.norm_bound());
    EXPECT_LE(symmetry_defect(psi.with_amplitudes(st)), 1e-8);
  }
}

INSTANTIATE_TEST_SUITE_P(Methods, PropagatorProperty,
                         ::testing::Values(PropagationMethod::Dense, PropagationMethod::Krylov));
