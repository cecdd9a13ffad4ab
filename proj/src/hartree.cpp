#include "bosemix/hartree.hpp"

#include <algorithm>
#include <cmath>
#include <string>

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

RVector density(const CVector& psi) { return psi.cwiseAbs2(); }

// Mean-field potentials felt by u and v.
std::pair<RVector, RVector> mean_fields(const HartreeState& s, const HartreeParams& p) {
  const RVector rho_u = density(s.u);
  const RVector rho_v = density(s.v);
  RVector wu = lattice_convolution(p.potentials.V1, rho_u) +
               p.c2 * lattice_convolution(p.potentials.V12, rho_v);
  RVector wv = lattice_convolution(p.potentials.V2, rho_v) +
               p.c1 * lattice_convolution(p.potentials.V12, rho_u);
  return {std::move(wu), std::move(wv)};
}

// exp(-i dt h) for a Hermitian one-body matrix.
CMatrix one_body_exponential(const CMatrix& h, double dt) {
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(h);
  const CVector phases = (eig.eigenvalues() * Complex(0.0, -dt)).array().exp().matrix();
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

// (-Laplacian + U) psi via the periodic stencil.
CVector apply_one_body(const LatticeGrid& grid, const std::vector<double>& trap, const CVector& psi) {
  const int m = grid.sites();
  const double hop = 1.0 / (grid.spacing() * grid.spacing());
  CVector out(m);
  for (int j = 0; j < m; ++j) {
    out(j) = (2.0 * hop + trap[static_cast<std::size_t>(j)]) * psi(j) -
             hop * (psi(grid.wrap(j + 1)) + psi(grid.wrap(j - 1)));
  }
  return out;
}

HartreeState add_scaled(const HartreeState& s, const std::pair<CVector, CVector>& k, double h) {
  return HartreeState{s.u + h * k.first, s.v + h * k.second, s.t + h};
}

}  // namespace

HartreeParams HartreeParams::matching(const SparseHamiltonian& H, double dt,
                                      HartreeStepper stepper) {
  HartreeParams p;
  p.grid = H.grid();
  p.potentials = H.potentials();
  p.c1 = static_cast<double>(H.config().n_a()) / H.config().total();
  p.c2 = static_cast<double>(H.config().n_b()) / H.config().total();
  p.dt = dt;
  p.stepper = stepper;
  return p;
}

void HartreeParams::validate() const {
  potentials.validate(grid.sites());
  require(c1 > 0.0 && c1 < 1.0 && c2 > 0.0 && c2 < 1.0, "HartreeParams: c1, c2 must lie in (0, 1)");
  require(std::abs(c1 + c2 - 1.0) <= 1e-12, "HartreeParams: c1 + c2 must equal 1");
  require(std::isfinite(dt) && dt > 0.0, "HartreeParams: dt must be positive");
}

RVector lattice_convolution(const std::vector<double>& potential, const RVector& density) {
  const Index m = density.size();
  require(static_cast<Index>(potential.size()) == m, "lattice_convolution: length mismatch");
  RVector out = RVector::Zero(m);
  for (Index j = 0; j < m; ++j) {
    double acc = 0.0;
    for (Index k = 0; k < m; ++k) acc += potential[static_cast<std::size_t>((j - k + m) % m)] * density(k);
    out(j) = acc;
  }
  return out;
}

std::pair<CVector, CVector> hartree_rhs(const HartreeState& state, const HartreeParams& params) {
  const auto [wu, wv] = mean_fields(state, params);
  const auto& p = params.potentials;
  const Complex minus_i(0.0, -1.0);
  CVector du = minus_i * (apply_one_body(params.grid, p.U1, state.u) +
                          wu.cast<Complex>().cwiseProduct(state.u));
  CVector dv = minus_i * (apply_one_body(params.grid, p.U2, state.v) +
                          wv.cast<Complex>().cwiseProduct(state.v));
  return {std::move(du), std::move(dv)};
}

double hartree_energy(const HartreeState& state, const HartreeParams& params) {
  const auto& p = params.potentials;
  const RVector rho_u = density(state.u);
  const RVector rho_v = density(state.v);
  const double ea = state.u.dot(apply_one_body(params.grid, p.U1, state.u)).real() +
                    0.5 * rho_u.dot(lattice_convolution(params.potentials.V1, rho_u));
  const double eb = state.v.dot(apply_one_body(params.grid, p.U2, state.v)).real() +
                    0.5 * rho_v.dot(lattice_convolution(params.potentials.V2, rho_v));
  const double cross = rho_u.dot(lattice_convolution(params.potentials.V12, rho_v));
  return params.c1 * ea + params.c2 * eb + params.c1 * params.c2 * cross;
}

double stability_number(const HartreeParams& params) {
  const double kinetic = 4.0 / (params.grid.spacing() * params.grid.spacing());
  const auto& p = params.potentials;
  const double radius_a = kinetic + max_abs(p.U1) + max_abs(p.V1) + params.c2 * max_abs(p.V12);
  const double radius_b = kinetic + max_abs(p.U2) + max_abs(p.V2) + params.c1 * max_abs(p.V12);
  return params.dt * std::max(radius_a, radius_b);
}

std::vector<HartreeState> integrate(const HartreeState& state0, const HartreeParams& params,
                                    double T) {
  params.validate();
  const int m = params.grid.sites();
  require(state0.u.size() == m && state0.v.size() == m, "integrate: orbitals must have length M");
  require(T >= 0.0, "integrate: T must be non-negative");
  const double exact_steps = T / params.dt;
  const long steps = std::lround(exact_steps);
  require(std::abs(exact_steps - static_cast<double>(steps)) <= 1e-9 * std::max(1.0, exact_steps),
          "integrate: T must be an integer multiple of dt");
  if (params.stepper == HartreeStepper::Rk4) {
    const double sn = stability_number(params);
    require(sn <= 0.5, "integrate: rk4 stability violated, dt * spectral radius = " +
                           std::to_string(sn) + " > 0.5");
  }

  std::vector<HartreeState> trajectory;
  trajectory.reserve(static_cast<std::size_t>(steps) + 1);
  trajectory.push_back(state0);
  const double dt = params.dt;

  if (params.stepper == HartreeStepper::Rk4) {
    for (long s = 0; s < steps; ++s) {
      const HartreeState y = trajectory.back();
      const auto k1 = hartree_rhs(y, params);
      const auto k2 = hartree_rhs(add_scaled(y, k1, dt / 2), params);
      const auto k3 = hartree_rhs(add_scaled(y, k2, dt / 2), params);
      const auto k4 = hartree_rhs(add_scaled(y, k3, dt), params);
      HartreeState next;
      next.u = y.u + dt / 6 * (k1.first + 2.0 * k2.first + 2.0 * k3.first + k4.first);
      next.v = y.v + dt / 6 * (k1.second + 2.0 * k2.second + 2.0 * k3.second + k4.second);
      next.t = state0.t + (s + 1) * dt;
      trajectory.push_back(std::move(next));
    }
    return trajectory;
  }

  // Strang splitting: half mean-field phase, full one-body step, half phase.
  // The phase step leaves densities unchanged, so it is exact.
  const CMatrix kin_a = one_body_exponential(one_body(params.grid, params.potentials.U1), dt);
  const CMatrix kin_b = one_body_exponential(one_body(params.grid, params.potentials.U2), dt);
  auto half_phase = [&](HartreeState& s) {
    const auto [wu, wv] = mean_fields(s, params);
    for (int j = 0; j < m; ++j) {
      s.u(j) *= std::exp(Complex(0.0, -0.5 * dt * wu(j)));
      s.v(j) *= std::exp(Complex(0.0, -0.5 * dt * wv(j)));
    }
  };
  for (long s = 0; s < steps; ++s) {
    HartreeState next = trajectory.back();
    half_phase(next);
    next.u = kin_a * next.u;
    next.v = kin_b * next.v;
    half_phase(next);
    next.t = state0.t + (s + 1) * dt;
    trajectory.push_back(std::move(next));
  }
  return trajectory;
}

const HartreeState& state_at(const std::vector<HartreeState>& trajectory, double t) {
  require(!trajectory.empty(), "state_at: empty trajectory");
  const HartreeState* best = &trajectory.front();
  for (const auto& s : trajectory) {
    if (std::abs(s.t - t) < std::abs(best->t - t)) best = &s;
  }
  const double dt = trajectory.size() > 1 ? trajectory[1].t - trajectory[0].t : 0.0;
  require(std::abs(best->t - t) <= 0.5 * dt + 1e-12, "state_at: time outside the trajectory");
  return *best;
}

double trace_distance_to_pure(const CMatrix& rho, const CVector& orbital) {
  const CMatrix diff = rho - orbital * orbital.adjoint();
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(diff, Eigen::EigenvaluesOnly);
  return 0.5 * eig.eigenvalues().cwiseAbs().sum();
}

std::vector<GapRow> factorization_gap(const SparseHamiltonian& H, const MixtureState& psi0,
                                      const HartreeParams& params,
                                      const std::vector<HartreeState>& trajectory,
                                      const std::vector<double>& times,
                                      const PropagatorConfig& cfg) {
  require(psi0.compatible_with(H.grid(), H.config()), "factorization_gap: incompatible state");
  require(psi0.product_factors().has_value(), "factorization_gap: psi0 must be a product state");
  require(params.grid == H.grid(), "factorization_gap: grid mismatch");
  const auto& a = params.potentials;
  const auto& b = H.potentials();
  require(a.U1 == b.U1 && a.U2 == b.U2 && a.V1 == b.V1 && a.V2 == b.V2 && a.V12 == b.V12,
          "factorization_gap: potential mismatch between many-body and Hartree dynamics");
  const double c1 = static_cast<double>(H.config().n_a()) / H.config().total();
  require(std::abs(params.c1 - c1) <= 1e-12, "factorization_gap: Hartree c_k must equal N_k / N");

  const Propagator propagator(H, cfg);
  std::vector<GapRow> rows;
  rows.reserve(times.size());
  for (double t : times) {
    const HartreeState& orbitals = state_at(trajectory, t);
    const MixtureState psi_t = psi0.with_amplitudes(propagator.apply(psi0.amplitudes(), t));
    GapRow row;
    row.t = t;
    row.gap_a = trace_distance_to_pure(one_body_rdm(psi_t, Species::A), orbitals.u);
    row.gap_b = trace_distance_to_pure(one_body_rdm(psi_t, Species::B), orbitals.v);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace bosemix
