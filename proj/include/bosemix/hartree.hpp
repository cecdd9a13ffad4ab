#pragma once

// Coupled Hartree equations on the lattice
//
//   i du/dt = h1 u + (V1 * |u|^2) u + c2 (V12 * |v|^2) u
//   i dv/dt = h2 v + (V2 * |v|^2) v + c1 (V12 * |u|^2) v
//
// with the unweighted periodic convolution (V * rho)(j) = sum_k V(j - k) rho_k.
// This is the exact mean-field counterpart of SparseHamiltonian.

#include <utility>
#include <vector>

#include "bosemix/hamiltonian.hpp"
#include "bosemix/propagator.hpp"

namespace bosemix {

struct HartreeState {
  CVector u;
  CVector v;
  double t = 0.0;
};

enum class HartreeStepper { Rk4, Strang };

struct HartreeParams {
  LatticeGrid grid{2};
  PotentialSet potentials;
  double c1 = 0.5;
  double c2 = 0.5;
  double dt = 1e-3;
  HartreeStepper stepper = HartreeStepper::Rk4;

  /// Population ratios N_k / N of a many-body configuration.
  static HartreeParams matching(const SparseHamiltonian& H, double dt,
                                HartreeStepper stepper = HartreeStepper::Rk4);

  void validate() const;
};

/// Periodic lattice convolution sum_k V(j - k) rho_k.
RVector lattice_convolution(const std::vector<double>& potential, const RVector& density);

/// (du/dt, dv/dt), i.e. -i times the right-hand sides.
std::pair<CVector, CVector> hartree_rhs(const HartreeState& state, const HartreeParams& params);

/// c1 [<u,h1 u> + 1/2 <|u|^2, V1*|u|^2>] + c2 [<v,h2 v> + 1/2 <|v|^2, V2*|v|^2>]
///   + c1 c2 <|u|^2, V12*|v|^2>, conserved by the flow.
double hartree_energy(const HartreeState& state, const HartreeParams& params);

/// Upper bound on dt times the spectral radius of the linearized generator.
double stability_number(const HartreeParams& params);

/// Trajectory from state0 to state0.t + T, one entry per step including the
/// initial state. T must be an integer multiple of dt (within 1e-9 relative).
/// Throws InvalidArgument when the rk4 stepper is used with
/// stability_number > 0.5.
std::vector<HartreeState> integrate(const HartreeState& state0, const HartreeParams& params,
                                    double T);

/// State of a trajectory at time t (nearest step within dt/2).
const HartreeState& state_at(const std::vector<HartreeState>& trajectory, double t);

struct GapRow {
  double t = 0.0;
  double gap_a = 0.0;
  double gap_b = 0.0;
};

/// (1/2) || rho - |orbital><orbital| ||_1.
double trace_distance_to_pure(const CMatrix& rho, const CVector& orbital);

/// Gap table at `times`. `psi0` must be the product state of the
/// trajectory's initial orbitals and `params` must share the grid and
/// potentials of H, with c_k = N_k / N.
std::vector<GapRow> factorization_gap(const SparseHamiltonian& H, const MixtureState& psi0,
                                      const HartreeParams& params,
                                      const std::vector<HartreeState>& trajectory,
                                      const std::vector<double>& times,
                                      const PropagatorConfig& cfg = {});

}  // namespace bosemix
