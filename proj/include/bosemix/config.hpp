#pragma once

// INI-style experiment configuration.
//
//   [system]      M, N1, N2, spacing
//   [potentials]  preset (zero | v12_delta), strength, U1, U2, V1, V2, V12
//   [state]       u_re, u_im, v_re, v_im
//   [layout]      n, m, n1, n2, m1, m2
//   [run]         times, sizes, witness_count, seed, hermitian, method,
//                 dense_threshold, krylov_dim, tol, hartree_dt, hartree_stepper
//   [output]      path, precision
//
// Arrays are comma-separated. Lines starting with '#' or ';' are comments.
// Unknown sections or keys are errors.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bosemix/hamiltonian.hpp"
#include "bosemix/hartree.hpp"
#include "bosemix/propagator.hpp"

namespace bosemix {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

enum class MethodChoice { Auto, Dense, Krylov };

struct ExperimentConfig {
  // system
  int sites = 2;
  int n_a = 2;
  int n_b = 2;
  double spacing = 1.0;

  // potentials
  std::string preset = "v12_delta";
  double strength = 1.0;
  std::optional<std::vector<double>> U1, U2, V1, V2, V12;

  // state (real and imaginary parts; empty means the default orbital)
  std::vector<double> u_re, u_im, v_re, v_im;

  // layout
  int n = 1;
  int m = 1;
  CommutatorLayout lr_layout;

  // run
  std::vector<double> times{0.25, 0.5, 1.0};
  std::vector<std::pair<int, int>> sizes;  // empty means {(N1, N2)}
  int witness_count = 8;
  std::uint64_t seed = 20240607;
  bool hermitian = false;
  MethodChoice method = MethodChoice::Auto;
  Index dense_threshold = 4096;
  int krylov_dim = 30;
  double tol = 1e-10;
  double hartree_dt = 1e-3;
  HartreeStepper hartree_stepper = HartreeStepper::Rk4;

  // output
  std::string output_path;
  int precision = 17;

  LatticeGrid grid() const { return LatticeGrid(sites, spacing); }
  std::vector<std::pair<int, int>> size_list() const;

  /// Potentials after applying the preset and explicit overrides.
  PotentialSet potentials() const;

  /// Normalized initial orbitals.
  CVector orbital_u() const;
  CVector orbital_v() const;

  /// Propagator settings for a given tensor dimension.
  PropagatorConfig propagator_config(Index dimension) const;

  /// Canonical text form; two configs with equal canonical text run
  /// identically.
  std::string canonical() const;

  /// FNV-1a 64 of canonical().
  std::uint64_t hash() const;

  /// Cross-field checks (throws ConfigError with line 0).
  void validate() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Default orbitals used when [state] does not specify them.
CVector default_orbital_u(int sites);
CVector default_orbital_v(int sites);

}  // namespace bosemix
