#pragma once

#include <string>

#include "bosemix/config.hpp"

namespace bosemix {

enum ExitCode : int {
  kExitPass = 0,
  kExitViolation = 1,
  kExitConfigError = 2,
  kExitNumericalFailure = 3,
};

struct SuiteOutput {
  std::string csv;
  int exit_code = kExitPass;
  /// First violating row or failure description; empty on success.
  std::string message;
};

/// Commutator-norm witnesses against the commutator growth bound.
/// Columns: t,n1,n2,m1,m2,N1,N2,sample,measured,bound,ratio.
SuiteOutput run_lr_sweep(const ExperimentConfig& config, int threads = 1);

/// Correlations against the correlation growth bound.
/// Columns: t,n,m,N1,N2,sample,abs_corr,bound,ratio.
SuiteOutput run_corr_sweep(const ExperimentConfig& config, int threads = 1);

/// Projector decomposition identity.
/// Columns: t,N1,N2,sample,P_re,P_im,Q_re,Q_im,R_re,R_im,corr_re,corr_im,residual.
SuiteOutput run_decomposition_check(const ExperimentConfig& config, int threads = 1);

/// Many-body one-body density matrices against Hartree orbitals.
/// Columns: t,N1,N2,gap_A,gap_B.
SuiteOutput run_hartree_compare(const ExperimentConfig& config, int threads = 1);

/// 17 significant digits (or `precision`), lowercase scientific notation.
std::string format_csv_number(double x, int precision = 17);

}  // namespace bosemix
