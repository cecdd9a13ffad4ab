#pragma once

#include "bosemix/hamiltonian.hpp"

namespace bosemix {

/// alpha / (c^2 N) * L * (exp(Vbig t) - 1). Throws on t < 0.
double theorem1_rhs(const BoundParams& params, double t);

/// L * (m1 + m2)(n1 + n2) / (3 c N) * (exp(Vcal t) - 1). Throws on t < 0.
double theorem2_rhs(const BoundParams& params, const CommutatorLayout& layout, double t);

/// (1 - epsilon) log(N) / Vbig, the time up to which the correlation bound
/// still vanishes as N grows. Requires epsilon in (0, 1).
double validity_horizon(const BoundParams& params, double epsilon);

}  // namespace bosemix
