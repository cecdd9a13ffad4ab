#include "bosemix/bounds.hpp"

#include <cmath>

namespace bosemix {

namespace {

void require_time(double t) {
  if (!(t >= 0.0)) throw InvalidArgument("bound: time must be non-negative");
}

}  // namespace

// expm1 in long double keeps both sides of the one-sided comparisons
// meaningful near t = 0.

double theorem1_rhs(const BoundParams& params, double t) {
  require_time(t);
  const long double c = params.c;
  const long double prefactor = static_cast<long double>(params.alpha) / (c * c * params.N);
  return static_cast<double>(prefactor * params.opnorm_product *
                             std::expm1(static_cast<long double>(params.Vbig) * t));
}

double theorem2_rhs(const BoundParams& params, const CommutatorLayout& layout, double t) {
  require_time(t);
  const long double count = static_cast<long double>(layout.m1 + layout.m2) *
                            static_cast<long double>(layout.n1 + layout.n2);
  const long double prefactor = count / (3.0L * params.c * params.N);
  return static_cast<double>(prefactor * params.opnorm_product *
                             std::expm1(static_cast<long double>(params.Vcal) * t));
}

double validity_horizon(const BoundParams& params, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw InvalidArgument("validity_horizon: epsilon must lie in (0, 1)");
  }
  return (1.0 - epsilon) * std::log(static_cast<double>(params.N)) / params.Vbig;
}

}  // namespace bosemix
