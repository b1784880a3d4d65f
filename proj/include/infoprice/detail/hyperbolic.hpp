#pragma once

// Overflow-safe hyperbolic building blocks. All closed forms go through
// these so that sigma_y*T/sigma_z >> 1 and sigma_y = 0 both stay finite.

#include <cmath>
#include <numbers>

namespace infoprice::detail {

/// log(cosh(x)) without overflow.
inline double log_cosh(double x) {
  const double ax = std::fabs(x);
  return ax + std::log1p(std::exp(-2.0 * ax)) - std::numbers::ln2;
}

/// log|sinh(x)|; -inf at 0.
inline double log_abs_sinh(double x) {
  const double ax = std::fabs(x);
  if (ax == 0.0) return -INFINITY;
  return ax + std::log(-std::expm1(-2.0 * ax)) - std::numbers::ln2;
}

/// tanh(x)/x with the removable singularity filled in.
inline double tanhc(double x) {
  if (std::fabs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 3.0 + 2.0 * x2 * x2 / 15.0;
  }
  return std::tanh(x) / x;
}

/// cosh(a) * cosh(b) / cosh(c).
inline double cosh_ratio(double a, double b, double c) {
  return std::exp(log_cosh(a) + log_cosh(b) - log_cosh(c));
}

/// sinh(x) / cosh(c); exactly +-tanh(c) when |x| == c.
inline double sinh_over_cosh(double x, double c) {
  if (x == 0.0) return 0.0;
  if (std::fabs(x) == std::fabs(c)) return std::copysign(std::tanh(std::fabs(c)), x);
  return std::copysign(std::exp(log_abs_sinh(x) - log_cosh(c)), x);
}

}  // namespace infoprice::detail
