#pragma once

#include <cmath>

#include "infoprice/model.hpp"

namespace infoprice {

/// Exponents above this value are reported as a saturated utility (-inf).
inline constexpr double kDefaultExponentCap = 700.0;

/// -exp(exponent), or -infinity when exponent exceeds cap.
double utility_from_exponent(double exponent, double cap = kDefaultExponentCap);

/// True for the saturation sentinel returned by the value functions.
inline bool is_saturated(double utility) { return std::isinf(utility) && utility < 0.0; }

// ---------------------------------------------------------------------------
// Single-period model
// ---------------------------------------------------------------------------

/**
 * Optimal positions, values and indifference price of the one-period
 * problem where the signal Y ~ N(y0, sigma_y^2) may be bought for a charge
 * before trading.
 */
class SinglePeriodSolution {
 public:
  /// Informed position is phi_informed_coeff * (mu + Y).
  double phi_informed_coeff() const { return phi_informed_coeff_; }
  double phi_informed(double signal) const { return phi_informed_coeff_ * (mu_ + signal); }
  double phi_uninformed() const { return phi_uninformed_; }
  double v_uninformed() const { return v_uninformed_; }
  /// Informed value at the charge passed to single_period_solve.
  double v_informed() const { return v_informed_at(charge_); }
  double v_informed_at(double charge) const;
  /// Charge at which v_informed_at(c_hat) == v_uninformed.
  double c_hat() const { return c_hat_; }

 private:
  friend SinglePeriodSolution single_period_solve(const ModelParams&, double);

  double mu_ = 0.0;
  double gamma_ = 0.0;
  double x0_ = 0.0;
  double charge_ = 0.0;
  double informed_tail_ = 0.0;  // exponent of V^I without the wealth term
  double phi_informed_coeff_ = 0.0;
  double phi_uninformed_ = 0.0;
  double v_uninformed_ = 0.0;
  double c_hat_ = 0.0;
};

SinglePeriodSolution single_period_solve(const ModelParams& p, double charge = 0.0);

// ---------------------------------------------------------------------------
// Continuous-time model
// ---------------------------------------------------------------------------

/**
 * Time-dependent coefficients of the exponential-quadratic value functions
 *
 *   V(t, x, y) = -exp{-gamma x + A(t) (mu + y)^2 + B(t)}
 *
 * for the informed (true signal) and uninformed (filtered signal) investor.
 * All four vanish at t = T. For sigma_y = 0 the coefficients take their
 * limits, e.g. A_I(t) = -(T - t) / (2 sigma_z^2).
 */
class HjbCoefficients {
 public:
  explicit HjbCoefficients(const ModelParams& p);

  double a_informed(double t) const;
  double b_informed(double t) const;
  double a_uninformed(double t) const;
  double b_uninformed(double t) const;

  /// cosh(a(T-t)) cosh(a t) / cosh(a T) with a = sigma_y / sigma_z.
  double uninformed_multiplier(double t) const;

 private:
  ModelParams p_;
  double ratio_;  // sigma_y / sigma_z
};

HjbCoefficients hjb_coefficients(const ModelParams& p);

/// (mu + y_t) / (gamma sigma_z^2).
double informed_strategy(const ModelParams& p, double t, double y_t);

/// Filtered-signal position; equals the informed formula at t = 0 and t = T.
double uninformed_strategy(const ModelParams& p, double t, double y_hat_t);

/// Log-space exponent of value_informed (wealth already net of charges).
double informed_exponent(const ModelParams& p, double t, double x_t, double y_t);
double uninformed_exponent(const ModelParams& p, double t, double x_t, double y_hat_t);

/**
 * Informed value function. x_t is wealth already net of any charge; the
 * charge argument is only applied at t = 0, where it is read as the lump
 * price paid for the signal (X_0 = x - C).
 */
double value_informed(const ModelParams& p, double t, double x_t, double y_t,
                      double charge = 0.0, double cap = kDefaultExponentCap);

double value_uninformed(const ModelParams& p, double t, double x_t, double y_hat_t,
                        double cap = kDefaultExponentCap);

struct ContinuousPriceResult {
  double c_hat_0T = 0.0;     ///< Lump indifference price for [0, T]
  double c_bar = 0.0;        ///< c_hat_0T / T
  double c_bar_bound = 0.0;  ///< sigma_y / (4 gamma sigma_z), the T -> inf rate
};

ContinuousPriceResult continuous_price(const ModelParams& p);

}  // namespace infoprice
