#include "infoprice/closed_form.hpp"

#include <cmath>
#include <limits>

#include "infoprice/detail/hyperbolic.hpp"
#include "infoprice/errors.hpp"

namespace infoprice {

using detail::cosh_ratio;
using detail::log_cosh;
using detail::tanhc;

double utility_from_exponent(double exponent, double cap) {
  if (std::isnan(exponent)) return std::numeric_limits<double>::quiet_NaN();
  if (exponent > cap) return -std::numeric_limits<double>::infinity();
  return -std::exp(exponent);
}

// ---------------------------------------------------------------------------

double SinglePeriodSolution::v_informed_at(double charge) const {
  return -std::exp(-gamma_ * (x0_ - charge) + informed_tail_);
}

SinglePeriodSolution single_period_solve(const ModelParams& params, double charge) {
  const ModelParams p = validate(params);
  if (!std::isfinite(charge)) throw DomainError("charge", "must be finite");

  const double var_y = p.sigma_y * p.sigma_y;
  const double var_z = p.sigma_z * p.sigma_z;
  const double edge = p.mu + p.y0;
  const double quad = edge * edge / (2.0 * (var_y + var_z));
  const double info_gain = std::log1p(var_y / var_z);

  SinglePeriodSolution s;
  s.mu_ = p.mu;
  s.gamma_ = p.gamma;
  s.x0_ = p.x0;
  s.charge_ = charge;
  s.phi_informed_coeff_ = 1.0 / (p.gamma * var_z);
  s.phi_uninformed_ = edge / (p.gamma * (var_y + var_z));
  s.informed_tail_ = -quad - 0.5 * info_gain;
  s.v_uninformed_ = -std::exp(-p.gamma * p.x0 - quad);
  s.c_hat_ = info_gain / (2.0 * p.gamma);
  return s;
}

// ---------------------------------------------------------------------------

HjbCoefficients::HjbCoefficients(const ModelParams& p)
    : p_(validate(p)), ratio_(p_.sigma_y / p_.sigma_z) {}

double HjbCoefficients::a_informed(double t) const {
  const double tau = p_.t_end - t;
  return -tau / (2.0 * p_.sigma_z * p_.sigma_z) * tanhc(ratio_ * tau);
}

double HjbCoefficients::b_informed(double t) const {
  return -0.5 * log_cosh(ratio_ * (p_.t_end - t));
}

double HjbCoefficients::uninformed_multiplier(double t) const {
  return cosh_ratio(ratio_ * (p_.t_end - t), ratio_ * t, ratio_ * p_.t_end);
}

double HjbCoefficients::a_uninformed(double t) const {
  // sinh(a tau) cosh(a t) / cosh(a T) = tanh(a tau) * multiplier
  const double tau = p_.t_end - t;
  return -tau / (2.0 * p_.sigma_z * p_.sigma_z) * tanhc(ratio_ * tau) *
         uninformed_multiplier(t);
}

double HjbCoefficients::b_uninformed(double t) const {
  const double a = ratio_;
  const double T = p_.t_end;
  const double tau = T - t;
  const double linear = 0.25 * a * tau * std::tanh(a * T);
  const double log_term = 0.5 * (log_cosh(a * t) - log_cosh(a * T));
  const double cross = 0.25 * std::tanh(a * tau) * std::tanh(a * t) * uninformed_multiplier(t);
  return linear + log_term + cross;
}

HjbCoefficients hjb_coefficients(const ModelParams& p) { return HjbCoefficients(p); }

// ---------------------------------------------------------------------------

namespace {

void require_time(const ModelParams& p, double t) {
  if (!(t >= 0.0 && t <= p.t_end)) throw DomainError("t", "outside [0, T]");
}

}  // namespace

double informed_strategy(const ModelParams& params, double t, double y_t) {
  const ModelParams p = validate(params);
  require_time(p, t);
  return (p.mu + y_t) / (p.gamma * p.sigma_z * p.sigma_z);
}

double uninformed_strategy(const ModelParams& params, double t, double y_hat_t) {
  const ModelParams p = validate(params);
  require_time(p, t);
  const HjbCoefficients coeff(p);
  return (p.mu + y_hat_t) * coeff.uninformed_multiplier(t) / (p.gamma * p.sigma_z * p.sigma_z);
}

double informed_exponent(const ModelParams& params, double t, double x_t, double y_t) {
  const ModelParams p = validate(params);
  require_time(p, t);
  const HjbCoefficients coeff(p);
  const double edge = p.mu + y_t;
  return -p.gamma * x_t + coeff.a_informed(t) * edge * edge + coeff.b_informed(t);
}

double uninformed_exponent(const ModelParams& params, double t, double x_t, double y_hat_t) {
  const ModelParams p = validate(params);
  require_time(p, t);
  const HjbCoefficients coeff(p);
  const double edge = p.mu + y_hat_t;
  return -p.gamma * x_t + coeff.a_uninformed(t) * edge * edge + coeff.b_uninformed(t);
}

double value_informed(const ModelParams& p, double t, double x_t, double y_t, double charge,
                      double cap) {
  const double wealth = (t == 0.0) ? x_t - charge : x_t;
  return utility_from_exponent(informed_exponent(p, t, wealth, y_t), cap);
}

double value_uninformed(const ModelParams& p, double t, double x_t, double y_hat_t,
                        double cap) {
  return utility_from_exponent(uninformed_exponent(p, t, x_t, y_hat_t), cap);
}

ContinuousPriceResult continuous_price(const ModelParams& params) {
  const ModelParams p = validate(params);
  ContinuousPriceResult r;
  r.c_bar_bound = p.noise_ratio() / (4.0 * p.gamma);
  r.c_bar = r.c_bar_bound * std::tanh(p.noise_ratio() * p.t_end);
  r.c_hat_0T = r.c_bar * p.t_end;
  return r;
}

}  // namespace infoprice
