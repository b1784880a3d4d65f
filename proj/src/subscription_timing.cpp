#include "infoprice/subscription_timing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "infoprice/detail/hyperbolic.hpp"
#include "infoprice/errors.hpp"

namespace infoprice {

using detail::log_cosh;
using detail::sinh_over_cosh;

double ell(const ModelParams& params, double t) {
  const ModelParams p = validate(params);
  const double a = p.noise_ratio();
  return p.sigma_y / (4.0 * p.gamma * p.sigma_z) * sinh_over_cosh(a * (p.t_end - 2.0 * t), a * p.t_end);
}

double integral_ell(const ModelParams& params, double lo, double hi) {
  const ModelParams p = validate(params);
  const double a = p.noise_ratio();
  const double denom = log_cosh(a * p.t_end);
  const double upper = std::exp(log_cosh(a * (p.t_end - 2.0 * lo)) - denom);
  const double lower = std::exp(log_cosh(a * (p.t_end - 2.0 * hi)) - denom);
  return (upper - lower) / (8.0 * p.gamma);
}

double indifference_rate(const ModelParams& params, double t) {
  const ModelParams p = validate(params);
  if (t <= 0.0 || p.sigma_y == 0.0) return 0.0;
  // c_bar - l(t) = sigma_y sinh(a t) cosh(a (T - t)) / (2 gamma sigma_z cosh(a T)).
  const double a = p.noise_ratio();
  return a / (2.0 * p.gamma) *
         std::exp(detail::log_abs_sinh(a * t) + detail::log_cosh(a * (p.t_end - t)) -
                  detail::log_cosh(a * p.t_end));
}

RateSchedule indifference_schedule(const ModelParams& p, const TimeGrid& grid) {
  return RateSchedule::sampled(grid, [&](double t) { return indifference_rate(p, t); });
}

RateSchedule bump_schedule(const ModelParams& p, const TimeGrid& grid, double early_end,
                           double late_start, double premium, double discount) {
  if (!(early_end <= late_start)) throw DomainError("early_end", "must not exceed late_start");
  if (premium < 0.0 || discount < 0.0) throw DomainError("premium", "bumps must be non-negative");
  const std::size_t k_on = grid.nearest_index(early_end);
  const std::size_t k_off = grid.nearest_index(late_start);
  std::vector<double> t = grid.points();
  std::vector<double> c(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    double rate = indifference_rate(p, t[k]);
    if (k < k_on) rate += premium;
    if (k > k_off) rate -= discount;
    if (rate < 0.0) throw DomainError("discount", "drives the rate negative");
    c[k] = rate;
  }
  return RateSchedule(std::move(t), std::move(c));
}

// ---------------------------------------------------------------------------

SubscriptionFunctional::SubscriptionFunctional(const ModelParams& params,
                                               const RateSchedule& schedule,
                                               const TimeGrid& grid)
    : p_(validate(params)), schedule_(schedule), grid_(grid) {
  if (std::fabs(grid.t_end() - p_.t_end) > 1e-12 * p_.t_end) {
    throw DomainError("grid", "horizon differs from t_end");
  }
  schedule_.require_covers(0.0, p_.t_end);
  c_bar_ = continuous_price(p_).c_bar;

  const std::size_t n = grid_.size();
  ell_nodes_.resize(n);
  ell_cumulative_.resize(n);
  values_.resize(n);
  for (std::size_t k = 0; k < n; ++k) ell_nodes_[k] = ell(p_, grid_[k]);
  ell_cumulative_[0] = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    ell_cumulative_[k] = ell_cumulative_[k - 1] +
                         0.5 * (ell_nodes_[k - 1] + ell_nodes_[k]) * (grid_[k] - grid_[k - 1]);
  }
  scale_ = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    values_[k] = schedule_.integral(0.0, grid_[k]) - c_bar_ * grid_[k] + ell_cumulative_[k];
    scale_ = std::max(scale_, std::fabs(values_[k]));
  }
}

double SubscriptionFunctional::ell_integral(double t) const {
  if (!(t >= 0.0 && t <= grid_.t_end())) throw DomainError("t", "outside [0, T]");
  std::size_t k = std::min(grid_.nearest_index(t), grid_.n_steps());
  if (grid_[k] > t) --k;
  if (grid_[k] == t) return ell_cumulative_[k];
  return ell_cumulative_[k] + 0.5 * (ell_nodes_[k] + ell(p_, t)) * (t - grid_[k]);
}

double SubscriptionFunctional::operator()(double t) const {
  return schedule_.integral(0.0, t) - c_bar_ * t + ell_integral(t);
}

// ---------------------------------------------------------------------------

namespace {

std::size_t latest_index(std::span<const double> f, double threshold) {
  const std::size_t n = f.size() - 1;
  // suffix_max = max_{j > k} f[j], built right to left.
  double suffix_max = -std::numeric_limits<double>::infinity();
  std::size_t best = n;
  for (std::size_t k = n + 1; k-- > 0;) {
    if (k == n || suffix_max < f[k] - threshold) best = k;
    suffix_max = std::max(suffix_max, f[k]);
  }
  return best;
}

}  // namespace

double latest_time(const ModelParams& p, const RateSchedule& schedule, const TimeGrid& grid,
                   double tol) {
  const SubscriptionFunctional F(p, schedule, grid);
  return grid[latest_index(F.nodes(), tol * F.scale())];
}

TimingResult earliest_time(const ModelParams& p, const RateSchedule& schedule,
                           const TimeGrid& grid, double tol) {
  const SubscriptionFunctional F(p, schedule, grid);
  const auto f = F.nodes();
  const double threshold = tol * F.scale();
  const std::size_t k_late = latest_index(f, threshold);

  TimingResult r;
  r.tol = tol;
  r.scale = F.scale();
  r.tau_l = grid[k_late];
  std::size_t k_early = k_late;
  for (std::size_t k = 0; k <= k_late; ++k) {
    if (std::fabs(f[k_late] - f[k]) <= threshold) {
      if (r.indifference_set.empty()) k_early = k;
      r.indifference_set.push_back(grid[k]);
    }
  }
  r.tau_e = grid[k_early];
  return r;
}

// ---------------------------------------------------------------------------

namespace {

// -gamma x + A_UI(t)(mu + y_hat)^2 + gamma * int_t^T c + log(cosh(a t) / cosh(a T)) / 2
double prepurchase_exponent(const ModelParams& p, double t, double x_t, double y_hat_t,
                            const RateSchedule& schedule) {
  if (!(t >= 0.0 && t <= p.t_end)) throw DomainError("t", "outside [0, T]");
  schedule.require_covers(t, p.t_end);
  const HjbCoefficients coeff(p);
  const double a = p.noise_ratio();
  const double edge = p.mu + y_hat_t;
  const double remaining_cost = schedule.integral(t, p.t_end);
  return -p.gamma * x_t + coeff.a_uninformed(t) * edge * edge + p.gamma * remaining_cost +
         0.5 * (log_cosh(a * t) - log_cosh(a * p.t_end));
}

}  // namespace

double value_prepurchase(const ModelParams& params, double t, double x_t, double y_hat_t,
                         const RateSchedule& schedule, double cap) {
  const ModelParams p = validate(params);
  return utility_from_exponent(prepurchase_exponent(p, t, x_t, y_hat_t, schedule), cap);
}

double value_flexible(const ModelParams& params, double t, double x_t, double y_hat_t,
                      const RateSchedule& schedule, const TimeGrid& grid, double tol,
                      double cap) {
  const ModelParams p = validate(params);
  const SubscriptionFunctional F(p, schedule, grid);
  const std::size_t k_late = latest_index(F.nodes(), tol * F.scale());
  const double tau_l = grid[k_late];
  if (t > tau_l) throw DomainError("t", "after the latest purchase time");

  // B_F(t) = gamma int_{tau_l}^T c + gamma int_t^{tau_l} (c_bar - l) + log(cosh(a t)/cosh(a T))/2
  // which equals the pre-purchase constant minus gamma (F(tau_l) - F(t)).
  const double gap = (t == tau_l) ? 0.0 : F.nodes()[k_late] - F(t);
  return utility_from_exponent(prepurchase_exponent(p, t, x_t, y_hat_t, schedule) - p.gamma * gap,
                               cap);
}

double subscription_utility(const ModelParams& params, double t_star,
                            const RateSchedule& schedule, double cap) {
  const ModelParams p = validate(params);
  if (!(t_star >= 0.0 && t_star <= p.t_end)) throw DomainError("t_star", "outside [0, T]");
  schedule.require_covers(t_star, p.t_end);
  const HjbCoefficients coeff(p);
  const double a = p.noise_ratio();
  const double exponent = uninformed_exponent(p, 0.0, p.x0, p.y0) +
                          p.gamma * schedule.integral(t_star, p.t_end) -
                          coeff.b_uninformed(t_star) +
                          0.5 * (log_cosh(a * t_star) - log_cosh(a * p.t_end));
  return utility_from_exponent(exponent, cap);
}

}  // namespace infoprice
