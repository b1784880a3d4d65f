#pragma once

#include <span>
#include <vector>

#include "infoprice/closed_form.hpp"
#include "infoprice/model.hpp"
#include "infoprice/rate_schedule.hpp"

namespace infoprice {

/// Default absolute tolerance on differences of the timing functional.
inline constexpr double kDefaultTimingTol = 1e-9;

/// l(t) = sigma_y sinh(a (T - 2t)) / (4 gamma sigma_z cosh(a T)), a = sigma_y / sigma_z.
double ell(const ModelParams& p, double t);

/// Closed-form integral of l over [a, b].
double integral_ell(const ModelParams& p, double a, double b);

/// Rate c_bar - l(t) that leaves the investor indifferent to the purchase time.
double indifference_rate(const ModelParams& p, double t);

/// The indifference rate sampled at every grid node.
RateSchedule indifference_schedule(const ModelParams& p, const TimeGrid& grid);

/**
 * Indifference schedule plus `premium` on nodes before `early_end` and
 * minus `discount` on nodes after `late_start`, each switched over one
 * grid cell. Buying is optimal anywhere in [early_end, late_start].
 */
RateSchedule bump_schedule(const ModelParams& p, const TimeGrid& grid, double early_end,
                           double late_start, double premium, double discount);

/**
 * F(t) = integral over [0, t] of (c(s) - c_bar + l(s)).
 *
 * The expected utility of buying at t is exp{-gamma F(t)} times a constant,
 * so the investor wants the maximiser of F. The rate integral is exact for
 * the piecewise-linear schedule; l is integrated with the trapezoid rule on
 * the same grid so that a schedule sampled from c_bar - l gives F = 0 to
 * rounding.
 */
class SubscriptionFunctional {
 public:
  SubscriptionFunctional(const ModelParams& p, const RateSchedule& schedule,
                         const TimeGrid& grid);

  /// F at any t in [0, T].
  double operator()(double t) const;

  /// Trapezoid integral of l over [0, t].
  double ell_integral(double t) const;

  std::span<const double> nodes() const { return values_; }
  const TimeGrid& grid() const { return grid_; }

  /// max(1, max |F|) over the grid.
  double scale() const { return scale_; }

 private:
  ModelParams p_;
  RateSchedule schedule_;
  TimeGrid grid_;
  double c_bar_;
  std::vector<double> ell_nodes_;
  std::vector<double> ell_cumulative_;
  std::vector<double> values_;
  double scale_ = 1.0;
};

struct TimingResult {
  double tau_e = 0.0;                   ///< Earliest optimal purchase time
  double tau_l = 0.0;                   ///< Latest optimal purchase time
  std::vector<double> indifference_set; ///< Grid times with F(t) == F(tau_l) within tol
  double tol = kDefaultTimingTol;       ///< Absolute tolerance before scaling
  double scale = 1.0;                   ///< max(1, max |F|)
};

/**
 * Smallest grid time t after which F strictly drops: F(u) < F(t) - tol*scale
 * for every grid u > t. T when no earlier node qualifies.
 */
double latest_time(const ModelParams& p, const RateSchedule& schedule, const TimeGrid& grid,
                   double tol = kDefaultTimingTol);

/// tau_l, tau_e and the full set of equally good grid purchase times.
TimingResult earliest_time(const ModelParams& p, const RateSchedule& schedule,
                           const TimeGrid& grid, double tol = kDefaultTimingTol);

/// Expected informed value just before buying at t, given prices up to t.
double value_prepurchase(const ModelParams& p, double t, double x_t, double y_hat_t,
                         const RateSchedule& schedule, double cap = kDefaultExponentCap);

/// Value of holding the option to buy at any time in [t, tau_l].
/// Throws DomainError for t > tau_l.
double value_flexible(const ModelParams& p, double t, double x_t, double y_hat_t,
                      const RateSchedule& schedule, const TimeGrid& grid,
                      double tol = kDefaultTimingTol, double cap = kDefaultExponentCap);

/// Expected utility at time 0 of filtering until t_star and then paying
/// the schedule from t_star to T.
double subscription_utility(const ModelParams& p, double t_star, const RateSchedule& schedule,
                            double cap = kDefaultExponentCap);

}  // namespace infoprice
