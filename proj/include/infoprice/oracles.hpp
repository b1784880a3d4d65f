#pragma once

#include <span>
#include <string>
#include <vector>

#include "infoprice/model.hpp"
#include "infoprice/path_sim.hpp"

namespace infoprice {

/// Outcome of one numerical cross-check.
struct OracleReport {
  std::string name;
  double observed = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

enum class ToleranceKind { Absolute, Relative };

/// Builds a report with passed = |observed - expected| <= tolerance
/// (times |expected| for Relative). The kind is recorded in detail.
OracleReport make_report(std::string name, double observed, double expected, double tolerance,
                         ToleranceKind kind, std::string detail = {});

/// JSON array of reports, one object per report.
std::string reports_to_json(std::span<const OracleReport> reports, int indent = 2);

/// Physicists' Gauss-Hermite rule: sum w_i f(x_i) ~ int exp(-x^2) f(x) dx.
struct GaussHermiteRule {
  explicit GaussHermiteRule(std::size_t n);
  std::vector<double> nodes;
  std::vector<double> weights;
};

struct SinglePeriodOracleResult {
  double phi_ui = 0.0;  ///< Uninformed optimum found by search
  double v_ui = 0.0;    ///< Uninformed optimal expected utility
  double c_hat = 0.0;   ///< Charge equating both branches
};

/**
 * One-period problem solved by quadrature and search: 64-node
 * Gauss-Hermite expectations, golden-section search for the uninformed
 * position (polished on the first-order condition), and bisection on the
 * charge equating informed and uninformed utility.
 */
SinglePeriodOracleResult single_period_oracle(const ModelParams& p);

struct OdeOracleResult {
  double a_informed = 0.0;
  double b_informed = 0.0;
  double a_uninformed = 0.0;
  double b_uninformed = 0.0;
  double max() const;
};

/// Max absolute deviation between the closed-form HJB coefficients and a
/// backward RK4 integration of their ODEs on the grid.
OdeOracleResult ode_oracle(const ModelParams& p, const TimeGrid& grid);

/// sigma_z k(t,u) - int_0^u k(t,v) k(u,v) dv + sigma_y^2 u for 0 <= u <= t,
/// with the integral done by adaptive Gauss-Kronrod.
double hitsuda_residual(const ModelParams& p, double t, double u);

/// Max residual over an n x n lattice on [0, T]^2 restricted to u <= t.
OracleReport hitsuda_residual_check(const ModelParams& p, std::size_t n = 20,
                                    double tolerance = 1e-6);

/// Closed-form value at t = 0 versus Monte-Carlo expected utility, within
/// three standard errors. SubscribeAt modes pay no subscription charge.
OracleReport mc_value_check(const ModelParams& p, const TimeGrid& grid, const McConfig& mc,
                            const InformationMode& mode, bool zero_position = false);

/// Ensemble mean of the closed-form value along optimal paths at T/4, T/2,
/// 3T/4 and T against its t = 0 value, within three standard errors each.
std::vector<OracleReport> martingale_check(const ModelParams& p, const TimeGrid& grid,
                                           const McConfig& mc, const InformationMode& mode);

struct IndifferenceEstimate {
  double c_hat = 0.0;
  double std_err = 0.0;
  double half_width = 0.0;  ///< Three standard errors
  int iterations = 0;
};

/// Lump charge equating informed and uninformed Monte-Carlo utility on
/// common paths, by bisection on [0, 4 c_bar_bound T]. The informed branch
/// is averaged over the price noise in closed form given each signal path.
IndifferenceEstimate indifference_bisection(const ModelParams& p, const TimeGrid& grid,
                                            const McConfig& mc);

/// Max over the grid of the ensemble RMSE between filter_path and
/// kalman_oracle on simulated prices.
OracleReport filter_agreement(const ModelParams& p, const TimeGrid& grid, const McConfig& mc,
                              double tolerance = 1e-3);

/// Max |Kalman posterior variance - sigma_y sigma_z tanh(sigma_y t / sigma_z)|.
OracleReport kalman_variance_check(const ModelParams& p, const TimeGrid& grid,
                                   double tolerance = 1e-3);

}  // namespace infoprice
