#pragma once

#include <span>
#include <vector>

#include "infoprice/model.hpp"

namespace infoprice {

/// Filtered signal E[Y_t | prices up to t] sampled on a grid.
struct FilteredPath {
  std::vector<double> t;
  std::vector<double> y_hat;
  /// (dS_k - (mu + y_hat_k) dt) / sigma_z, one per grid step.
  std::vector<double> innovation_increments;
};

/// Deterministic filter gain g(t) = sigma_y tanh(sigma_y t / sigma_z).
class FilterGain {
 public:
  explicit FilterGain(const ModelParams& p);
  double operator()(double t) const;

 private:
  double sigma_y_;
  double ratio_;
};

/**
 * Runs the continuous-time filter along a sampled price path with the
 * gain frozen at the left end of each step:
 *
 *   y_hat_{k+1} = y_hat_k + g(t_k) (dS_k - (mu + y_hat_k) dt) / sigma_z
 *
 * Throws LengthMismatch when s_path does not have grid.size() samples.
 */
FilteredPath filter_path(const ModelParams& p, const TimeGrid& grid,
                         std::span<const double> s_path);

/// Volterra kernel of the price's innovation representation:
/// -sigma_y tanh(sigma_y u / sigma_z) for u <= t, zero above the diagonal.
double hitsuda_kernel(const ModelParams& p, double t, double u);

struct KalmanOracleResult {
  FilteredPath filtered;
  std::vector<double> posterior_variance;  ///< Var[Y_k | S_0..S_k]
  std::vector<double> gain;                ///< Kalman gain applied at step k
};

/// Discrete Kalman filter for the random-walk signal observed through price
/// increments. Shares no arithmetic with filter_path; used as its oracle.
KalmanOracleResult kalman_oracle(const ModelParams& p, const TimeGrid& grid,
                                 std::span<const double> s_path);

}  // namespace infoprice
