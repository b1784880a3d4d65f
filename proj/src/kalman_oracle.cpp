// Discrete-time Kalman filter for
//
//   Y_{k+1} = Y_k + sigma_y dB^Y_k                     (state)
//   dS_k - mu dt = Y_k dt + sigma_z dB^Z_k             (observation)
//
// Works on the discrete model only; the continuous gain never appears here.

#include <string>

#include "infoprice/errors.hpp"
#include "infoprice/signal_filter.hpp"

namespace infoprice {

KalmanOracleResult kalman_oracle(const ModelParams& params, const TimeGrid& grid,
                                 std::span<const double> s_path) {
  const ModelParams p = validate(params);
  if (s_path.size() != grid.size()) {
    throw LengthMismatch("price path has " + std::to_string(s_path.size()) +
                         " samples, grid has " + std::to_string(grid.size()));
  }
  const std::size_t n = grid.n_steps();
  const double dt = grid.dt();
  const double state_noise = p.sigma_y * p.sigma_y * dt;
  const double obs_noise = p.sigma_z * p.sigma_z * dt;

  KalmanOracleResult r;
  r.filtered.t = grid.points();
  r.filtered.y_hat.resize(n + 1);
  r.filtered.innovation_increments.resize(n);
  r.posterior_variance.resize(n + 1);
  r.gain.resize(n);

  double mean = p.y0;
  double var = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    r.filtered.y_hat[k] = mean;
    r.posterior_variance[k] = var;

    // Measurement z = H Y + v with H = dt, Var(v) = obs_noise.
    const double z = s_path[k + 1] - s_path[k] - p.mu * dt;
    const double residual = z - dt * mean;
    const double innovation_var = dt * var * dt + obs_noise;
    const double kalman_gain = var * dt / innovation_var;
    mean += kalman_gain * residual;
    var = (1.0 - kalman_gain * dt) * var;

    // Time update.
    var += state_noise;

    r.gain[k] = kalman_gain;
    r.filtered.innovation_increments[k] = residual / p.sigma_z;
  }
  r.filtered.y_hat[n] = mean;
  r.posterior_variance[n] = var;
  return r;
}

}  // namespace infoprice
