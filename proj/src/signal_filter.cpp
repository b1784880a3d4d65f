#include "infoprice/signal_filter.hpp"

#include <cmath>
#include <string>

#include "infoprice/errors.hpp"

namespace infoprice {

FilterGain::FilterGain(const ModelParams& p)
    : sigma_y_(validate(p).sigma_y), ratio_(p.noise_ratio()) {}

double FilterGain::operator()(double t) const { return sigma_y_ * std::tanh(ratio_ * t); }

FilteredPath filter_path(const ModelParams& params, const TimeGrid& grid,
                         std::span<const double> s_path) {
  const ModelParams p = validate(params);
  if (s_path.size() != grid.size()) {
    throw LengthMismatch("price path has " + std::to_string(s_path.size()) +
                         " samples, grid has " + std::to_string(grid.size()));
  }
  const FilterGain gain(p);
  const double dt = grid.dt();
  const std::size_t n = grid.n_steps();

  FilteredPath out;
  out.t = grid.points();
  out.y_hat.resize(n + 1);
  out.innovation_increments.resize(n);
  out.y_hat[0] = p.y0;
  for (std::size_t k = 0; k < n; ++k) {
    const double ds = s_path[k + 1] - s_path[k];
    const double innovation = (ds - (p.mu + out.y_hat[k]) * dt) / p.sigma_z;
    out.innovation_increments[k] = innovation;
    out.y_hat[k + 1] = out.y_hat[k] + gain(out.t[k]) * innovation;
  }
  return out;
}

double hitsuda_kernel(const ModelParams& params, double t, double u) {
  const ModelParams p = validate(params);
  if (u > t) return 0.0;
  return -p.sigma_y * std::tanh(p.noise_ratio() * u);
}

}  // namespace infoprice
