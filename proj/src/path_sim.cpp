#include "infoprice/path_sim.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "infoprice/errors.hpp"
#include "infoprice/rng.hpp"

namespace infoprice {

namespace {

void check_dynamics(const ModelParams& p, const TimeGrid& grid) {
  for (double v : {p.mu, p.sigma_y, p.sigma_z, p.y0, p.s0, p.x0, p.t_end}) {
    if (!std::isfinite(v)) throw DomainError("params", "must be finite");
  }
  if (p.sigma_y < 0.0) throw DomainError("sigma_y", "must be non-negative");
  if (p.sigma_z < 0.0) throw DomainError("sigma_z", "must be non-negative");
  if (std::fabs(grid.t_end() - p.t_end) > 1e-12 * p.t_end) {
    throw DomainError("grid", "horizon differs from t_end");
  }
}

}  // namespace

const FilteredPath& PathBundle::filtered(const ModelParams& p, const TimeGrid& grid) {
  if (!filtered_) filtered_ = filter_path(p, grid, s);
  return *filtered_;
}

PathBundle path_from_increments(const ModelParams& p, const TimeGrid& grid,
                                std::vector<double> by_incr, std::vector<double> bz_incr) {
  check_dynamics(p, grid);
  const std::size_t n = grid.n_steps();
  if (by_incr.size() != n || bz_incr.size() != n) {
    throw LengthMismatch("expected " + std::to_string(n) + " increments per noise");
  }
  const double dt = grid.dt();
  PathBundle b;
  b.t = grid.points();
  b.by_incr = std::move(by_incr);
  b.bz_incr = std::move(bz_incr);
  b.y.resize(n + 1);
  b.s.resize(n + 1);
  b.y[0] = p.y0;
  b.s[0] = p.s0;
  for (std::size_t k = 0; k < n; ++k) {
    b.y[k + 1] = b.y[k] + p.sigma_y * b.by_incr[k];
    b.s[k + 1] = b.s[k] + (p.mu + b.y[k]) * dt + p.sigma_z * b.bz_incr[k];
  }
  return b;
}

PathBundle simulate_path(const ModelParams& p, const TimeGrid& grid, std::uint64_t seed,
                         std::size_t index, bool antithetic) {
  check_dynamics(p, grid);
  const std::size_t n = grid.n_steps();
  const double root_dt = std::sqrt(grid.dt());
  const std::size_t stream = antithetic ? index / 2 : index;
  const double sign = (antithetic && index % 2 == 1) ? -1.0 : 1.0;

  CounterRng rng(stream_key(seed, stream));
  std::normal_distribution<double> normal;
  std::vector<double> by(n);
  std::vector<double> bz(n);
  for (std::size_t k = 0; k < n; ++k) {
    by[k] = sign * root_dt * normal(rng);
    bz[k] = sign * root_dt * normal(rng);
  }
  return path_from_increments(p, grid, std::move(by), std::move(bz));
}

// ---------------------------------------------------------------------------

StrategyRunner::StrategyRunner(const ModelParams& p, const TimeGrid& grid, StrategySpec spec)
    : p_(validate(p)), grid_(grid), spec_(std::move(spec)) {
  check_dynamics(p_, grid_);
  if (!std::isfinite(spec_.lump_charge)) throw DomainError("lump_charge", "must be finite");
  k_sub_ = spec_.mode.subscribe_index(grid_);

  const HjbCoefficients coeff(p_);
  const double inv_risk = 1.0 / (p_.gamma * p_.sigma_z * p_.sigma_z);
  multiplier_.resize(grid_.size());
  for (std::size_t k = 0; k < grid_.size(); ++k) {
    multiplier_[k] = coeff.uninformed_multiplier(grid_[k]) * inv_risk;
  }

  step_cost_.assign(grid_.n_steps(), 0.0);
  if (spec_.schedule && k_sub_ < grid_.size()) {
    spec_.schedule->require_covers(grid_[k_sub_], grid_.t_end());
    for (std::size_t k = k_sub_; k < grid_.n_steps(); ++k) {
      step_cost_[k] = (*spec_.schedule)(grid_[k]) * grid_.dt();
    }
  }
}

template <class Sink>
void StrategyRunner::integrate(PathBundle& bundle, Sink&& sink) const {
  const std::size_t n = grid_.n_steps();
  if (bundle.y.size() != n + 1 || bundle.bz_incr.size() != n) {
    throw LengthMismatch("path bundle does not match the grid");
  }
  const double dt = grid_.dt();
  const double inv_risk = 1.0 / (p_.gamma * p_.sigma_z * p_.sigma_z);
  const bool trades = !spec_.zero_position;
  const std::vector<double>* y_hat = nullptr;
  if (trades && k_sub_ > 0) y_hat = &bundle.filtered(p_, grid_).y_hat;

  double x = p_.x0;
  if (k_sub_ == 0) x -= spec_.lump_charge;
  sink(0, x);
  for (std::size_t k = 0; k < n; ++k) {
    const double drift = p_.mu + bundle.y[k];
    double position = 0.0;
    if (trades) {
      position = (k >= k_sub_) ? drift * inv_risk : (p_.mu + (*y_hat)[k]) * multiplier_[k];
    }
    x += position * (drift * dt + p_.sigma_z * bundle.bz_incr[k]) - step_cost_[k];
    if (k + 1 == k_sub_) x -= spec_.lump_charge;
    sink(k + 1, x);
  }
}

std::vector<double> StrategyRunner::wealth_path(PathBundle& bundle) const {
  std::vector<double> out(grid_.size());
  integrate(bundle, [&](std::size_t k, double x) { out[k] = x; });
  return out;
}

double StrategyRunner::terminal_wealth(PathBundle& bundle) const {
  double last = 0.0;
  integrate(bundle, [&](std::size_t, double x) { last = x; });
  return last;
}

std::vector<double> run_strategy(const ModelParams& p, const TimeGrid& grid, PathBundle& bundle,
                                 const StrategySpec& spec) {
  return StrategyRunner(p, grid, spec).wealth_path(bundle);
}

// ---------------------------------------------------------------------------

McEstimate summarize(std::span<const double> samples, bool antithetic) {
  McEstimate est;
  est.n_paths = samples.size();
  if (samples.size() < 2) throw DomainError("n_paths", "need at least two samples");
  if (antithetic && samples.size() % 2 != 0) {
    throw DomainError("n_paths", "antithetic sampling needs an even path count");
  }
  for (double v : samples) {
    if (is_saturated(v)) ++est.saturated;
  }
  if (est.saturated > 0) {
    est.mean = -std::numeric_limits<double>::infinity();
    est.std_err = std::numeric_limits<double>::infinity();
    return est;
  }

  const std::size_t stride = antithetic ? 2 : 1;
  const std::size_t units = samples.size() / stride;
  auto unit = [&](std::size_t i) {
    return antithetic ? 0.5 * (samples[2 * i] + samples[2 * i + 1]) : samples[i];
  };
  // Shifted by the first unit so constant samples give an exact mean.
  const double ref = unit(0);
  double sum = 0.0;
  for (std::size_t i = 0; i < units; ++i) sum += unit(i) - ref;
  const double mean = ref + sum / static_cast<double>(units);
  double ss = 0.0;
  for (std::size_t i = 0; i < units; ++i) {
    const double d = unit(i) - mean;
    ss += d * d;
  }
  est.mean = mean;
  est.std_err = units > 1 ? std::sqrt(ss / static_cast<double>(units - 1) / static_cast<double>(units))
                          : std::numeric_limits<double>::infinity();
  return est;
}

std::vector<std::vector<double>> terminal_wealth(const ModelParams& p, const TimeGrid& grid,
                                                 const McConfig& mc,
                                                 std::span<const StrategySpec> specs) {
  std::vector<StrategyRunner> runners;
  runners.reserve(specs.size());
  for (const auto& spec : specs) runners.emplace_back(p, grid, spec);
  return map_paths(p, grid, mc, runners.size(), [&](PathBundle& bundle, std::span<double> out) {
    for (std::size_t j = 0; j < runners.size(); ++j) out[j] = runners[j].terminal_wealth(bundle);
  });
}

std::vector<double> utilities(const ModelParams& p, std::span<const double> terminal,
                              double shift, double cap) {
  std::vector<double> u(terminal.size());
  for (std::size_t i = 0; i < terminal.size(); ++i) {
    u[i] = utility_from_exponent(-p.gamma * (terminal[i] - shift), cap);
  }
  return u;
}

McEstimate expected_utility(const ModelParams& p, const TimeGrid& grid, const McConfig& mc,
                            const StrategySpec& spec, double cap) {
  const auto wealth = terminal_wealth(p, grid, mc, std::span<const StrategySpec>(&spec, 1));
  const auto u = utilities(p, wealth[0], 0.0, cap);
  return summarize(u, mc.antithetic);
}

}  // namespace infoprice
