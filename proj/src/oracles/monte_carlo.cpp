#include <array>
#include <cmath>
#include <string>

#include "infoprice/closed_form.hpp"
#include "infoprice/errors.hpp"
#include "infoprice/oracles.hpp"
#include "infoprice/subscription_timing.hpp"

namespace infoprice {

namespace {

double closed_form_value(const ModelParams& p, const TimeGrid& grid, const InformationMode& mode,
                         bool zero_position) {
  if (zero_position) return -std::exp(-p.gamma * p.x0);
  switch (mode.kind()) {
    case InformationMode::Kind::Uninformed:
      return value_uninformed(p, 0.0, p.x0, p.y0);
    case InformationMode::Kind::InformedFromStart:
      return value_informed(p, 0.0, p.x0, p.y0);
    case InformationMode::Kind::SubscribeAt:
      break;
  }
  return subscription_utility(p, grid.snap(mode.subscribe_time()),
                              RateSchedule::constant(p.t_end, 0.0));
}

std::string mc_detail(const McEstimate& est) {
  return std::to_string(est.n_paths) + " paths, std_err " + std::to_string(est.std_err);
}

}  // namespace

OracleReport mc_value_check(const ModelParams& params, const TimeGrid& grid, const McConfig& mc,
                            const InformationMode& mode, bool zero_position) {
  const ModelParams p = validate(params);
  StrategySpec spec;
  spec.mode = mode;
  spec.zero_position = zero_position;
  const McEstimate est = expected_utility(p, grid, mc, spec);
  const double expected = closed_form_value(p, grid, mode, zero_position);
  return make_report("mc_value_" + mode.label() + (zero_position ? "_zero_position" : ""),
                     est.mean, expected, 3.0 * est.std_err, ToleranceKind::Absolute,
                     mc_detail(est));
}

std::vector<OracleReport> martingale_check(const ModelParams& params, const TimeGrid& grid,
                                           const McConfig& mc, const InformationMode& mode) {
  const ModelParams p = validate(params);
  const bool informed = mode.kind() == InformationMode::Kind::InformedFromStart;
  if (!informed && mode.kind() != InformationMode::Kind::Uninformed) {
    throw DomainError("mode", "martingale check needs a fixed information mode");
  }

  std::array<std::size_t, 5> idx{};
  for (std::size_t q = 0; q < idx.size(); ++q) {
    idx[q] = grid.nearest_index(p.t_end * static_cast<double>(q) / 4.0);
  }

  StrategySpec spec;
  spec.mode = mode;
  const StrategyRunner runner(p, grid, spec);
  const auto samples = map_paths(p, grid, mc, idx.size(), [&](PathBundle& b, std::span<double> out) {
    const auto wealth = runner.wealth_path(b);
    const std::vector<double>& signal = informed ? b.y : b.filtered(p, grid).y_hat;
    for (std::size_t q = 0; q < idx.size(); ++q) {
      const std::size_t k = idx[q];
      out[q] = informed ? value_informed(p, grid[k], wealth[k], signal[k])
                        : value_uninformed(p, grid[k], wealth[k], signal[k]);
    }
  });

  const double v0 = informed ? value_informed(p, 0.0, p.x0, p.y0)
                             : value_uninformed(p, 0.0, p.x0, p.y0);
  static constexpr std::array<const char*, 5> kLabels{"0", "T/4", "T/2", "3T/4", "T"};
  std::vector<OracleReport> reports;
  for (std::size_t q = 0; q < idx.size(); ++q) {
    const McEstimate est = summarize(samples[q], mc.antithetic);
    reports.push_back(make_report("martingale_" + mode.label() + "_" + kLabels[q], est.mean, v0,
                                  3.0 * est.std_err, ToleranceKind::Absolute, mc_detail(est)));
  }
  return reports;
}

IndifferenceEstimate indifference_bisection(const ModelParams& params, const TimeGrid& grid,
                                            const McConfig& mc) {
  const ModelParams p = validate(params);
  const double hi_bound = 4.0 * continuous_price(p).c_bar_bound * p.t_end;

  // Informed wealth is Gaussian given the signal path, so that branch is
  // integrated over the price noise exactly; the uninformed branch runs on
  // the same paths.
  const StrategyRunner uninformed(p, grid, StrategySpec{});
  const double dt = grid.dt();
  const double half_var = 0.5 * p.gamma * p.gamma * p.sigma_z * p.sigma_z * dt;
  const auto sampled = map_paths(p, grid, mc, 2, [&](PathBundle& b, std::span<double> out) {
    double exponent = -p.gamma * p.x0;
    for (std::size_t k = 0; k < grid.n_steps(); ++k) {
      const double phi = informed_strategy(p, grid[k], b.y[k]);
      exponent += -p.gamma * phi * (p.mu + b.y[k]) * dt + half_var * phi * phi;
    }
    out[0] = exponent;
    out[1] = uninformed.terminal_wealth(b);
  });
  std::vector<double> u_inf(mc.n_paths);
  for (std::size_t i = 0; i < u_inf.size(); ++i) u_inf[i] = utility_from_exponent(sampled[0][i]);
  const auto u_un = utilities(p, sampled[1]);
  const McEstimate m_inf = summarize(u_inf, mc.antithetic);
  const McEstimate m_un = summarize(u_un, mc.antithetic);
  if (m_inf.saturated > 0 || m_un.saturated > 0) {
    throw ConvergenceError("utility saturated on some paths");
  }

  // Paying C scales every informed utility by exp(gamma C), so the informed
  // branch at any charge is a rescaling of the cached zero-charge sample.
  auto gap = [&](double charge) { return std::exp(p.gamma * charge) * m_inf.mean - m_un.mean; };

  // Delta-method error of log(m_un / m_inf) / gamma on common paths.
  std::vector<double> rel(u_inf.size());
  for (std::size_t i = 0; i < rel.size(); ++i) rel[i] = u_un[i] / m_un.mean - u_inf[i] / m_inf.mean;
  IndifferenceEstimate out;
  out.std_err = summarize(rel, mc.antithetic).std_err / p.gamma;
  out.half_width = 3.0 * out.std_err;

  // Without signal noise both branches trade identically.
  if (hi_bound == 0.0) return out;

  double lo = 0.0;
  double hi = hi_bound;
  if (!(gap(lo) >= 0.0 && gap(hi) <= 0.0)) {
    throw ConvergenceError("bracket [0, " + std::to_string(hi_bound) +
                           "] does not contain the indifference charge");
  }
  while (hi - lo > 1e-12 * hi_bound) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) > 0.0 ? lo : hi) = mid;
    ++out.iterations;
  }
  out.c_hat = 0.5 * (lo + hi);
  return out;
}

// ---------------------------------------------------------------------------

OracleReport filter_agreement(const ModelParams& params, const TimeGrid& grid, const McConfig& mc,
                              double tolerance) {
  const ModelParams p = validate(params);
  // Fixed-size blocks summed in order keep the result independent of the
  // worker count.
  constexpr std::size_t kBlock = 64;
  const std::size_t n_blocks = (mc.n_paths + kBlock - 1) / kBlock;
  std::vector<std::vector<double>> block_sums(n_blocks, std::vector<double>(grid.size(), 0.0));
  for_each_index(n_blocks, mc.workers, [&](std::size_t b) {
    auto& acc = block_sums[b];
    const std::size_t end = std::min(mc.n_paths, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) {
      PathBundle bundle = simulate_path(p, grid, mc.seed, i, mc.antithetic);
      const auto& fast = bundle.filtered(p, grid).y_hat;
      const auto kf = kalman_oracle(p, grid, bundle.s);
      for (std::size_t k = 0; k < grid.size(); ++k) {
        const double d = fast[k] - kf.filtered.y_hat[k];
        acc[k] += d * d;
      }
    }
  });
  std::vector<double> total(grid.size(), 0.0);
  for (const auto& acc : block_sums) {
    for (std::size_t k = 0; k < total.size(); ++k) total[k] += acc[k];
  }
  double worst = 0.0;
  for (double s : total) worst = std::max(worst, std::sqrt(s / static_cast<double>(mc.n_paths)));
  return make_report("filter_vs_kalman_rmse", worst, 0.0, tolerance, ToleranceKind::Absolute,
                     std::to_string(mc.n_paths) + " paths, " + std::to_string(grid.n_steps()) +
                         " steps");
}

OracleReport kalman_variance_check(const ModelParams& params, const TimeGrid& grid,
                                   double tolerance) {
  const ModelParams p = validate(params);
  const std::vector<double> flat(grid.size(), p.s0);
  const auto kf = kalman_oracle(p, grid, flat);
  double worst = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double target = p.sigma_y * p.sigma_z * std::tanh(p.sigma_y * grid[k] / p.sigma_z);
    worst = std::max(worst, std::fabs(kf.posterior_variance[k] - target));
  }
  return make_report("kalman_posterior_variance", worst, 0.0, tolerance, ToleranceKind::Absolute,
                     std::to_string(grid.n_steps()) + " steps");
}

}  // namespace infoprice
