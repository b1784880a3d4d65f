#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "infoprice/closed_form.hpp"
#include "infoprice/model.hpp"
#include "infoprice/rate_schedule.hpp"
#include "infoprice/signal_filter.hpp"

namespace infoprice {

/// Monte-Carlo run settings. With antithetic on, paths 2j and 2j+1 share
/// one substream with the increments of the odd path negated.
struct McConfig {
  std::size_t n_paths = 100000;
  std::uint64_t seed = 0;
  bool antithetic = false;
  unsigned workers = 1;  ///< 0 means one per hardware thread
};

/// One simulated scenario on a TimeGrid.
struct PathBundle {
  std::vector<double> t;
  std::vector<double> by_incr;  ///< Signal Brownian increments, one per step
  std::vector<double> bz_incr;  ///< Price Brownian increments, one per step
  std::vector<double> y;        ///< Signal
  std::vector<double> s;        ///< Price

  /// Filtered signal, computed on first use.
  const FilteredPath& filtered(const ModelParams& p, const TimeGrid& grid);

 private:
  std::optional<FilteredPath> filtered_;
};

/**
 * Euler-Maruyama path number `index` of stream `seed`:
 *
 *   Y_{k+1} = Y_k + sigma_y dB^Y_k
 *   S_{k+1} = S_k + (mu + Y_k) dt + sigma_z dB^Z_k
 *
 * Only requires finite parameters with sigma_y, sigma_z >= 0, so noiseless
 * paths can be produced for testing.
 */
PathBundle simulate_path(const ModelParams& p, const TimeGrid& grid, std::uint64_t seed,
                         std::size_t index, bool antithetic = false);

/// Same recursion driven by caller-supplied increments.
PathBundle path_from_increments(const ModelParams& p, const TimeGrid& grid,
                                std::vector<double> by_incr, std::vector<double> bz_incr);

/// Trading rule and charges applied along a path.
struct StrategySpec {
  InformationMode mode = InformationMode::uninformed();
  /// Paid once, at the (snapped) subscription time.
  double lump_charge = 0.0;
  /// Rate c(t_k) dt paid on every step from the subscription time on.
  std::shared_ptr<const RateSchedule> schedule;
  /// Test hook: hold no position at all.
  bool zero_position = false;
};

/**
 * Integrates wealth along paths for one StrategySpec. Positions use only
 * what is known at the left end of each step: the true signal once
 * subscribed, the filtered signal before.
 */
class StrategyRunner {
 public:
  StrategyRunner(const ModelParams& p, const TimeGrid& grid, StrategySpec spec);

  std::vector<double> wealth_path(PathBundle& bundle) const;
  double terminal_wealth(PathBundle& bundle) const;

  std::size_t subscribe_index() const { return k_sub_; }

 private:
  template <class Sink>
  void integrate(PathBundle& bundle, Sink&& sink) const;

  ModelParams p_;
  TimeGrid grid_;
  StrategySpec spec_;
  std::size_t k_sub_;
  std::vector<double> multiplier_;  // uninformed position scale per node
  std::vector<double> step_cost_;   // subscription charge per step
};

std::vector<double> run_strategy(const ModelParams& p, const TimeGrid& grid,
                                 PathBundle& bundle, const StrategySpec& spec);

struct McEstimate {
  double mean = 0.0;
  double std_err = 0.0;       ///< Sample std of the independent units / sqrt(units)
  std::size_t n_paths = 0;
  std::size_t saturated = 0;  ///< Paths whose utility hit the exponent cap
};

/// Mean and standard error of per-path samples; with antithetic pairing the
/// independent units are the pair averages.
McEstimate summarize(std::span<const double> samples, bool antithetic);

/// Runs fn(index) for index in [0, n) on `workers` threads with a static
/// partition. fn must only write to slots owned by its index.
template <class Fn>
void for_each_index(std::size_t n, unsigned workers, Fn&& fn) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
}

/**
 * Simulates mc.n_paths paths and records n_outputs numbers per path via
 * fn(bundle, out). Returns outputs[j][path]. The result does not depend on
 * the worker count.
 */
template <class Fn>
std::vector<std::vector<double>> map_paths(const ModelParams& p, const TimeGrid& grid,
                                           const McConfig& mc, std::size_t n_outputs, Fn&& fn) {
  std::vector<std::vector<double>> out(n_outputs, std::vector<double>(mc.n_paths));
  for_each_index(mc.n_paths, mc.workers, [&](std::size_t i) {
    PathBundle bundle = simulate_path(p, grid, mc.seed, i, mc.antithetic);
    std::vector<double> row(n_outputs);
    fn(bundle, std::span<double>(row));
    for (std::size_t j = 0; j < n_outputs; ++j) out[j][i] = row[j];
  });
  return out;
}

/// Terminal wealth of every spec on common paths: result[spec][path].
std::vector<std::vector<double>> terminal_wealth(const ModelParams& p, const TimeGrid& grid,
                                                 const McConfig& mc,
                                                 std::span<const StrategySpec> specs);

/// Monte-Carlo estimate of E[-exp(-gamma X_T)] under spec.
McEstimate expected_utility(const ModelParams& p, const TimeGrid& grid, const McConfig& mc,
                            const StrategySpec& spec, double cap = kDefaultExponentCap);

/// Utilities -exp(-gamma (x_T - shift)) for a set of terminal wealths.
std::vector<double> utilities(const ModelParams& p, std::span<const double> terminal,
                              double shift = 0.0, double cap = kDefaultExponentCap);

}  // namespace infoprice
