#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "infoprice/model.hpp"
#include "infoprice/path_sim.hpp"

namespace infoprice {

/// Fully resolved run settings.
struct RunConfig {
  ModelParams params;
  std::size_t steps = 1000;
  McConfig mc;
  std::string out_dir = "out";

  TimeGrid grid() const { return TimeGrid(params.t_end, steps); }
};

/// Command-line values that replace what the config file says.
struct ConfigOverrides {
  std::optional<std::size_t> paths;
  std::optional<std::size_t> steps;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<bool> antithetic;
  std::optional<std::string> out_dir;
};

/**
 * Reads an INI file with sections
 *
 *   [model]    mu, sigma_y, sigma_z, s0, y0
 *   [investor] gamma, x0
 *   [horizon]  t_end, steps
 *   [mc]       paths, seed
 *
 * steps, paths and seed default to 1000, 100000 and 0; every other key is
 * required. Unknown sections or keys and malformed numbers throw
 * ConfigError; out-of-domain values throw DomainError.
 */
RunConfig parse_run_config(std::istream& in, const ConfigOverrides& overrides = {});
RunConfig load_run_config(const std::string& path, const ConfigOverrides& overrides = {});

enum class PriceMode { Single, Continuous };
enum class SimulateMode { Uninformed, Informed, Subscribe };

/// Prints {c_hat, c_bar, c_bar_bound} (continuous) or {c_hat} (single).
void cmd_price(const RunConfig& cfg, PriceMode mode, std::ostream& out);

/**
 * Writes rates.csv (t,c_hat_t,c_bar,ell_t on n_points nodes) and three
 * schedule files in the t,c format: schedule_c_hat.csv, schedule_c_bar.csv
 * and schedule_bump.csv. Returns the directory written to.
 */
std::string cmd_rates(const RunConfig& cfg, std::size_t n_points);

struct SimulateOptions {
  SimulateMode mode = SimulateMode::Uninformed;
  double charge = 0.0;                  ///< Lump charge paid at subscription
  std::optional<std::string> schedule;  ///< Rate file; required for Subscribe
  std::optional<double> t_star;         ///< Defaults to tau_e of the schedule
  std::size_t dump = 1;                 ///< Number of paths written to CSV
};

/**
 * Monte-Carlo run of one strategy. Writes paths/path_NNNNNN.csv,
 * values/values_NNNNNN.csv (closed-form V^UI, V^I, V^F along the path) and
 * summary.json {mc_mean, std_err, closed_form, z_score}; also prints the
 * summary.
 */
void cmd_simulate(const RunConfig& cfg, const SimulateOptions& opt, std::ostream& out);

/// Prints {tau_e, tau_l, indifference_set, tol, grid_dt}.
void cmd_subscribe(const RunConfig& cfg, const std::string& schedule_file, std::ostream& out,
                   double tol);

enum class VerifySuite { Fast, All };

/// Prints the JSON report array and returns true iff every check passed.
bool cmd_verify(const RunConfig& cfg, VerifySuite suite, std::ostream& out);

/// Default prescribed schedule: indifference rate plus 1 before 0.2 T and
/// minus 1 after 0.8 T.
RateSchedule default_bump_schedule(const ModelParams& p, const TimeGrid& grid);

}  // namespace infoprice
