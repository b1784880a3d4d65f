// infoprice: pricing, rate curves, simulation, timing and verification.
//
//   infoprice price     --config FILE [--kind single|continuous]
//   infoprice rates     --config FILE [--out DIR] [--points N]
//   infoprice simulate  --config FILE [--out DIR] [--mode M] [--schedule FILE] ...
//   infoprice subscribe --config FILE --schedule FILE
//   infoprice verify    --config FILE [--suite fast|all]
//
// Exit codes: 0 success, 1 a verification check failed, 2 bad input.

#include <iostream>
#include <map>

#include "CLI11.hpp"

#include "infoprice/app.hpp"
#include "infoprice/errors.hpp"
#include "infoprice/subscription_timing.hpp"

using namespace infoprice;

namespace {

struct CommonFlags {
  std::string config;
  ConfigOverrides overrides;
  std::size_t paths = 0;
  std::size_t steps = 0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::string out_dir;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "Run configuration (INI)")->required();
  cmd->add_option("--out", f.out_dir, "Output directory (default ./out)");
  cmd->add_option("--paths", f.paths, "Number of Monte-Carlo paths");
  cmd->add_option("--steps", f.steps, "Number of time steps");
  cmd->add_option("--seed", f.seed, "Random seed");
  cmd->add_option("--workers", f.workers, "Worker threads (0 = one per core)");
  cmd->add_flag("--antithetic", "Pair each path with its mirror image");
}

RunConfig resolve(CLI::App* cmd, CommonFlags& f) {
  auto& o = f.overrides;
  if (cmd->count("--paths")) o.paths = f.paths;
  if (cmd->count("--steps")) o.steps = f.steps;
  if (cmd->count("--seed")) o.seed = f.seed;
  if (cmd->count("--workers")) o.workers = f.workers;
  if (cmd->count("--antithetic")) o.antithetic = true;
  if (cmd->count("--out")) o.out_dir = f.out_dir;
  return load_run_config(f.config, o);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Indifference price and subscription timing of a trading signal"};
  app.require_subcommand(1);
  CommonFlags flags;

  auto* price = app.add_subcommand("price", "Indifference price as JSON");
  add_common(price, flags);
  std::string price_kind = "continuous";
  price->add_option("--kind", price_kind, "single or continuous")
      ->check(CLI::IsMember({"single", "continuous"}));

  auto* rates = app.add_subcommand("rates", "Indifference rate curve and schedule files");
  add_common(rates, flags);
  std::size_t points = 0;
  rates->add_option("--points", points, "Number of curve points (default steps + 1)");

  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo paths, values and summary");
  add_common(simulate, flags);
  std::string sim_mode = "uninformed";
  SimulateOptions sim;
  double t_star = 0.0;
  std::string schedule;
  simulate->add_option("--mode", sim_mode, "uninformed, informed or subscribe")
      ->check(CLI::IsMember({"uninformed", "informed", "subscribe"}));
  simulate->add_option("--charge", sim.charge, "Lump charge for the signal");
  simulate->add_option("--schedule", schedule, "Rate schedule CSV (t,c)");
  simulate->add_option("--t-star", t_star, "Subscription time (default: earliest optimal)");
  simulate->add_option("--dump", sim.dump, "Number of paths written to CSV");

  auto* subscribe = app.add_subcommand("subscribe", "Optimal subscription times for a schedule");
  add_common(subscribe, flags);
  double tol = kDefaultTimingTol;
  subscribe->add_option("--schedule", schedule, "Rate schedule CSV (t,c)")->required();
  subscribe->add_option("--tol", tol, "Tolerance on differences of the timing functional");

  auto* verify = app.add_subcommand("verify", "Run the numerical oracles");
  add_common(verify, flags);
  std::string suite = "fast";
  verify->add_option("--suite", suite, "fast or all")->check(CLI::IsMember({"fast", "all"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (price->parsed()) {
      const RunConfig cfg = resolve(price, flags);
      cmd_price(cfg, price_kind == "single" ? PriceMode::Single : PriceMode::Continuous, std::cout);
    } else if (rates->parsed()) {
      const RunConfig cfg = resolve(rates, flags);
      const std::string dir = cmd_rates(cfg, points ? points : cfg.steps + 1);
      std::cout << dir << '\n';
    } else if (simulate->parsed()) {
      const RunConfig cfg = resolve(simulate, flags);
      static const std::map<std::string, SimulateMode> modes{
          {"uninformed", SimulateMode::Uninformed},
          {"informed", SimulateMode::Informed},
          {"subscribe", SimulateMode::Subscribe}};
      sim.mode = modes.at(sim_mode);
      if (simulate->count("--schedule")) sim.schedule = schedule;
      if (simulate->count("--t-star")) sim.t_star = t_star;
      cmd_simulate(cfg, sim, std::cout);
    } else if (subscribe->parsed()) {
      const RunConfig cfg = resolve(subscribe, flags);
      cmd_subscribe(cfg, schedule, std::cout, tol);
    } else if (verify->parsed()) {
      const RunConfig cfg = resolve(verify, flags);
      return cmd_verify(cfg, suite == "all" ? VerifySuite::All : VerifySuite::Fast, std::cout)
                 ? 0
                 : 1;
    }
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
