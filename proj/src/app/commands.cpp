#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <ostream>

#include "json.hpp"

#include "infoprice/app.hpp"
#include "infoprice/closed_form.hpp"
#include "infoprice/errors.hpp"
#include "infoprice/oracles.hpp"
#include "infoprice/subscription_timing.hpp"

namespace infoprice {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_output(const fs::path& file) {
  fs::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + file.string() + "'");
  return out;
}

std::string numbered(const char* stem, std::size_t i) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%06zu.csv", stem, i);
  return buf;
}

void write_schedule_file(const fs::path& file, const RateSchedule& schedule) {
  auto out = open_output(file);
  write_schedule_csv(out, schedule);
}

}  // namespace

RateSchedule default_bump_schedule(const ModelParams& p, const TimeGrid& grid) {
  return bump_schedule(p, grid, 0.2 * p.t_end, 0.8 * p.t_end, 1.0, 1.0);
}

// ---------------------------------------------------------------------------

void cmd_price(const RunConfig& cfg, PriceMode mode, std::ostream& out) {
  Json j;
  if (mode == PriceMode::Single) {
    j["c_hat"] = single_period_solve(cfg.params).c_hat();
  } else {
    const auto r = continuous_price(cfg.params);
    j["c_hat"] = r.c_hat_0T;
    j["c_bar"] = r.c_bar;
    j["c_bar_bound"] = r.c_bar_bound;
  }
  out << j.dump(2) << '\n';
}

std::string cmd_rates(const RunConfig& cfg, std::size_t n_points) {
  if (n_points < 2) throw DomainError("points", "need at least two points");
  const ModelParams& p = cfg.params;
  const TimeGrid grid(p.t_end, n_points - 1);
  const double c_bar = continuous_price(p).c_bar;
  const fs::path dir(cfg.out_dir);

  auto out = open_output(dir / "rates.csv");
  out << "t,c_hat_t,c_bar,ell_t\n";
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid[k];
    out << g17(t) << ',' << g17(indifference_rate(p, t)) << ',' << g17(c_bar) << ','
        << g17(ell(p, t)) << '\n';
  }
  write_schedule_file(dir / "schedule_c_hat.csv", indifference_schedule(p, grid));
  write_schedule_file(dir / "schedule_c_bar.csv", RateSchedule::constant(p.t_end, c_bar));
  write_schedule_file(dir / "schedule_bump.csv", default_bump_schedule(p, grid));
  return dir.string();
}

// ---------------------------------------------------------------------------

void cmd_simulate(const RunConfig& cfg, const SimulateOptions& opt, std::ostream& out) {
  const ModelParams& p = cfg.params;
  const TimeGrid grid = cfg.grid();
  const fs::path dir(cfg.out_dir);

  std::optional<RateSchedule> file_schedule;
  if (opt.schedule) file_schedule = read_schedule_csv_file(*opt.schedule);
  if (opt.mode == SimulateMode::Subscribe && !file_schedule) {
    throw ScheduleDomainError("subscribe mode needs a rate schedule file");
  }
  const RateSchedule prescribed = file_schedule ? *file_schedule : default_bump_schedule(p, grid);
  prescribed.require_covers(0.0, p.t_end);

  StrategySpec informed;
  informed.mode = InformationMode::informed_from_start();
  StrategySpec uninformed;
  StrategySpec subscribe;
  double t_star = 0.0;
  if (opt.mode == SimulateMode::Subscribe) {
    t_star = grid.snap(opt.t_star ? *opt.t_star : earliest_time(p, prescribed, grid).tau_e);
    subscribe.mode = InformationMode::subscribe_at(t_star);
    subscribe.schedule = std::make_shared<const RateSchedule>(prescribed);
    subscribe.lump_charge = opt.charge;
  } else if (opt.mode == SimulateMode::Informed) {
    informed.lump_charge = opt.charge;
  } else if (opt.charge != 0.0) {
    throw DomainError("charge", "the uninformed investor pays nothing");
  }

  const StrategyRunner run_informed(p, grid, informed);
  const StrategyRunner run_uninformed(p, grid, uninformed);
  std::optional<StrategyRunner> run_subscribe;
  if (opt.mode == SimulateMode::Subscribe) run_subscribe.emplace(p, grid, subscribe);

  // Per-path dumps.
  const TimingResult timing = earliest_time(p, prescribed, grid);
  const std::size_t dump = std::min(opt.dump, cfg.mc.n_paths);
  for (std::size_t i = 0; i < dump; ++i) {
    PathBundle b = simulate_path(p, grid, cfg.mc.seed, i, cfg.mc.antithetic);
    const auto& y_hat = b.filtered(p, grid).y_hat;
    const auto x_inf = run_informed.wealth_path(b);
    const auto x_un = run_uninformed.wealth_path(b);
    std::vector<double> x_sub;
    if (run_subscribe) x_sub = run_subscribe->wealth_path(b);

    auto paths = open_output(dir / "paths" / numbered("path", i));
    paths << "t,y,y_hat,s,x_informed,x_uninformed" << (run_subscribe ? ",x_subscribe" : "") << '\n';
    auto values = open_output(dir / "values" / numbered("values", i));
    values << "t,v_uninformed,v_informed,v_flexible\n";
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double t = grid[k];
      paths << g17(t) << ',' << g17(b.y[k]) << ',' << g17(y_hat[k]) << ',' << g17(b.s[k]) << ','
            << g17(x_inf[k]) << ',' << g17(x_un[k]);
      if (run_subscribe) paths << ',' << g17(x_sub[k]);
      paths << '\n';

      values << g17(t) << ',' << g17(value_uninformed(p, t, x_un[k], y_hat[k])) << ','
             << g17(value_informed(p, t, x_inf[k], b.y[k])) << ',';
      if (t <= timing.tau_l) {
        values << g17(value_flexible(p, t, x_un[k], y_hat[k], prescribed, grid, timing.tol));
      } else {
        values << "nan";
      }
      values << '\n';
    }
  }

  // Ensemble summary for the selected strategy.
  const StrategySpec& chosen = opt.mode == SimulateMode::Informed    ? informed
                               : opt.mode == SimulateMode::Subscribe ? subscribe
                                                                     : uninformed;
  const McEstimate est = expected_utility(p, grid, cfg.mc, chosen);
  double closed = 0.0;
  switch (opt.mode) {
    case SimulateMode::Uninformed:
      closed = value_uninformed(p, 0.0, p.x0, p.y0);
      break;
    case SimulateMode::Informed:
      closed = value_informed(p, 0.0, p.x0, p.y0, opt.charge);
      break;
    case SimulateMode::Subscribe:
      closed = -std::exp(std::log(-subscription_utility(p, t_star, prescribed)) +
                         p.gamma * opt.charge);
      break;
  }
  double z = 0.0;
  if (est.std_err > 0.0) {
    z = (est.mean - closed) / est.std_err;
  } else if (est.mean != closed) {
    z = std::copysign(std::numeric_limits<double>::infinity(), est.mean - closed);
  }

  Json j;
  j["mc_mean"] = est.mean;
  j["std_err"] = est.std_err;
  j["closed_form"] = closed;
  j["z_score"] = z;
  j["n_paths"] = est.n_paths;
  j["saturated"] = est.saturated;
  if (opt.mode == SimulateMode::Subscribe) j["t_star"] = t_star;
  auto summary = open_output(dir / "summary.json");
  summary << j.dump(2) << '\n';
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------

void cmd_subscribe(const RunConfig& cfg, const std::string& schedule_file, std::ostream& out,
                   double tol) {
  const TimeGrid grid = cfg.grid();
  const RateSchedule schedule = read_schedule_csv_file(schedule_file);
  const TimingResult r = earliest_time(cfg.params, schedule, grid, tol);
  Json j;
  j["tau_e"] = r.tau_e;
  j["tau_l"] = r.tau_l;
  j["indifference_set"] = r.indifference_set;
  j["tol"] = r.tol;
  j["grid_dt"] = grid.dt();
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------

namespace {

std::vector<OracleReport> ode_reports(const ModelParams& p) {
  std::vector<OracleReport> out;
  const auto r = ode_oracle(p, TimeGrid(p.t_end, 2001));
  const std::string detail = "2001 steps";
  out.push_back(make_report("ode_a_informed", r.a_informed, 0.0, 1e-8, ToleranceKind::Absolute, detail));
  out.push_back(make_report("ode_b_informed", r.b_informed, 0.0, 1e-8, ToleranceKind::Absolute, detail));
  out.push_back(make_report("ode_a_uninformed", r.a_uninformed, 0.0, 1e-8, ToleranceKind::Absolute, detail));
  out.push_back(make_report("ode_b_uninformed", r.b_uninformed, 0.0, 1e-8, ToleranceKind::Absolute, detail));

  // Coarse grids keep the error well above rounding.
  const double e1 = ode_oracle(p, TimeGrid(p.t_end, 100)).max();
  const double e2 = ode_oracle(p, TimeGrid(p.t_end, 200)).max();
  const double e3 = ode_oracle(p, TimeGrid(p.t_end, 400)).max();
  if (e1 > 0.0 && e2 > 0.0 && e3 > 0.0) {
    out.push_back(make_report("ode_order_100_200", std::log2(e1 / e2), 4.0, 0.3,
                              ToleranceKind::Absolute, "observed convergence order"));
    out.push_back(make_report("ode_order_200_400", std::log2(e2 / e3), 4.0, 0.3,
                              ToleranceKind::Absolute, "observed convergence order"));
  }
  return out;
}

std::vector<OracleReport> single_period_reports(const ModelParams& p) {
  std::vector<OracleReport> out;
  const auto oracle = single_period_oracle(p);
  const auto closed = single_period_solve(p);
  if (closed.c_hat() == 0.0) {
    out.push_back(make_report("single_period_c_hat", oracle.c_hat, 0.0, 1e-10,
                              ToleranceKind::Absolute));
  } else {
    out.push_back(make_report("single_period_c_hat", oracle.c_hat, closed.c_hat(), 1e-8,
                              ToleranceKind::Relative));
  }
  out.push_back(make_report("single_period_phi_uninformed", oracle.phi_ui,
                            closed.phi_uninformed(), 1e-8, ToleranceKind::Absolute));

  double worst = 0.0;
  for (double gamma : {0.05, 0.1, 0.5}) {
    for (double sy : {0.02, 0.05, 0.1}) {
      for (double sz : {0.05, 0.1, 0.2}) {
        ModelParams q = p;
        q.gamma = gamma;
        q.sigma_y = sy;
        q.sigma_z = sz;
        const double c = single_period_solve(q).c_hat();
        worst = std::max(worst, std::fabs(single_period_oracle(q).c_hat - c) / c);
      }
    }
  }
  out.push_back(make_report("single_period_lattice", worst, 0.0, 1e-8, ToleranceKind::Absolute,
                            "max relative deviation over 27 (gamma, sigma_y, sigma_z)"));
  return out;
}

std::vector<OracleReport> mc_reports(const RunConfig& cfg) {
  const ModelParams& p = cfg.params;
  const TimeGrid grid = cfg.grid();
  std::vector<OracleReport> out;
  for (const auto& mode : {InformationMode::uninformed(), InformationMode::informed_from_start()}) {
    out.push_back(mc_value_check(p, grid, cfg.mc, mode));
    for (auto& r : martingale_check(p, grid, cfg.mc, mode)) out.push_back(std::move(r));
  }
  out.push_back(mc_value_check(p, grid, cfg.mc, InformationMode::uninformed(), true));

  const auto est = indifference_bisection(p, grid, cfg.mc);
  out.push_back(make_report("indifference_bisection", est.c_hat, continuous_price(p).c_hat_0T,
                            est.half_width, ToleranceKind::Absolute,
                            "half-width = 3 std errs " + std::to_string(est.std_err)));
  return out;
}

}  // namespace

bool cmd_verify(const RunConfig& cfg, VerifySuite suite, std::ostream& out) {
  const ModelParams& p = cfg.params;
  std::vector<std::future<std::vector<OracleReport>>> jobs;
  auto launch = [&](auto fn) { jobs.push_back(std::async(std::launch::async, fn)); };

  launch([&] { return ode_reports(p); });
  launch([&] { return single_period_reports(p); });
  launch([&] { return std::vector<OracleReport>{hitsuda_residual_check(p)}; });
  launch([&] {
    return std::vector<OracleReport>{kalman_variance_check(p, TimeGrid(p.t_end, 10000))};
  });
  if (suite == VerifySuite::All) {
    launch([&] { return mc_reports(cfg); });
    launch([&] {
      McConfig mc = cfg.mc;
      mc.n_paths = 1000;
      return std::vector<OracleReport>{filter_agreement(p, TimeGrid(p.t_end, 10000), mc)};
    });
  }

  std::vector<OracleReport> reports;
  for (auto& job : jobs) {
    for (auto& r : job.get()) reports.push_back(std::move(r));
  }
  out << reports_to_json(reports) << '\n';
  return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.passed; });
}

}  // namespace infoprice
