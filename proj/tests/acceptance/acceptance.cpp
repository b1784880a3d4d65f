// Runs every acceptance criterion on the example parameters and prints one
// PASS/FAIL line per criterion. Exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "infoprice/closed_form.hpp"
#include "infoprice/oracles.hpp"
#include "infoprice/path_sim.hpp"
#include "infoprice/subscription_timing.hpp"

using namespace infoprice;

namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

double rel_err(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

ModelParams with(double gamma, double sigma_y, double sigma_z) {
  ModelParams p = example_params();
  p.gamma = gamma;
  p.sigma_y = sigma_y;
  p.sigma_z = sigma_z;
  return p;
}

McConfig mc_config(std::size_t paths, std::uint64_t seed) {
  McConfig mc;
  mc.n_paths = paths;
  mc.seed = seed;
  mc.antithetic = true;
  mc.workers = 0;
  return mc;
}

void c1_continuous_price(Outcome& o) {
  const ModelParams p = example_params();
  const double closed = continuous_price(p).c_hat_0T;
  o.require(rel_err(closed, 5.0 * std::tanh(2.0)) < 1e-14, "closed form equals 5 tanh 2");
  const auto est = indifference_bisection(p, TimeGrid(1.0, 1000), mc_config(200000, 1));
  o.require(std::fabs(est.c_hat - closed) <= est.half_width, "MC brackets closed form");
  o.require(est.half_width < 0.05, "half-width below 0.05");
  o.detail << "closed " << closed << ", MC " << est.c_hat << " +- " << est.half_width;
}

void c2_single_period(Outcome& o) {
  double worst = rel_err(single_period_oracle(example_params()).c_hat,
                         single_period_solve(example_params()).c_hat());
  for (double g : {0.05, 0.1, 0.5}) {
    for (double sy : {0.02, 0.05, 0.1}) {
      for (double sz : {0.05, 0.1, 0.2}) {
        const ModelParams p = with(g, sy, sz);
        worst = std::max(worst, rel_err(single_period_oracle(p).c_hat,
                                        single_period_solve(p).c_hat()));
      }
    }
  }
  o.require(worst < 1e-8, "relative error below 1e-8");
  o.detail << "worst relative error " << worst;
}

void c3_hjb(Outcome& o) {
  const ModelParams p = example_params();
  const double dev = ode_oracle(p, TimeGrid(1.0, 2001)).max();
  o.require(dev < 1e-8, "max deviation below 1e-8");
  const double e1 = ode_oracle(p, TimeGrid(1.0, 100)).max();
  const double e2 = ode_oracle(p, TimeGrid(1.0, 200)).max();
  const double e3 = ode_oracle(p, TimeGrid(1.0, 400)).max();
  const double r1 = std::log2(e1 / e2);
  const double r2 = std::log2(e2 / e3);
  o.require(std::fabs(r1 - 4.0) < 0.3 && std::fabs(r2 - 4.0) < 0.3, "fourth-order convergence");
  o.detail << "max deviation " << dev << ", observed orders " << r1 << ", " << r2;
}

void c4_filter(Outcome& o) {
  const ModelParams p = example_params();
  const TimeGrid grid(1.0, 10000);
  McConfig mc = mc_config(1000, 1);
  mc.antithetic = false;
  const auto rmse = filter_agreement(p, grid, mc, 1e-3);
  const auto var = kalman_variance_check(p, grid, 1e-3);
  o.require(rmse.passed, "filter RMSE below 1e-3");
  o.require(var.passed, "posterior variance within 1e-3");
  o.detail << "RMSE " << rmse.observed << ", variance error " << var.observed;
}

void c5_hitsuda(Outcome& o) {
  const auto r = hitsuda_residual_check(example_params(), 20, 1e-6);
  o.require(r.passed, "residual below 1e-6");
  o.detail << "max residual " << r.observed;
}

void c6_martingale(Outcome& o) {
  const ModelParams p = example_params();
  const TimeGrid grid(1.0, 1000);
  const McConfig mc = mc_config(100000, 2);
  std::size_t n = 0;
  double worst_z = 0.0;
  for (const auto& mode : {InformationMode::informed_from_start(), InformationMode::uninformed()}) {
    for (const auto& r : martingale_check(p, grid, mc, mode)) {
      o.require(r.passed, r.name);
      worst_z = std::max(worst_z, std::fabs(r.observed - r.expected) / (r.tolerance / 3.0));
      ++n;
    }
  }
  o.detail << n << " checks, worst |z| " << worst_z;
}

struct Schedules {
  ModelParams p = example_params();
  TimeGrid grid{1.0, 1000};
  RateSchedule flat = RateSchedule::constant(1.0, continuous_price(p).c_bar);
  RateSchedule hat = indifference_schedule(p, grid);
  RateSchedule bump = bump_schedule(p, grid, 0.2, 0.8, 1.0, 1.0);
};

void c7_timing(Outcome& o) {
  const Schedules s;
  const double dt = s.grid.dt();
  const auto flat = earliest_time(s.p, s.flat, s.grid);
  o.require(std::fabs(flat.tau_e - 0.5) <= dt && std::fabs(flat.tau_l - 0.5) <= dt,
            "constant rate at T/2");
  const auto hat = earliest_time(s.p, s.hat, s.grid, 1e-9);
  o.require(hat.tau_e == 0.0 && hat.tau_l == 1.0, "indifference rate spans [0, T]");
  o.require(hat.indifference_set.size() == s.grid.size(), "indifference set is the full grid");
  const auto bump = earliest_time(s.p, s.bump, s.grid);
  o.require(std::fabs(bump.tau_e - 0.2) <= dt && std::fabs(bump.tau_l - 0.8) <= dt,
            "bump schedule on [0.2, 0.8]");
  o.detail << "constant [" << flat.tau_e << ", " << flat.tau_l << "], indifference ["
           << hat.tau_e << ", " << hat.tau_l << "] with " << hat.indifference_set.size()
           << " points, bump [" << bump.tau_e << ", " << bump.tau_l << "]";
}

void c8_obstacle(Outcome& o) {
  const Schedules s;
  const std::vector<double> y_hats{-0.02, -0.01, 0.0, 0.01, 0.02};
  std::size_t checked = 0;
  for (const RateSchedule* c : {&s.flat, &s.hat, &s.bump}) {
    const auto timing = earliest_time(s.p, *c, s.grid);
    const auto in_set = [&](double t) {
      return std::any_of(timing.indifference_set.begin(), timing.indifference_set.end(),
                         [&](double u) { return std::fabs(u - t) < 1e-12; });
    };
    for (int k = 0; k <= 100; ++k) {
      const double t = s.grid[static_cast<std::size_t>(k) * 10];
      if (t > timing.tau_l) break;
      for (double y : y_hats) {
        const double vf = value_flexible(s.p, t, s.p.x0, y, *c, s.grid);
        const double vi = value_prepurchase(s.p, t, s.p.x0, y, *c);
        const double gap = vf - vi;
        const double tol = timing.tol * timing.scale * std::fabs(vi);
        o.require(gap >= -tol, "V^F above obstacle");
        if (in_set(t)) {
          o.require(gap <= tol, "equality on indifference set");
        } else {
          o.require(gap > tol, "strict inequality off indifference set");
        }
        ++checked;
      }
    }
  }
  o.detail << checked << " lattice points";
}

void c9_mc_timing(Outcome& o) {
  const Schedules s;
  const auto bump = std::make_shared<const RateSchedule>(s.bump);
  const std::vector<double> times{0.0, 0.2, 0.5, 0.8, 1.0};
  std::vector<StrategySpec> specs;
  for (double t : times) {
    StrategySpec spec;
    spec.mode = InformationMode::subscribe_at(t);
    spec.schedule = bump;
    specs.push_back(spec);
  }
  const McConfig mc = mc_config(200000, 3);
  const auto wealth = terminal_wealth(s.p, s.grid, mc, specs);
  std::vector<std::vector<double>> u;
  std::vector<double> mean;
  for (const auto& w : wealth) {
    u.push_back(utilities(s.p, w));
    mean.push_back(summarize(u.back(), mc.antithetic).mean);
  }
  const auto best = static_cast<std::size_t>(std::max_element(mean.begin(), mean.end()) -
                                             mean.begin());
  // Paired difference against the best time on common paths.
  const auto gap = [&](std::size_t j) {
    std::vector<double> d(mc.n_paths);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = u[best][i] - u[j][i];
    return summarize(d, mc.antithetic);
  };
  for (std::size_t j = 0; j < times.size(); ++j) {
    const McEstimate g = gap(j);
    const bool inside = times[j] > 0.0 && times[j] < 1.0;
    if (inside) {
      o.require(g.mean <= 3 * g.std_err, "interior time maximal");
    } else {
      o.require(g.mean > 3 * g.std_err, "endpoint strictly lower");
    }
    o.detail << "t*=" << times[j] << ": " << mean[j] << " (gap " << g.mean << " se "
             << g.std_err << ") ";
  }
}

void c10_lattice(Outcome& o) {
  const std::vector<double> gammas{0.05, 0.1, 0.2, 0.5};
  const std::vector<double> sys{0.02, 0.05, 0.1, 0.2};
  const std::vector<double> szs{0.02, 0.05, 0.1, 0.2};
  const auto price = [](double g, double sy, double sz) {
    return continuous_price(with(g, sy, sz));
  };
  double worst_scaling = 0.0;
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    for (std::size_t j = 0; j < sys.size(); ++j) {
      for (std::size_t k = 0; k < szs.size(); ++k) {
        const auto c = price(gammas[i], sys[j], szs[k]);
        if (i > 0) o.require(c.c_hat_0T < price(gammas[i - 1], sys[j], szs[k]).c_hat_0T, "gamma");
        if (j > 0) o.require(c.c_hat_0T > price(gammas[i], sys[j - 1], szs[k]).c_hat_0T, "sigma_y");
        if (k > 0) o.require(c.c_hat_0T < price(gammas[i], sys[j], szs[k - 1]).c_hat_0T, "sigma_z");
        o.require(c.c_bar <= c.c_bar_bound, "bound");
        const double doubled = price(2 * gammas[i], sys[j], szs[k]).c_hat_0T;
        worst_scaling = std::max(worst_scaling, rel_err(2 * doubled, c.c_hat_0T));
      }
    }
  }
  o.require(worst_scaling < 1e-14, "1/gamma scaling");
  const auto far = continuous_price(with(0.1, 1.0, 0.05));  // sigma_y T / sigma_z = 20
  const auto near = continuous_price(example_params());
  o.require(far.c_bar_bound - far.c_bar < 1e-12, "gap at ratio 20");
  o.require(near.c_bar_bound - near.c_bar > 1e-12, "gap at ratio 2");
  o.detail << "1/gamma scaling error " << worst_scaling << ", gap at ratio 20 "
           << far.c_bar_bound - far.c_bar << ", at ratio 2 " << near.c_bar_bound - near.c_bar;
}

struct Criterion {
  int id;
  const char* name;
  double time_limit;  // seconds, 0 for none
  std::function<void(Outcome&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "continuous-time price", 120.0, c1_continuous_price},
      {2, "single-period price", 5.0, c2_single_period},
      {3, "HJB coefficients", 1.0, c3_hjb},
      {4, "filter correctness", 30.0, c4_filter},
      {5, "Hitsuda kernel", 5.0, c5_hitsuda},
      {6, "martingale checks", 0.0, c6_martingale},
      {7, "timing special cases", 0.0, c7_timing},
      {8, "obstacle property", 0.0, c8_obstacle},
      {9, "MC optimality of timing", 300.0, c9_mc_timing},
      {10, "property lattice", 0.0, c10_lattice},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit > 0.0) o.require(secs < c.time_limit, "runtime limit");
    if (!o.passed) ++failures;
    std::printf("criterion %2d %-24s %s  %.2fs  %s\n", c.id, c.name, o.passed ? "PASS" : "FAIL",
                secs, o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failures;
}
