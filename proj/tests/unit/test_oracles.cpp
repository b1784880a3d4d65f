#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "infoprice/closed_form.hpp"
#include "infoprice/errors.hpp"
#include "infoprice/oracles.hpp"
#include "json.hpp"

using namespace infoprice;

TEST(Report, RelativeAndAbsolute) {
  const auto rel = make_report("r", 101.0, 100.0, 0.02, ToleranceKind::Relative);
  EXPECT_TRUE(rel.passed);
  EXPECT_EQ(rel.tolerance, 0.02);
  EXPECT_FALSE(make_report("r", 103.0, 100.0, 0.02, ToleranceKind::Relative).passed);
  EXPECT_TRUE(make_report("a", 1.5, 1.0, 0.5, ToleranceKind::Absolute).passed);
  EXPECT_FALSE(make_report("a", 1.6, 1.0, 0.5, ToleranceKind::Absolute).passed);
  EXPECT_FALSE(make_report("n", NAN, 1.0, 0.5, ToleranceKind::Absolute).passed);
}

TEST(Report, JsonFields) {
  const std::vector<OracleReport> r{
      make_report("first", 1.0, 1.0, 1e-9, ToleranceKind::Absolute, "note"),
      make_report("second", 0.1, 0.3, 1e-9, ToleranceKind::Relative)};
  const auto j = nlohmann::json::parse(reports_to_json(r));
  ASSERT_EQ(j.size(), 2u);
  EXPECT_EQ(j[0]["name"], "first");
  EXPECT_EQ(j[0]["passed"], true);
  EXPECT_EQ(j[1]["passed"], false);
  EXPECT_EQ(j[1]["observed"].get<double>(), 0.1);
  EXPECT_EQ(j[1]["expected"].get<double>(), 0.3);
}

// ---------------------------------------------------------------------------

TEST(GaussHermite, IntegratesPolynomialsExactly) {
  const GaussHermiteRule rule(64);
  ASSERT_EQ(rule.nodes.size(), 64u);
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  // int x^{2k} exp(-x^2) dx = (2k-1)!! sqrt(pi) / 2^k
  double expected = sqrt_pi;
  for (int k = 0; k <= 10; ++k) {
    double s = 0.0;
    double odd = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      s += rule.weights[i] * std::pow(rule.nodes[i], 2 * k);
      odd += rule.weights[i] * std::pow(rule.nodes[i], 2 * k + 1);
    }
    EXPECT_NEAR(s / expected, 1.0, 1e-12) << k;
    EXPECT_NEAR(odd, 0.0, 1e-10 * expected) << k;
    expected *= (2 * k + 1) / 2.0;
  }
  for (std::size_t i = 1; i < rule.nodes.size(); ++i) EXPECT_LT(rule.nodes[i - 1], rule.nodes[i]);
}

TEST(SinglePeriodOracle, MatchesClosedForm) {
  const ModelParams p = example_params();
  const auto oracle = single_period_oracle(p);
  const auto cf = single_period_solve(p);
  EXPECT_NEAR(oracle.c_hat, cf.c_hat(), 1e-8 * cf.c_hat());
  EXPECT_NEAR(oracle.c_hat, 5.0 * std::log(5.0), 1e-8);
  EXPECT_NEAR(oracle.phi_ui, cf.phi_uninformed(), 1e-8);
  EXPECT_NEAR(oracle.v_ui, cf.v_uninformed(), 1e-10);
}

TEST(SinglePeriodOracle, NoSignalNoPrice) {
  ModelParams p = example_params();
  p.sigma_y = 0.0;
  EXPECT_EQ(single_period_oracle(p).c_hat, 0.0);
}

TEST(SinglePeriodOracle, Lattice) {
  for (double g : {0.05, 0.5}) {
    for (double sy : {0.02, 0.1}) {
      for (double sz : {0.05, 0.2}) {
        ModelParams p = example_params();
        p.gamma = g;
        p.sigma_y = sy;
        p.sigma_z = sz;
        const double cf = single_period_solve(p).c_hat();
        EXPECT_NEAR(single_period_oracle(p).c_hat, cf, 1e-8 * cf) << g << ' ' << sy << ' ' << sz;
      }
    }
  }
}

// ---------------------------------------------------------------------------

TEST(OdeOracle, MatchesClosedForm) {
  const ModelParams p = example_params();
  EXPECT_LT(ode_oracle(p, TimeGrid(1.0, 2001)).max(), 1e-8);
}

TEST(OdeOracle, FourthOrderConvergence) {
  const ModelParams p = example_params();
  const double e1 = ode_oracle(p, TimeGrid(1.0, 100)).max();
  const double e2 = ode_oracle(p, TimeGrid(1.0, 200)).max();
  const double e3 = ode_oracle(p, TimeGrid(1.0, 400)).max();
  EXPECT_NEAR(std::log2(e1 / e2), 4.0, 0.3);
  EXPECT_NEAR(std::log2(e2 / e3), 4.0, 0.3);
}

TEST(OdeOracle, NoSignalVolatility) {
  ModelParams p = example_params();
  p.sigma_y = 0.0;
  EXPECT_LT(ode_oracle(p, TimeGrid(1.0, 200)).max(), 1e-12);
}

TEST(Hitsuda, ResidualVanishes) {
  const ModelParams p = example_params();
  for (double t : {0.1, 0.5, 1.0}) {
    for (double u : {0.0, 0.05, t / 2, t}) EXPECT_NEAR(hitsuda_residual(p, t, u), 0.0, 1e-10);
  }
  const auto r = hitsuda_residual_check(p, 12);
  EXPECT_TRUE(r.passed) << r.observed;
}

TEST(KalmanVariance, ConvergesOnFineGrid) {
  const auto r = kalman_variance_check(example_params(), TimeGrid(1.0, 10000), 1e-5);
  EXPECT_TRUE(r.passed) << r.observed;
}

TEST(FilterAgreement, SmallEnsemble) {
  McConfig mc;
  mc.n_paths = 64;
  mc.seed = 3;
  const auto r = filter_agreement(example_params(), TimeGrid(1.0, 2000), mc);
  EXPECT_TRUE(r.passed) << r.observed;
}

// ---------------------------------------------------------------------------

TEST(MonteCarloChecks, ValuesAndMartingale) {
  const ModelParams p = example_params();
  const TimeGrid grid(1.0, 200);
  McConfig mc;
  mc.n_paths = 20000;
  mc.seed = 4;
  mc.antithetic = true;
  for (const auto& mode : {InformationMode::uninformed(), InformationMode::informed_from_start(),
                           InformationMode::subscribe_at(0.5)}) {
    const auto r = mc_value_check(p, grid, mc, mode);
    EXPECT_TRUE(r.passed) << r.name << ' ' << r.observed << ' ' << r.expected;
  }
  const auto z = mc_value_check(p, grid, mc, InformationMode::informed_from_start(), true);
  EXPECT_EQ(z.observed, -std::exp(-p.gamma * p.x0));
  EXPECT_TRUE(z.passed);

  const auto mart = martingale_check(p, grid, mc, InformationMode::uninformed());
  ASSERT_EQ(mart.size(), 5u);
  for (const auto& r : mart) EXPECT_TRUE(r.passed) << r.name;
  EXPECT_THROW(martingale_check(p, grid, mc, InformationMode::subscribe_at(0.5)), DomainError);
}

TEST(IndifferenceBisection, NoSignalAndRiskScaling) {
  ModelParams p = example_params();
  const TimeGrid grid(1.0, 100);
  McConfig mc;
  mc.n_paths = 4000;
  mc.seed = 6;
  mc.antithetic = true;
  const auto base = indifference_bisection(p, grid, mc);
  EXPECT_GT(base.c_hat, 0.0);
  EXPECT_NEAR(base.half_width, 3 * base.std_err, 1e-15);

  ModelParams doubled = p;
  doubled.gamma *= 2.0;
  const auto half = indifference_bisection(doubled, grid, mc);
  EXPECT_NEAR(half.c_hat, base.c_hat / 2.0, 1e-9 * base.c_hat);

  p.sigma_y = 0.0;
  EXPECT_EQ(indifference_bisection(p, grid, mc).c_hat, 0.0);
}

TEST(IndifferenceBisection, AgreesWithClosedForm) {
  const ModelParams p = example_params();
  McConfig mc;
  mc.n_paths = 40000;
  mc.seed = 10;
  mc.antithetic = true;
  const auto est = indifference_bisection(p, TimeGrid(1.0, 500), mc);
  EXPECT_NEAR(est.c_hat, continuous_price(p).c_hat_0T, std::max(est.half_width, 0.02));
}

TEST(IndifferenceBisection, Deterministic) {
  const ModelParams p = example_params();
  McConfig mc;
  mc.n_paths = 1000;
  mc.seed = 2;
  const auto a = indifference_bisection(p, TimeGrid(1.0, 50), mc);
  mc.workers = 3;
  const auto b = indifference_bisection(p, TimeGrid(1.0, 50), mc);
  EXPECT_EQ(a.c_hat, b.c_hat);
  EXPECT_EQ(a.std_err, b.std_err);
}
