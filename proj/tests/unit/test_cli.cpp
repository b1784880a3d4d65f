#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "infoprice/app.hpp"
#include "infoprice/errors.hpp"
#include "json.hpp"

using namespace infoprice;
namespace fs = std::filesystem;

namespace {

const char* kValid = R"(
[model]
mu = 0.05
sigma_y = 0.1
sigma_z = 0.05
s0 = 10
y0 = 0
[investor]
gamma = 0.1
x0 = 0
[horizon]
t_end = 1
)";

RunConfig parse(const std::string& text, const ConfigOverrides& o = {}) {
  std::istringstream in(text);
  return parse_run_config(in, o);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("infoprice_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Runs the CLI with stdout captured to a file; returns the exit code.
int run_cli(const std::string& args, const fs::path& stdout_file) {
  const std::string cmd = std::string(INFOPRICE_CLI) + " " + args + " > " +
                          stdout_file.string() + " 2> " + stdout_file.string() + ".err";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string config_flag() { return std::string("--config ") + INFOPRICE_CONFIG; }

}  // namespace

TEST(Config, DefaultsAndValues) {
  const RunConfig cfg = parse(kValid);
  EXPECT_EQ(cfg.steps, 1000u);
  EXPECT_EQ(cfg.mc.n_paths, 100000u);
  EXPECT_EQ(cfg.mc.seed, 0u);
  EXPECT_EQ(cfg.params.sigma_z, 0.05);
  EXPECT_EQ(cfg.params.gamma, 0.1);
}

TEST(Config, OverridesWin) {
  ConfigOverrides o;
  o.paths = 10;
  o.steps = 20;
  o.seed = 99;
  o.antithetic = true;
  o.out_dir = "elsewhere";
  const RunConfig cfg = parse(std::string(kValid) + "[mc]\npaths = 500\nseed = 3\n", o);
  EXPECT_EQ(cfg.mc.n_paths, 10u);
  EXPECT_EQ(cfg.steps, 20u);
  EXPECT_EQ(cfg.mc.seed, 99u);
  EXPECT_TRUE(cfg.mc.antithetic);
  EXPECT_EQ(cfg.out_dir, "elsewhere");
}

TEST(Config, Rejections) {
  EXPECT_THROW(parse(std::string(kValid) + "[model]\nrho = 1\n"), ConfigError);
  EXPECT_THROW(parse(std::string(kValid) + "[extra]\nx = 1\n"), ConfigError);
  EXPECT_THROW(parse("stray = 1\n" + std::string(kValid)), ConfigError);
  EXPECT_THROW(parse("[model]\nmu = 0.05\n"), ConfigError);
  std::string bad_number = kValid;
  bad_number.replace(bad_number.find("0.1\nsigma_z"), 3, "abc");
  EXPECT_THROW(parse(bad_number), ConfigError);
  std::string negative = kValid;
  negative.replace(negative.find("gamma = 0.1"), 11, "gamma = -1");
  EXPECT_THROW(parse(negative), DomainError);
  ConfigOverrides odd;
  odd.paths = 7;
  odd.antithetic = true;
  EXPECT_THROW(parse(kValid, odd), DomainError);
  ConfigOverrides zero;
  zero.steps = 0;
  EXPECT_THROW(parse(kValid, zero), DomainError);
  EXPECT_THROW(load_run_config("/nonexistent/run.ini"), ConfigError);
}

// ---------------------------------------------------------------------------

TEST(Cli, PriceOutputs) {
  const fs::path dir = scratch("price");
  ASSERT_EQ(run_cli("price " + config_flag() + " --kind single", dir / "single.json"), 0);
  const auto single = nlohmann::json::parse(slurp(dir / "single.json"));
  EXPECT_NEAR(single["c_hat"].get<double>(), 5.0 * std::log(5.0), 1e-12);

  ASSERT_EQ(run_cli("price " + config_flag() + " --kind continuous", dir / "cont.json"), 0);
  const auto cont = nlohmann::json::parse(slurp(dir / "cont.json"));
  EXPECT_NEAR(cont["c_hat"].get<double>(), 5.0 * std::tanh(2.0), 1e-12);
  EXPECT_EQ(cont["c_bar"].get<double>(), cont["c_hat"].get<double>());
  EXPECT_EQ(cont["c_bar_bound"].get<double>(), 5.0);
}

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch("exit");
  EXPECT_EQ(run_cli("price --config /nonexistent.ini", dir / "a"), 2);
  EXPECT_EQ(run_cli("price " + config_flag() + " --kind bogus", dir / "b"), 2);
  EXPECT_EQ(run_cli("nosuchcommand", dir / "c"), 2);
  EXPECT_EQ(run_cli("simulate " + config_flag() + " --mode uninformed --charge 1 --paths 4 --out " +
                        (dir / "sim").string(),
                    dir / "d"),
            2);
  EXPECT_EQ(run_cli("subscribe " + config_flag() + " --schedule /nonexistent.csv", dir / "e"), 2);
}

TEST(Cli, RatesAndSubscribe) {
  const fs::path dir = scratch("rates");
  ASSERT_EQ(run_cli("rates " + config_flag() + " --out " + dir.string(), dir / "stdout"), 0);
  std::ifstream rates(dir / "rates.csv");
  std::string header;
  std::getline(rates, header);
  EXPECT_EQ(header, "t,c_hat_t,c_bar,ell_t");
  std::vector<std::vector<double>> rows;
  for (std::string line; std::getline(rates, line);) {
    std::vector<double> row;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  ASSERT_EQ(rows.size(), 1001u);
  EXPECT_EQ(rows.front()[1], 0.0);
  EXPECT_EQ(rows.front()[3], rows.front()[2]);
  EXPECT_EQ(rows.back()[3], -rows.back()[2]);
  EXPECT_NEAR(rows.back()[1], 2.0 * rows.back()[2], 1e-12);

  ASSERT_EQ(run_cli("subscribe " + config_flag() + " --schedule " +
                        (dir / "schedule_c_bar.csv").string(),
                    dir / "flat.json"),
            0);
  const auto flat = nlohmann::json::parse(slurp(dir / "flat.json"));
  EXPECT_EQ(flat["tau_e"].get<double>(), 0.5);
  EXPECT_EQ(flat["tau_l"].get<double>(), 0.5);
  EXPECT_EQ(flat["indifference_set"].size(), 1u);

  ASSERT_EQ(run_cli("subscribe " + config_flag() + " --schedule " +
                        (dir / "schedule_c_hat.csv").string(),
                    dir / "hat.json"),
            0);
  const auto hat = nlohmann::json::parse(slurp(dir / "hat.json"));
  EXPECT_EQ(hat["tau_e"].get<double>(), 0.0);
  EXPECT_EQ(hat["tau_l"].get<double>(), 1.0);
  EXPECT_EQ(hat["indifference_set"].size(), 1001u);
}

TEST(Cli, SimulateIsReproducible) {
  const fs::path a = scratch("sim_a");
  const fs::path b = scratch("sim_b");
  const std::string common = "simulate " + config_flag() +
                             " --mode informed --paths 200 --steps 100 --seed 4 --dump 2 --out ";
  ASSERT_EQ(run_cli(common + a.string(), a / "stdout"), 0);
  ASSERT_EQ(run_cli(common + b.string() + " --workers 3", b / "stdout"), 0);
  for (const char* f : {"summary.json", "paths/path_000000.csv", "paths/path_000001.csv",
                        "values/values_000000.csv"}) {
    ASSERT_TRUE(fs::exists(a / f)) << f;
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  const auto summary = nlohmann::json::parse(slurp(a / "summary.json"));
  for (const char* key : {"mc_mean", "std_err", "closed_form", "z_score", "n_paths"}) {
    EXPECT_TRUE(summary.contains(key)) << key;
  }
  EXPECT_EQ(summary["n_paths"].get<std::size_t>(), 200u);
}

TEST(Cli, JsonRoundTripIsIdempotent) {
  const fs::path dir = scratch("json");
  ASSERT_EQ(run_cli("rates " + config_flag() + " --steps 50 --out " + dir.string(), dir / "rates"),
            0);
  ASSERT_EQ(run_cli("simulate " + config_flag() +
                        " --mode subscribe --paths 50 --steps 50 --out " + dir.string() +
                        " --schedule " + (dir / "schedule_bump.csv").string(),
                    dir / "stdout"),
            0);
  const std::string first = slurp(dir / "summary.json");
  const auto once = nlohmann::json::parse(first);
  const auto twice = nlohmann::json::parse(once.dump(2));
  EXPECT_EQ(once, twice);
  EXPECT_EQ(once.dump(2), twice.dump(2));
  EXPECT_TRUE(once.contains("t_star"));
}

TEST(Cli, FastVerifySuite) {
  const fs::path dir = scratch("verify");
  const auto start = std::chrono::steady_clock::now();
  EXPECT_EQ(run_cli("verify " + config_flag() + " --suite fast", dir / "report.json"), 0);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(secs, 10.0);
  const auto reports = nlohmann::json::parse(slurp(dir / "report.json"));
  EXPECT_GT(reports.size(), 5u);
  for (const auto& r : reports) EXPECT_TRUE(r["passed"].get<bool>()) << r["name"];
}
