#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ppim/benchmarks.hpp"
#include "ppim/experiments.hpp"

using namespace ppim;
using doctest::Approx;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ExperimentConfig small(Scenario s, std::vector<std::int64_t> ns) {
  ExperimentConfig cfg;
  cfg.scenario = s;
  cfg.n_values = std::move(ns);
  cfg.trials = 200;
  cfg.seed = 11;
  return cfg;
}

const char* const kHeader = "n,online_mean,online_ci95_low,online_ci95_high,offline_bound,ratio,slack_adjusted_ratio";

}  // namespace

TEST_CASE("scenario names round trip") {
  for (const char* name : {"welfare-log-n", "profit-sqrt-n", "stock-limited", "balanced", "pareto-blowup"}) {
    CHECK(to_string(parse_scenario(name)) == name);
  }
  CHECK_THROWS_AS(parse_scenario("fast"), std::invalid_argument);
  CHECK(scenario_objective(Scenario::WelfareLogN) == Objective::Welfare);
  CHECK(scenario_objective(Scenario::ParetoBlowup) == Objective::Welfare);
  CHECK(scenario_objective(Scenario::Balanced) == Objective::Profit);
  CHECK(default_n_values(Scenario::Balanced) == std::vector<std::int64_t>{100, 1000, 10000});
}

TEST_CASE("validate rejects bad configurations") {
  ExperimentConfig ok = small(Scenario::Balanced, {10, 20});
  CHECK_NOTHROW(validate(ok));
  ExperimentConfig c = ok;
  c.n_values = {20, 10};
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.n_values = {10, 10};
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.n_values = {0, 10};
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = ok;
  c.trials = 99;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = ok;
  c.alpha = 0;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = ok;
  c.stock_capacity = 0;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = ok;
  c.seller_dist = "gauss:0,1";
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
}

TEST_CASE("rows are internally consistent") {
  for (const Scenario s : {Scenario::WelfareLogN, Scenario::ProfitSqrtN, Scenario::StockLimited, Scenario::Balanced,
                           Scenario::ParetoBlowup}) {
    CAPTURE(to_string(s));
    const auto rows = run_experiment(small(s, {16, 32}));
    REQUIRE(rows.size() == 2);
    for (const RatioRow& r : rows) {
      CHECK(r.online_ci95_low == Approx(r.online_mean - 1.96 * r.online_std_err));
      CHECK(r.online_ci95_high == Approx(r.online_mean + 1.96 * r.online_std_err));
      if (r.online_mean > 0.0) CHECK(r.ratio == Approx(r.offline_bound / r.online_mean));
      if (scenario_objective(s) == Objective::Welfare) CHECK(r.slack_adjusted_ratio == r.ratio);
    }
  }
}

TEST_CASE("offline bounds follow their definitions") {
  const Distribution unit = Distribution::uniform(0.0, 1.0);
  const auto welfare = run_experiment(small(Scenario::WelfareLogN, {4}));
  CHECK(welfare[0].offline_bound == Approx(0.4));  // E[max of 4 uniforms] / 2

  const auto balanced = run_experiment(small(Scenario::Balanced, {10}));
  CHECK(balanced[0].offline_bound == Approx(10 * 0.125).epsilon(1e-6));
  CHECK(balanced[0].slack_adjusted_ratio == Approx((balanced[0].offline_bound - 0.5) / balanced[0].online_mean));

  ExperimentConfig st = small(Scenario::StockLimited, {8});
  st.stock_capacity = 2;
  const auto stocked = run_experiment(st);
  CHECK(stocked[0].offline_bound ==
        Approx(profit_upper_bound_stocked(make_stream("(S B)^4"), StockCap::of(2), unit).value));
}

TEST_CASE("scenario preconditions") {
  CHECK_THROWS_AS(run_experiment(small(Scenario::ProfitSqrtN, {15})), std::invalid_argument);
  CHECK_THROWS_AS(run_experiment(small(Scenario::StockLimited, {15})), std::invalid_argument);
  ExperimentConfig c = small(Scenario::ProfitSqrtN, {16});
  c.seller_dist = "exp:1";
  c.buyer_dist = "exp:1";
  CHECK_THROWS_AS(run_experiment(c), std::invalid_argument);
  c.seller_dist = "uniform:0,1";
  c.buyer_dist = "uniform:0,2";
  CHECK_THROWS_AS(run_experiment(c), std::invalid_argument);
  ExperimentConfig w = small(Scenario::WelfareLogN, {16});
  w.buyer_dist = "pareto-eps:0.5";
  CHECK_THROWS_AS(run_experiment(w), RegularityError);
}

TEST_CASE("csv layout") {
  CHECK(to_csv({}) == std::string(kHeader) + "\n");
  RatioRow r;
  r.n = 7;
  r.online_mean = 0.5;
  r.online_ci95_low = 0.25;
  r.online_ci95_high = 0.75;
  r.offline_bound = 1.0;
  r.ratio = 2.0;
  r.slack_adjusted_ratio = 1.0;
  const std::string csv = to_csv({r});
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  CHECK(csv.find('\r') == std::string::npos);
  CHECK(csv.substr(csv.find('\n') + 1).rfind("7,", 0) == 0);
}

TEST_CASE("reruns are byte-identical") {
  const auto dir = std::filesystem::temp_directory_path() / "ppim_experiment_test";
  std::filesystem::create_directories(dir);
  ExperimentConfig cfg = small(Scenario::Balanced, {10, 40});
  emit_csv(run_experiment(cfg), dir / "a.csv");
  cfg.workers = 3;
  emit_csv(run_experiment(cfg), dir / "b.csv");
  const std::string a = slurp(dir / "a.csv");
  CHECK(a == slurp(dir / "b.csv"));
  CHECK(a.rfind(kHeader, 0) == 0);
  cfg.seed = 12;
  emit_csv(run_experiment(cfg), dir / "c.csv");
  CHECK(a != slurp(dir / "c.csv"));

  emit_csv({}, dir / "empty.csv");
  CHECK(slurp(dir / "empty.csv") == std::string(kHeader) + "\n");

  const auto bad = dir / "missing" / "out.csv";
  try {
    emit_csv({}, bad);
    FAIL("expected an I/O error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find(bad.string()) != std::string::npos);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("log_log_slope") {
  CHECK(log_log_slope({1, 2, 4, 8}, {3, 6, 12, 24}) == Approx(1.0));
  CHECK(log_log_slope({1, 4, 16}, {1, 2, 4}) == Approx(0.5));
  CHECK(log_log_slope({1, 10}, {5, 5}) == Approx(0.0));
  CHECK_THROWS_AS(log_log_slope({1}, {1}), std::invalid_argument);
  CHECK_THROWS_AS(log_log_slope({1, 2}, {1, 0}), std::domain_error);
}
