#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ppim/engine.hpp"

namespace ppim {

enum class Scenario {
  WelfareLogN,   // SB^n, median prices vs the prophet guarantee mu_B^{(n)}/2
  ProfitSqrtN,   // S^{n/2} B^{n/2}, decaying seller prices vs the simulated uniform witness
  StockLimited,  // (SB)^{n/2} with capacity K vs kappa H_n mu_B
  Balanced,      // (S^alpha B)^n vs the fractional value n * per_buyer_value
  ParetoBlowup,  // SB^n with pareto-eps values, median-quantile prices vs mu^{(n)}/2
};

Scenario parse_scenario(std::string_view name);
std::string to_string(Scenario s);

struct ExperimentConfig {
  Scenario scenario = Scenario::Balanced;
  std::vector<std::int64_t> n_values;  // empty: scenario default
  std::int64_t trials = 1000;
  std::uint64_t seed = 1;
  std::string seller_dist = "uniform:0,1";
  std::string buyer_dist = "uniform:0,1";
  int alpha = 1;
  int stock_capacity = 1;
  double decay_eps = 0.05;
  double pareto_eps = 0.5;
  unsigned workers = 0;
};

Objective scenario_objective(Scenario s);
std::vector<std::int64_t> default_n_values(Scenario s);

/// Throws std::invalid_argument: n_values must be ascending and positive,
/// trials >= 100, and the spec strings must parse.
void validate(const ExperimentConfig& cfg);

struct RatioRow {
  std::int64_t n = 0;
  double online_mean = 0.0;
  double online_std_err = 0.0;
  double online_ci95_low = 0.0;
  double online_ci95_high = 0.0;
  double offline_bound = 0.0;
  double offline_std_err = 0.0;       // nonzero only for simulated offline sides
  double ratio = 0.0;                 // offline / online when online > 0, else +inf
  double slack_adjusted_ratio = 0.0;  // profit: (offline - mu_S) / online; welfare: ratio
};

/// One row per n, deterministic given the seed.
std::vector<RatioRow> run_experiment(const ExperimentConfig& cfg);

/// Header `n,online_mean,online_ci95_low,online_ci95_high,offline_bound,ratio,slack_adjusted_ratio`
/// then one line per row; LF line endings, shortest round-trip scientific
/// notation.
std::string to_csv(const std::vector<RatioRow>& rows);

/// Writes to_csv(rows); std::runtime_error naming the path on I/O failure.
void emit_csv(const std::vector<RatioRow>& rows, const std::filesystem::path& path);

/// Least-squares slope of log(y) against log(x).
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ppim
