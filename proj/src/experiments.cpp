#include "ppim/experiments.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "ppim/benchmarks.hpp"
#include "ppim/format.hpp"

namespace ppim {
namespace {

std::vector<std::int64_t> powers_of_two(int lo, int hi) {
  std::vector<std::int64_t> out;
  for (int k = lo; k <= hi; ++k) out.push_back(std::int64_t{1} << k);
  return out;
}

double safe_ratio(double num, double den) {
  return den > 0.0 ? num / den : std::numeric_limits<double>::infinity();
}

// Seeds for the online and offline simulations of row n.
std::uint64_t row_seed(std::uint64_t seed, std::int64_t n, std::uint64_t lane) {
  return RandomStream::substream(seed, static_cast<std::uint64_t>(n) * 2 + lane).next_u64();
}

const Uniform& require_uniform(const Distribution& d, std::string_view who) {
  const auto* u = std::get_if<Uniform>(&d.kind());
  if (!u) throw std::invalid_argument(std::string(who) + " must be uniform for the profit-sqrt-n witness");
  return *u;
}

}  // namespace

Scenario parse_scenario(std::string_view name) {
  if (name == "welfare-log-n") return Scenario::WelfareLogN;
  if (name == "profit-sqrt-n") return Scenario::ProfitSqrtN;
  if (name == "stock-limited") return Scenario::StockLimited;
  if (name == "balanced") return Scenario::Balanced;
  if (name == "pareto-blowup") return Scenario::ParetoBlowup;
  throw std::invalid_argument("unknown scenario '" + std::string(name) + "'");
}

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::WelfareLogN: return "welfare-log-n";
    case Scenario::ProfitSqrtN: return "profit-sqrt-n";
    case Scenario::StockLimited: return "stock-limited";
    case Scenario::Balanced: return "balanced";
    case Scenario::ParetoBlowup: return "pareto-blowup";
  }
  return "?";
}

Objective scenario_objective(Scenario s) {
  return (s == Scenario::WelfareLogN || s == Scenario::ParetoBlowup) ? Objective::Welfare : Objective::Profit;
}

std::vector<std::int64_t> default_n_values(Scenario s) {
  switch (s) {
    case Scenario::WelfareLogN: return powers_of_two(4, 14);
    case Scenario::ProfitSqrtN: return powers_of_two(8, 16);
    case Scenario::StockLimited: return powers_of_two(4, 12);
    case Scenario::Balanced: return {100, 1000, 10000};
    case Scenario::ParetoBlowup: return powers_of_two(4, 14);
  }
  return {};
}

void validate(const ExperimentConfig& cfg) {
  for (std::size_t i = 0; i < cfg.n_values.size(); ++i) {
    if (cfg.n_values[i] < 1) throw std::invalid_argument("n_values must be positive");
    if (i > 0 && cfg.n_values[i] <= cfg.n_values[i - 1]) {
      throw std::invalid_argument("n_values must be sorted ascending without repeats");
    }
  }
  if (cfg.trials < 100) throw std::invalid_argument("ratio experiments need trials >= 100");
  if (cfg.alpha < 1) throw std::invalid_argument("alpha must be >= 1");
  if (cfg.stock_capacity < 1) throw std::invalid_argument("stock capacity K must be >= 1");
  parse_distribution(cfg.seller_dist);
  parse_distribution(cfg.buyer_dist);
}

std::vector<RatioRow> run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const std::vector<std::int64_t> ns = cfg.n_values.empty() ? default_n_values(cfg.scenario) : cfg.n_values;

  Distribution seller = parse_distribution(cfg.seller_dist);
  Distribution buyer = parse_distribution(cfg.buyer_dist);
  if (cfg.scenario == Scenario::ParetoBlowup) {
    seller = buyer = Distribution::pareto_eps(cfg.pareto_eps);
  }

  // Build the online policy once; its construction enforces the
  // regularity preconditions of each mechanism.
  PolicyKind online_kind;
  switch (cfg.scenario) {
    case Scenario::WelfareLogN: online_kind = policy::Median{}; break;
    case Scenario::ProfitSqrtN: online_kind = policy::DecayingSeller{cfg.decay_eps}; break;
    case Scenario::StockLimited: online_kind = policy::StockLimited{cfg.stock_capacity}; break;
    case Scenario::Balanced: online_kind = policy::Balanced{cfg.alpha}; break;
    case Scenario::ParetoBlowup: online_kind = policy::FixedQuantile{2.0, 2.0}; break;
  }
  const PricePolicy online = PricePolicy::build(online_kind, seller, buyer);

  std::vector<RatioRow> rows;
  rows.reserve(ns.size());
  for (const std::int64_t n : ns) {
    MonteCarloOptions mc;
    mc.trials = cfg.trials;
    mc.seed = row_seed(cfg.seed, n, 0);
    mc.objective = scenario_objective(cfg.scenario);
    mc.workers = cfg.workers;

    AgentStream stream;
    double offline = 0.0;
    double offline_se = 0.0;
    switch (cfg.scenario) {
      case Scenario::WelfareLogN:
      case Scenario::ParetoBlowup:
        stream = make_stream("S B^" + std::to_string(n));
        offline = prophet_price(buyer, static_cast<int>(n));
        break;
      case Scenario::ProfitSqrtN: {
        if (n % 2 != 0) throw std::invalid_argument("profit-sqrt-n needs even n");
        stream = make_stream("S^" + std::to_string(n / 2) + " B^" + std::to_string(n / 2));
        const Uniform& us = require_uniform(seller, "seller distribution");
        const Uniform& ub = require_uniform(buyer, "buyer distribution");
        if (us.lo != ub.lo || us.hi != ub.hi) {
          throw std::invalid_argument("profit-sqrt-n witness needs identical seller and buyer uniforms");
        }
        const OfflinePrices witness = uniform_offline_policy(us.lo, us.hi);
        MonteCarloOptions off = mc;
        off.seed = row_seed(cfg.seed, n, 1);
        const MCEstimate witness_est =
            monte_carlo(stream, policy::FixedPrice{witness.q, witness.p}, seller, buyer, off);
        offline = witness_est.mean;
        offline_se = witness_est.std_err;
        break;
      }
      case Scenario::StockLimited:
        if (n % 2 != 0) throw std::invalid_argument("stock-limited needs even n");
        stream = make_stream("(S B)^" + std::to_string(n / 2));
        mc.stock_cap = StockCap::of(cfg.stock_capacity);
        offline = profit_upper_bound_stocked(stream, mc.stock_cap, buyer).value;
        break;
      case Scenario::Balanced:
        stream = make_stream("(S^" + std::to_string(cfg.alpha) + " B)^" + std::to_string(n));
        offline = static_cast<double>(n) * online.fractional()->per_buyer_value;
        break;
    }

    const MCEstimate est = monte_carlo(stream, online, seller, buyer, mc);
    RatioRow row;
    row.n = n;
    row.online_mean = est.mean;
    row.online_std_err = est.std_err;
    row.online_ci95_low = est.ci95_low;
    row.online_ci95_high = est.ci95_high;
    row.offline_bound = offline;
    row.offline_std_err = offline_se;
    row.ratio = safe_ratio(offline, est.mean);
    row.slack_adjusted_ratio = mc.objective == Objective::Profit
                                   ? safe_ratio(offline - seller.mean(), est.mean)
                                   : row.ratio;
    rows.push_back(row);
  }
  return rows;
}

std::string to_csv(const std::vector<RatioRow>& rows) {
  std::string out = "n,online_mean,online_ci95_low,online_ci95_high,offline_bound,ratio,slack_adjusted_ratio\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n);
    for (double v : {r.online_mean, r.online_ci95_low, r.online_ci95_high, r.offline_bound, r.ratio,
                     r.slack_adjusted_ratio}) {
      out += ',';
      out += format_scientific(v);
    }
    out += '\n';
  }
  return out;
}

void emit_csv(const std::vector<RatioRow>& rows, const std::filesystem::path& path) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  const std::string text = to_csv(rows);
  file.write(text.data(), static_cast<std::streamsize>(text.size()));
  file.close();
  if (!file) throw std::runtime_error("failed writing '" + path.string() + "'");
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("log_log_slope needs >= 2 paired points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) throw std::domain_error("log_log_slope needs positive data");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace ppim
