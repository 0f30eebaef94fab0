// ppim: posted-price intermediation simulator.
#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ppim/benchmarks.hpp"
#include "ppim/config.hpp"
#include "ppim/engine.hpp"
#include "ppim/experiments.hpp"
#include "ppim/format.hpp"
#include "ppim/fractional.hpp"
#include "ppim/verify.hpp"

namespace {

using namespace ppim;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  T v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError("config key '" + key + "': invalid number '" + text + "'");
  }
  return v;
}

std::vector<std::int64_t> parse_int_list(const std::string& key, const std::string& text) {
  std::vector<std::int64_t> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    std::string tok = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    tok.erase(0, tok.find_first_not_of(" \t"));
    tok.erase(tok.find_last_not_of(" \t") + 1);
    out.push_back(parse_number<std::int64_t>(key, tok));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

/// Applies config values onto bound variables; unknown keys are errors.
class ConfigBinder {
 public:
  explicit ConfigBinder(const std::string& path) {
    if (!path.empty()) config_ = Config::load(path);
  }

  void string(const std::string& key, std::string& target) {
    known_.insert(key);
    if (auto v = lookup(key)) target = *v;
  }
  template <class T>
  void number(const std::string& key, T& target) {
    known_.insert(key);
    if (auto v = lookup(key)) target = parse_number<T>(key, *v);
  }
  void int_list(const std::string& key, std::vector<std::int64_t>& target) {
    known_.insert(key);
    if (auto v = lookup(key)) target = parse_int_list(key, *v);
  }

  void finish() const {
    if (!config_) return;
    for (const auto& [key, value] : config_->values()) {
      if (!known_.count(key)) throw UsageError("unknown config key '" + key + "'");
    }
  }

 private:
  std::optional<std::string> lookup(const std::string& key) const {
    return config_ ? config_->get(key) : std::nullopt;
  }

  std::optional<Config> config_;
  std::set<std::string> known_;
};

struct SimulateArgs {
  std::string stream;
  std::string policy;
  std::string seller_dist = "uniform:0,1";
  std::string buyer_dist = "uniform:0,1";
  std::int64_t trials = 1000;
  std::uint64_t seed = 1;
  std::string stock_cap = "inf";
  std::string objective = "profit";
  std::string trace;
  unsigned workers = 0;
};

StockCap parse_stock_cap(const std::string& text) {
  if (text == "inf") return StockCap::unbounded();
  const auto k = parse_number<long long>("stock_cap", text);
  if (k < 1) throw UsageError("stock cap must be a positive integer or 'inf'");
  return StockCap::of(k);
}

Objective parse_objective(const std::string& text) {
  if (text == "profit") return Objective::Profit;
  if (text == "welfare") return Objective::Welfare;
  throw UsageError("objective must be 'profit' or 'welfare', got '" + text + "'");
}

void write_trace(const std::string& path, const TradeLog& log) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "t,role,price,value,traded,stock\n";
  for (std::size_t t = 0; t < log.steps.size(); ++t) {
    const auto& st = log.steps[t];
    out << t << ',' << role_char(st.role) << ',' << (st.action.post ? format_scientific(st.action.price) : "")
        << ',' << format_scientific(st.value) << ',' << (st.traded ? 1 : 0) << ',' << st.stock_after << '\n';
  }
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

int run_simulate(const SimulateArgs& a) {
  if (a.stream.empty() || a.policy.empty()) throw UsageError("simulate needs --stream and --policy");
  const AgentStream stream = make_stream(a.stream);
  const Distribution seller = parse_distribution(a.seller_dist);
  const Distribution buyer = parse_distribution(a.buyer_dist);
  const PricePolicy policy = PricePolicy::build(parse_policy(a.policy), seller, buyer);

  MonteCarloOptions mc;
  mc.trials = a.trials;
  mc.seed = a.seed;
  mc.stock_cap = parse_stock_cap(a.stock_cap);
  mc.objective = parse_objective(a.objective);
  mc.workers = a.workers;
  if (mc.trials < 2) throw UsageError("simulate needs --trials >= 2");
  const MCEstimate est = monte_carlo(stream, policy, seller, buyer, mc);

  std::cout << "simulate stream=\"" << a.stream << "\" policy=" << a.policy << " seller=" << seller.to_string()
            << " buyer=" << buyer.to_string() << " objective=" << a.objective << " stock_cap="
            << mc.stock_cap.to_string() << " trials=" << est.trials << " seed=" << a.seed
            << " mean=" << format_scientific(est.mean) << " std_err=" << format_scientific(est.std_err)
            << " ci95_low=" << format_scientific(est.ci95_low) << " ci95_high=" << format_scientific(est.ci95_high)
            << '\n';

  if (!a.trace.empty()) {
    TrialOptions topt;
    topt.stock_cap = mc.stock_cap;
    write_trace(a.trace, run_trial(stream, policy, seller, buyer, RandomStream::substream(a.seed, 0), topt));
  }
  return kExitOk;
}

struct FractionalArgs {
  int alpha = 1;
  std::string seller_dist = "uniform:0,1";
  std::string buyer_dist = "uniform:0,1";
  int m = 100;
  FractionalOptions options;
};

int run_solve_fractional(const FractionalArgs& a) {
  const Distribution seller = parse_distribution(a.seller_dist);
  const Distribution buyer = parse_distribution(a.buyer_dist);
  if (a.alpha < 1) throw UsageError("--alpha must be >= 1");
  const FractionalSolution sol = solve_fractional(seller, buyer, a.alpha, a.options);
  const CertificateReport cert = certify_bounds(sol, seller, buyer, a.alpha, a.m);

  std::cout << "solve-fractional alpha=" << a.alpha << " seller=" << seller.to_string()
            << " buyer=" << buyer.to_string() << " p=" << format_number(sol.p) << " q=" << format_number(sol.q)
            << " per_buyer_value=" << format_number(sol.per_buyer_value)
            << " constraint_residual=" << format_scientific(sol.constraint_residual)
            << " stationarity_residual=" << format_scientific(sol.stationarity_residual)
            << " multiplier=" << format_number(sol.multiplier) << " trades=" << (sol.trades ? "true" : "false")
            << " interior=" << (sol.interior ? "true" : "false")
            << " stationary=" << (sol.stationary ? "true" : "false");
  for (const auto& chk : cert.checks) {
    std::cout << ' ' << chk.name << '=' << (chk.pass ? "pass" : "fail") << ':' << format_scientific(chk.slack);
  }
  std::cout << '\n';
  return cert.all_pass() && sol.stationary ? kExitOk : kExitCheckFailed;
}

struct ExperimentArgs {
  std::string scenario;
  std::vector<std::int64_t> n_values;
  std::int64_t trials = 1000;
  std::uint64_t seed = 1;
  std::string seller_dist = "uniform:0,1";
  std::string buyer_dist = "uniform:0,1";
  int alpha = 1;
  int K = 1;
  double eps = 0.05;
  double pareto_eps = 0.5;
  unsigned workers = 0;
  std::string output;
};

int run_experiment_cmd(const ExperimentArgs& a) {
  if (a.scenario.empty()) throw UsageError("experiment needs a scenario");
  ExperimentConfig cfg;
  cfg.scenario = parse_scenario(a.scenario);
  cfg.n_values = a.n_values;
  cfg.trials = a.trials;
  cfg.seed = a.seed;
  cfg.seller_dist = a.seller_dist;
  cfg.buyer_dist = a.buyer_dist;
  cfg.alpha = a.alpha;
  cfg.stock_capacity = a.K;
  cfg.decay_eps = a.eps;
  cfg.pareto_eps = a.pareto_eps;
  cfg.workers = a.workers;
  const auto rows = run_experiment(cfg);
  if (a.output.empty()) {
    std::cout << to_csv(rows);
  } else {
    emit_csv(rows, a.output);
    std::cout << "experiment " << a.scenario << " rows=" << rows.size() << " output=" << a.output << '\n';
  }
  return kExitOk;
}

struct VerifyArgs {
  std::string suite;
  std::int64_t trials = 0;
  std::uint64_t seed = 1;
  unsigned workers = 0;
};

int run_verify(const VerifyArgs& a) {
  if (a.suite.empty()) throw UsageError("verify needs a suite");
  VerifyOptions opt;
  opt.trials = a.trials;
  opt.seed = a.seed;
  opt.workers = a.workers;
  const VerifyReport report = run_suite(parse_suite(a.suite), opt);
  for (const auto& chk : report.checks) {
    std::cout << (chk.pass ? "PASS " : "FAIL ") << chk.name << " slack=" << format_scientific(chk.slack) << '\n';
  }
  std::cout << "verify " << a.suite << ": " << report.checks.size() - report.failures() << '/'
            << report.checks.size() << " passed\n";
  return report.all_pass() ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Posted-price intermediation simulator"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "flat key = value file; its values override flags")
      ->check(CLI::ExistingFile);

  std::uint64_t default_seed = 1;
  app.add_option("--seed", default_seed, "default seed")->envname("PPIM_SEED");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of a policy on a stream");
  simulate->add_option("--stream", sim.stream, "stream pattern, e.g. \"(S B)^10\"");
  simulate->add_option("--policy", sim.policy, "median | fixed:q,p | quantile:c1,c2 | decay:eps | stock:K | balanced:alpha");
  simulate->add_option("--seller-dist", sim.seller_dist, "seller distribution")->capture_default_str();
  simulate->add_option("--buyer-dist", sim.buyer_dist, "buyer distribution")->capture_default_str();
  simulate->add_option("--trials", sim.trials)->capture_default_str();
  auto* sim_seed = simulate->add_option("--seed", sim.seed);
  simulate->add_option("--stock-cap", sim.stock_cap, "positive integer or inf")->capture_default_str();
  simulate->add_option("--objective", sim.objective, "profit | welfare")->capture_default_str();
  simulate->add_option("--trace", sim.trace, "write the first trial's steps as CSV");
  simulate->add_option("--workers", sim.workers, "threads, 0 = all cores");

  FractionalArgs frac;
  auto* solve = app.add_subcommand("solve-fractional", "optimal prices of the fractional program");
  solve->add_option("--alpha", frac.alpha)->capture_default_str();
  solve->add_option("--seller-dist", frac.seller_dist)->capture_default_str();
  solve->add_option("--buyer-dist", frac.buyer_dist)->capture_default_str();
  solve->add_option("--m", frac.m, "buyer count for the certificate bounds")->capture_default_str();
  solve->add_option("--grid-points", frac.options.grid_points)->capture_default_str();
  solve->add_option("--price-tolerance", frac.options.price_tolerance)->capture_default_str();
  solve->add_option("--constraint-tolerance", frac.options.constraint_tolerance)->capture_default_str();
  solve->add_option("--stationarity-tolerance", frac.options.stationarity_tolerance)->capture_default_str();

  ExperimentArgs exp;
  auto* experiment = app.add_subcommand("experiment", "competitive-ratio scaling experiment");
  experiment->add_option("scenario", exp.scenario, "welfare-log-n | profit-sqrt-n | stock-limited | balanced | pareto-blowup");
  experiment->add_option("--n-values", exp.n_values, "ascending sizes")->delimiter(',');
  experiment->add_option("--trials", exp.trials)->capture_default_str();
  auto* exp_seed = experiment->add_option("--seed", exp.seed);
  experiment->add_option("--seller-dist", exp.seller_dist)->capture_default_str();
  experiment->add_option("--buyer-dist", exp.buyer_dist)->capture_default_str();
  experiment->add_option("--alpha", exp.alpha)->capture_default_str();
  experiment->add_option("--K", exp.K, "stock capacity")->capture_default_str();
  experiment->add_option("--eps", exp.eps, "decaying seller price exponent offset")->capture_default_str();
  experiment->add_option("--pareto-eps", exp.pareto_eps)->capture_default_str();
  experiment->add_option("--workers", exp.workers);
  experiment->add_option("--output", exp.output, "CSV path (default: stdout)");

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "run an invariant suite");
  verify->add_option("suite,--suite", ver.suite, "mhr | matching | adaptive | azuma | bounds");
  verify->add_option("--trials", ver.trials, "Monte Carlo trials, 0 = suite default");
  auto* ver_seed = verify->add_option("--seed", ver.seed);
  verify->add_option("--workers", ver.workers);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (sim_seed->count() == 0) sim.seed = default_seed;
    if (exp_seed->count() == 0) exp.seed = default_seed;
    if (ver_seed->count() == 0) ver.seed = default_seed;

    ConfigBinder cfg(config_path);
    if (simulate->parsed()) {
      cfg.string("stream", sim.stream);
      cfg.string("policy", sim.policy);
      cfg.string("seller_dist", sim.seller_dist);
      cfg.string("buyer_dist", sim.buyer_dist);
      cfg.number("trials", sim.trials);
      cfg.number("seed", sim.seed);
      cfg.string("stock_cap", sim.stock_cap);
      cfg.string("objective", sim.objective);
      cfg.string("trace", sim.trace);
      cfg.number("workers", sim.workers);
      cfg.finish();
      return run_simulate(sim);
    }
    if (solve->parsed()) {
      cfg.number("alpha", frac.alpha);
      cfg.string("seller_dist", frac.seller_dist);
      cfg.string("buyer_dist", frac.buyer_dist);
      cfg.number("m", frac.m);
      cfg.number("grid_points", frac.options.grid_points);
      cfg.number("price_tolerance", frac.options.price_tolerance);
      cfg.number("constraint_tolerance", frac.options.constraint_tolerance);
      cfg.number("stationarity_tolerance", frac.options.stationarity_tolerance);
      cfg.finish();
      return run_solve_fractional(frac);
    }
    if (experiment->parsed()) {
      cfg.string("scenario", exp.scenario);
      cfg.int_list("n_values", exp.n_values);
      cfg.number("trials", exp.trials);
      cfg.number("seed", exp.seed);
      cfg.string("seller_dist", exp.seller_dist);
      cfg.string("buyer_dist", exp.buyer_dist);
      cfg.number("alpha", exp.alpha);
      cfg.number("K", exp.K);
      cfg.number("eps", exp.eps);
      cfg.number("pareto_eps", exp.pareto_eps);
      cfg.number("workers", exp.workers);
      cfg.string("output", exp.output);
      cfg.finish();
      return run_experiment_cmd(exp);
    }
    if (verify->parsed()) {
      cfg.string("suite", ver.suite);
      cfg.number("trials", ver.trials);
      cfg.number("seed", ver.seed);
      cfg.number("workers", ver.workers);
      cfg.finish();
      return run_verify(ver);
    }
  } catch (const std::logic_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  return kExitUsage;
}
