#include "ppim/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "ppim/benchmarks.hpp"
#include "ppim/engine.hpp"
#include "ppim/format.hpp"

namespace ppim {
namespace {

constexpr double kInvE = 1.0 / std::numbers::e;

class Checker {
 public:
  Checker(Suite suite, const VerifyOptions& options) : options_(options) {
    report_.suite = suite;
    trials_ = options.trials > 0 ? options.trials : default_trials(suite);
  }

  /// lhs <= rhs
  void at_most(std::string name, double lhs, double rhs) { add(std::move(name), rhs - lhs, true); }
  /// lhs >= rhs
  void at_least(std::string name, double lhs, double rhs) { add(std::move(name), lhs - rhs, true); }
  /// lhs > rhs
  void above(std::string name, double lhs, double rhs) { add(std::move(name), lhs - rhs, false); }
  void flag(std::string name, bool ok) { report_.checks.push_back({std::move(name), ok, ok ? 0.0 : -1.0}); }

  std::int64_t trials() const { return trials_; }
  unsigned workers() const { return options_.workers; }
  /// A fresh seed for every Monte Carlo check, in call order.
  std::uint64_t next_seed() { return RandomStream::substream(options_.seed, seeds_used_++).next_u64(); }

  VerifyReport take() { return std::move(report_); }

 private:
  void add(std::string name, double slack, bool inclusive) {
    const bool pass = inclusive ? slack >= 0.0 : slack > 0.0;
    report_.checks.push_back({std::move(name), pass, slack});
  }

  VerifyOptions options_;
  VerifyReport report_;
  std::int64_t trials_ = 0;
  std::uint64_t seeds_used_ = 0;
};

double min_over(int n, const std::function<double(int)>& f) {
  double out = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= n; ++j) out = std::min(out, f(j));
  return out;
}

void mhr_suite(Checker& c) {
  constexpr int G = 1024;
  const std::vector<Distribution> mhr = {Distribution::exponential(0.5), Distribution::exponential(1.0),
                                         Distribution::exponential(2.0), Distribution::uniform(0.0, 1.0),
                                         Distribution::uniform(1.0, 3.0), Distribution::uniform(0.0, 5.0)};
  for (const auto& d : mhr) {
    const std::string tag = d.to_string();
    const auto st = d.stats();
    c.flag(tag + " is MHR", d.check_regularity(G).mhr);

    const double lo = d.support_min();
    const double low_tail = min_over(G, [&](int j) { return 1.0 - d.cdf(lo + (st.mean - lo) * j / G) - kInvE; });
    c.at_least(tag + " survival >= 1/e up to the mean", low_tail, 0.0);

    const double high_tail = min_over(G, [&](int j) { return kInvE - (1.0 - d.cdf(2.0 * st.mean * (1.0 + double(j) / G))); });
    c.above(tag + " survival < 1/e beyond twice the mean", high_tail, 0.0);

    double order_slack = std::numeric_limits<double>::infinity();
    for (int m = 1; m <= 64; ++m) {
      order_slack = std::min(order_slack, harmonic_number(m) * st.mean - d.max_order_stat_mean(m));
    }
    c.at_least(tag + " mu^(m) <= H_m mu for m <= 64", order_slack, 0.0);

    c.at_most(tag + " std <= mean", st.std, st.mean);
  }

  const std::vector<Distribution> log_concave = {Distribution::uniform(0.0, 1.0), Distribution::uniform(0.0, 5.0),
                                                 Distribution::exponential(0.5), Distribution::exponential(1.0),
                                                 Distribution::exponential(2.0)};
  for (const auto& d : log_concave) {
    const std::string tag = d.to_string();
    c.flag(tag + " has log-concave cdf", d.check_regularity(G).log_concave_cdf);
    const double mu = d.mean();
    const double lo = d.support_min();
    const double slack = min_over(G, [&](int j) {
      const double x = lo + (mu - lo) * j / G;
      return std::numbers::e * mu * d.cdf(x) - x;
    });
    c.at_least(tag + " x <= e mu F(x) up to the mean", slack, 0.0);
  }

  const Distribution pareto = Distribution::pareto_eps(0.5);
  c.flag("pareto-eps:0.5 is not MHR", !pareto.check_regularity(G).mhr);

  const Distribution expo = Distribution::exponential(1.0);
  double worst = 0.0;
  for (int m = 1; m <= 64; ++m) {
    worst = std::max(worst, std::abs(expo.max_order_stat_mean_numeric(m) - harmonic_number(m)));
  }
  c.at_most("exp:1 quadrature E[Y^(m)] = H_m within 1e-6 for m <= 64", worst, 1e-6);

  for (const auto& d : {Distribution::uniform(0.0, 1.0), Distribution::exponential(1.0)}) {
    for (const auto& [m, k] : std::vector<std::pair<int, int>>{{10, 3}, {100, 10}, {1000, 50}}) {
      const auto est = estimate(c.trials(), c.next_seed(), c.workers(), [&, m = m, k = k](std::int64_t, const RandomStream& r) {
        RandomStream rng = r;
        std::vector<double> xs(static_cast<std::size_t>(m));
        for (auto& x : xs) x = d.sample(rng);
        std::nth_element(xs.begin(), xs.begin() + (k - 1), xs.end(), std::greater<>());
        double sum = 0.0;
        for (int i = 0; i < k; ++i) sum += xs[static_cast<std::size_t>(i)];
        return sum;
      });
      const auto st = d.stats();
      c.at_most(d.to_string() + " top-" + std::to_string(k) + " of " + std::to_string(m) + " sum (mean - 3se)",
                est.mean - 3.0 * est.std_err, top_k_sum_bound(st.mean, st.std, m, k));
    }
  }
}

void matching_suite(Checker& c) {
  const std::vector<StockCap> caps = {StockCap::of(1), StockCap::of(2), StockCap::of(3), StockCap::unbounded()};
  for (std::size_t len = 0; len <= 12; ++len) {
    for (const auto& cap : caps) {
      std::size_t mismatches = 0;
      std::size_t invalid = 0;
      for (std::uint32_t mask = 0; mask < (1u << len); ++mask) {
        std::vector<Role> roles(len);
        for (std::size_t t = 0; t < len; ++t) roles[t] = (mask >> t) & 1u ? Role::Buyer : Role::Seller;
        const AgentStream s(std::move(roles));
        const TemporalMatching m = fifo_match(s, cap);
        if (!validate_matching(m, s, cap).empty()) ++invalid;
        if (m.size() != brute_force_max_matching(s, cap)) ++mismatches;
      }
      const std::string tag = "length " + std::to_string(len) + " K=" + cap.to_string();
      c.at_most(tag + ": FIFO size = brute force (mismatching streams)", double(mismatches), 0.0);
      c.at_most(tag + ": FIFO matching valid (invalid streams)", double(invalid), 0.0);
    }
  }
}

void adaptive_suite(Checker& c) {
  constexpr int grid = 1024;
  const std::vector<std::pair<Distribution, Distribution>> pairs = {
      {Distribution::uniform(0.0, 1.0), Distribution::uniform(0.0, 1.0)},
      {Distribution::exponential(1.0), Distribution::exponential(1.0)}};
  for (const auto& [seller, buyer] : pairs) {
    const std::string tag = seller.to_string() + "/" + buyer.to_string();
    for (int alpha : {1, 2}) {
      const FractionalSolution sol = solve_fractional(seller, buyer, alpha);
      for (int m = 1; (alpha + 1) * m <= 12; ++m) {
        const double fractional_value = m * sol.per_buyer_value;
        const double slack_allowance = double((alpha + 1) * m) / grid;
        double slack = std::numeric_limits<double>::infinity();
        const auto streams = all_balanced_streams(alpha, m);
        for (const auto& s : streams) {
          DpOptions opt;
          opt.price_grid = grid;
          slack = std::min(slack, fractional_value + slack_allowance - adaptive_dp_oracle(s, seller, buyer, opt));
        }
        c.at_least(tag + " alpha=" + std::to_string(alpha) + " m=" + std::to_string(m) + ": DP <= fractional + n/" +
                       std::to_string(grid) + " on " + std::to_string(streams.size()) + " streams",
                   slack, 0.0);
      }
    }
  }
  const Distribution u = Distribution::uniform(0.0, 1.0);
  DpOptions opt;
  opt.price_grid = grid;
  const double sb = adaptive_dp_oracle(AgentStream::from_string("SB"), u, u, opt);
  c.at_most("SB uniform: |DP - 1/64| <= 2/1024", std::abs(sb - 1.0 / 64.0), 2.0 / grid);
}

void azuma_suite(Checker& c) {
  const Distribution u = Distribution::uniform(0.0, 1.0);
  for (int m : {10, 100, 1000}) {
    for (int alpha : {1, 2}) {
      const MCEstimate z = inventory_terminal(alpha, m, u, u, c.trials(), c.next_seed(), c.workers());
      c.at_most("E[Z_m] m=" + std::to_string(m) + " alpha=" + std::to_string(alpha) + " (mean - 3se) <= azuma",
                z.mean - 3.0 * z.std_err, azuma_bound(m, alpha));
    }
  }

  // Realized profit minus the decomposition evaluated at the realized Z_m
  // has mean zero: it equals (items bought - alpha m F_S(q)) (p - q).
  const std::int64_t trials = std::max<std::int64_t>(2, c.trials() / 10);
  for (int alpha : {1, 2}) {
    const int m = 100;
    const PricePolicy pol = PricePolicy::build(policy::Balanced{alpha}, u, u);
    const FractionalSolution sol = *pol.fractional();
    const AgentStream s = make_stream("(S^" + std::to_string(alpha) + " B)^" + std::to_string(m));
    TrialOptions topt;
    topt.record_steps = false;
    const MCEstimate diff = estimate(trials, c.next_seed(), c.workers(), [&](std::int64_t, const RandomStream& rng) {
      const TradeLog log = run_trial(s, pol, u, u, rng, topt);
      return profit(log) - balanced_profit_decomposition(m, alpha, sol, u, double(log.leftover_stock));
    });
    c.at_most("profit decomposition alpha=" + std::to_string(alpha) + " m=100: |bias| <= 4se",
              std::abs(diff.mean), 4.0 * diff.std_err);
  }
}

void bounds_suite(Checker& c) {
  const std::vector<std::pair<Distribution, Distribution>> pairs = {
      {Distribution::uniform(0.0, 1.0), Distribution::uniform(0.0, 1.0)},
      {Distribution::exponential(1.0), Distribution::exponential(1.0)}};
  const std::vector<std::string> patterns = {"S B^10", "(S B)^20", "S^20 B^20", "B S^5 B^5", "(S^2 B)^8 B^4"};

  for (const auto& [seller, buyer] : pairs) {
    const std::string tag = seller.to_string() + "/" + buyer.to_string();
    for (const auto& pat : patterns) {
      const AgentStream s = make_stream(pat);
      MonteCarloOptions mc;
      mc.trials = c.trials();
      mc.workers = c.workers();

      mc.seed = c.next_seed();
      mc.objective = Objective::Welfare;
      const MCEstimate w = monte_carlo(s, policy::Median{}, seller, buyer, mc);
      c.at_most(tag + " [" + pat + "] median welfare (mean - 3se) <= welfare bound", w.mean - 3.0 * w.std_err,
                welfare_upper_bound(s, seller, buyer).value);

      mc.objective = Objective::Profit;
      for (const PolicyKind& kind : std::vector<PolicyKind>{policy::Median{}, policy::FixedQuantile{4.0, 4.0}}) {
        mc.seed = c.next_seed();
        const MCEstimate r = monte_carlo(s, kind, seller, buyer, mc);
        c.at_most(tag + " [" + pat + "] " + to_string(kind) + " profit (mean - 3se) <= general bound",
                  r.mean - 3.0 * r.std_err, profit_upper_bound_general(s, buyer).value);
      }

      for (int K : {1, 2, 3}) {
        mc.stock_cap = StockCap::of(K);
        for (const PolicyKind& kind : std::vector<PolicyKind>{policy::StockLimited{K}, policy::FixedQuantile{4.0, 4.0}}) {
          mc.seed = c.next_seed();
          const MCEstimate r = monte_carlo(s, kind, seller, buyer, mc);
          c.at_most(tag + " [" + pat + "] " + to_string(kind) + " K=" + std::to_string(K) +
                        " profit (mean - 3se) <= stocked bound",
                    r.mean - 3.0 * r.std_err, profit_upper_bound_stocked(s, mc.stock_cap, buyer).value);
        }
      }
      mc.stock_cap = StockCap::unbounded();
    }

    // Median is 4-competitive for welfare on 1-balanced streams.
    RandomStream stream_rng(c.next_seed());
    for (int i = 0; i < 20; ++i) {
      const AgentStream s = random_balanced_stream(1, 500, stream_rng);
      MonteCarloOptions mc;
      mc.trials = c.trials();
      mc.workers = c.workers();
      mc.seed = c.next_seed();
      mc.objective = Objective::Welfare;
      const MCEstimate w = monte_carlo(s, policy::Median{}, seller, buyer, mc);
      const double total = double(s.sellers()) * seller.mean() + double(s.buyers()) * buyer.mean();
      c.at_least(tag + " balanced stream " + std::to_string(i) + ": 4 x median welfare >= total - 3se",
                 4.0 * w.mean, total - 3.0 * 4.0 * w.std_err);
    }

    for (int alpha : {1, 2, 3}) {
      const FractionalSolution sol = solve_fractional(seller, buyer, alpha);
      for (const auto& chk : certify_bounds(sol, seller, buyer, alpha, 100).checks) {
        c.at_least(tag + " alpha=" + std::to_string(alpha) + " certificate " + chk.name, chk.slack, 0.0);
      }
    }
  }
}

}  // namespace

Suite parse_suite(std::string_view name) {
  if (name == "mhr") return Suite::Mhr;
  if (name == "matching") return Suite::Matching;
  if (name == "adaptive") return Suite::Adaptive;
  if (name == "azuma") return Suite::Azuma;
  if (name == "bounds") return Suite::Bounds;
  throw std::invalid_argument("unknown suite '" + std::string(name) + "' (mhr|matching|adaptive|azuma|bounds)");
}

std::string to_string(Suite s) {
  switch (s) {
    case Suite::Mhr: return "mhr";
    case Suite::Matching: return "matching";
    case Suite::Adaptive: return "adaptive";
    case Suite::Azuma: return "azuma";
    case Suite::Bounds: return "bounds";
  }
  return "?";
}

bool VerifyReport::all_pass() const { return failures() == 0; }

std::size_t VerifyReport::failures() const {
  return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.pass; }));
}

std::int64_t default_trials(Suite suite) {
  switch (suite) {
    case Suite::Mhr: return 20000;
    case Suite::Azuma: return 100000;
    case Suite::Bounds: return 2000;
    case Suite::Matching:
    case Suite::Adaptive: return 0;
  }
  return 0;
}

VerifyReport run_suite(Suite suite, const VerifyOptions& options) {
  Checker c(suite, options);
  switch (suite) {
    case Suite::Mhr: mhr_suite(c); break;
    case Suite::Matching: matching_suite(c); break;
    case Suite::Adaptive: adaptive_suite(c); break;
    case Suite::Azuma: azuma_suite(c); break;
    case Suite::Bounds: bounds_suite(c); break;
  }
  return c.take();
}

}  // namespace ppim
