#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ppim/distributions.hpp"
#include "ppim/matching.hpp"
#include "ppim/policies.hpp"
#include "ppim/random.hpp"
#include "ppim/streams.hpp"

namespace ppim {

struct TradeStep {
  Role role;
  PolicyAction action;
  double value;
  bool traded;
  long long stock_after;
};

struct TradeLog {
  std::vector<TradeStep> steps;  // empty when step recording is off
  long long items_bought = 0;
  long long items_sold = 0;
  double spend = 0.0;
  double income = 0.0;
  long long leftover_stock = 0;
  double kept_seller_value = 0.0;    // sellers who did not trade
  double traded_buyer_value = 0.0;   // buyers who did trade
};

/// income - spend.
double profit(const TradeLog& log);

/// Values of sellers who kept their item plus values of buyers who bought.
double welfare(const TradeLog& log);

/// Same as welfare(log) but recomputed from the recorded steps.
double welfare_from_steps(std::span<const TradeStep> steps);

/// How agent values are tied to the uniform stream.
enum class DrawIndexing {
  /// The j-th seller and the j-th buyer always receive the j-th draw of a
  /// seller lane and a buyer lane. Two streams with the same role counts
  /// and seed see identical seller values and identical buyer values.
  ByRoleOrdinal,
  /// Position t receives the t-th draw whatever its role.
  ByPosition,
};

struct TrialOptions {
  StockCap stock_cap = StockCap::unbounded();
  DrawIndexing draws = DrawIndexing::ByRoleOrdinal;
  bool record_steps = true;
};

/// One execution of `policy` (taken by value: a fresh replica) against `s`.
/// A seller trades iff the policy posts q, X <= q and the stock is below
/// the cap; a buyer trades iff X >= p and stock >= 1.
TradeLog run_trial(const AgentStream& s, PricePolicy policy, const Distribution& seller,
                   const Distribution& buyer, const RandomStream& rng, const TrialOptions& options = {});

struct MCEstimate {
  double mean = 0.0;
  double std_err = 0.0;
  std::int64_t trials = 0;
  double ci95_low = 0.0;
  double ci95_high = 0.0;
};

/// mean +- 1.96 std_err over per-trial samples, summed with Neumaier
/// compensation in index order.
MCEstimate summarize(std::span<const double> samples);

/// Runs `trial(i, substream(seed, i))` for i in [0, trials) on `workers`
/// threads (0: hardware concurrency) and reduces in index order, so the
/// result does not depend on the worker count.
MCEstimate estimate(std::int64_t trials, std::uint64_t seed, unsigned workers,
                    const std::function<double(std::int64_t, const RandomStream&)>& trial);

enum class Objective { Profit, Welfare };

struct MonteCarloOptions {
  std::int64_t trials = 1000;
  std::uint64_t seed = 1;
  StockCap stock_cap = StockCap::unbounded();
  Objective objective = Objective::Profit;
  DrawIndexing draws = DrawIndexing::ByRoleOrdinal;
  unsigned workers = 0;
};

/// Requires trials >= 2.
MCEstimate monte_carlo(const AgentStream& s, const PolicyKind& kind, const Distribution& seller,
                       const Distribution& buyer, const MonteCarloOptions& options);

/// Same with an already built policy (replicated per trial).
MCEstimate monte_carlo(const AgentStream& s, const PricePolicy& policy, const Distribution& seller,
                       const Distribution& buyer, const MonteCarloOptions& options);

/// Expected leftover stock after running the Balanced(alpha) policy on
/// (S^alpha B)^m. m = 0 gives an exact zero estimate.
MCEstimate inventory_terminal(int alpha, int m, const Distribution& seller, const Distribution& buyer,
                              std::int64_t trials, std::uint64_t seed, unsigned workers = 0);

/// Expected welfare of a single seller (credited with mu and a guaranteed
/// sale) followed by buyers facing `prices`:
/// mu + sum_t prod_{j<t} F(p_j) * lambda(p_t), lambda(y) = E[X; X >= y].
double welfare_series(std::span<const double> prices, const Distribution& dist);

}  // namespace ppim
