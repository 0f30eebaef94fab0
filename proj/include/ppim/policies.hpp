#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "ppim/distributions.hpp"
#include "ppim/fractional.hpp"
#include "ppim/streams.hpp"

namespace ppim {

namespace policy {

/// Median of each side's distribution.
struct Median {};
/// Constant seller price q and buyer price p.
struct FixedPrice {
  double q;
  double p;
};
/// q = F_S^{-1}(1/c1), p = F_B^{-1}((c2-1)/c2), with c1, c2 > 1.
struct FixedQuantile {
  double c1;
  double c2;
};
/// i-th seller sees F_S^{-1}(i^{-(1/2+eps)} / e); buyers see mu_B.
struct DecayingSeller {
  double eps;
};
/// Sellers see F_S^{-1}(1/(2eKr)) while stock < K, else decline; buyers
/// see mu_B. r = max{1, mu_S/mu_B}.
struct StockLimited {
  int K;
};
/// Prices of the optimal fractional solution for S^{alpha m} B^m.
struct Balanced {
  int alpha;
};

}  // namespace policy

using PolicyKind = std::variant<policy::Median, policy::FixedPrice, policy::FixedQuantile,
                                policy::DecayingSeller, policy::StockLimited, policy::Balanced>;

/// `median` | `fixed:<q>,<p>` | `quantile:<c1>,<c2>` | `decay:<eps>` |
/// `stock:<K>` | `balanced:<alpha>`.
PolicyKind parse_policy(std::string_view text);
std::string to_string(const PolicyKind& kind);

struct PolicyAction {
  bool post = false;
  double price = 0.0;

  static PolicyAction Post(double price) { return {true, price}; }
  static PolicyAction Decline() { return {false, 0.0}; }

  friend bool operator==(const PolicyAction&, const PolicyAction&) = default;
};

/// Online posted-price rule. Holds precomputed prices plus the mutable
/// per-run state (sellers seen, stock); copy it to get a fresh replica.
class PricePolicy {
 public:
  /// Validates parameters and, for Median / DecayingSeller / StockLimited /
  /// Balanced, the regularity of both distributions (RegularityError names
  /// the failing check). Balanced also needs a trading fractional solution.
  static PricePolicy build(const PolicyKind& kind, const Distribution& seller, const Distribution& buyer);

  PolicyAction quote(Role role) const;

  /// Records the outcome of the current step. A buyer trade with empty
  /// stock is an invariant violation (std::logic_error).
  void update(Role role, bool traded);

  /// Resets the per-run state.
  void reset();

  const PolicyKind& kind() const { return kind_; }
  long long stock() const { return stock_; }
  long long sellers_seen() const { return sellers_seen_; }

  /// Constant seller price (for DecayingSeller: the price of seller 1).
  double seller_price() const { return q_; }
  double buyer_price() const { return p_; }

  const std::optional<FractionalSolution>& fractional() const { return fractional_; }

 private:
  PricePolicy(PolicyKind kind, Distribution seller) : kind_(kind), seller_(seller) {}

  PolicyKind kind_;
  Distribution seller_;
  double q_ = 0.0;
  double p_ = 0.0;
  double decay_exponent_ = 0.0;
  long long stock_limit_ = 0;  // 0: none
  std::optional<FractionalSolution> fractional_;

  long long sellers_seen_ = 0;
  long long stock_ = 0;
};

}  // namespace ppim
