#include "ppim/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ppim {

double order_stat_ratio(const Distribution& d, int m) { return d.max_order_stat_mean(m) / d.mean(); }

double stock_ratio(const Distribution& seller, const Distribution& buyer) {
  return std::max(1.0, seller.mean() / buyer.mean());
}

double fractional_ratio(const Distribution& seller, const Distribution& buyer) {
  return std::max(2.0, seller.mean() / buyer.mean());
}

BoundReport welfare_upper_bound(const AgentStream& s, const Distribution& seller, const Distribution& buyer) {
  const double n_s = static_cast<double>(s.sellers());
  const int n_b = static_cast<int>(s.buyers());
  const double k = static_cast<double>(kappa(s, StockCap::unbounded()));
  BoundReport out{"welfare_upper_bound", n_s * seller.mean(), {{"n_S", n_s}, {"n_B", n_b}, {"kappa", k}}};
  if (n_b > 0) out.value += k * buyer.max_order_stat_mean(n_b);
  return out;
}

BoundReport profit_upper_bound_general(const AgentStream& s, const Distribution& buyer) {
  if (!buyer.check_regularity().mhr) {
    throw RegularityError("profit_upper_bound_general: buyer distribution " + buyer.to_string() +
                          " fails the MHR check");
  }
  const double k = static_cast<double>(kappa(s, StockCap::unbounded()));
  const double n = static_cast<double>(s.size());
  return {"profit_upper_bound_general", 3.0 * std::sqrt(k) * std::sqrt(n) * buyer.mean(), {{"kappa", k}, {"n", n}}};
}

BoundReport profit_upper_bound_stocked(const AgentStream& s, StockCap cap, const Distribution& buyer) {
  const double k = static_cast<double>(kappa(s, cap));
  const int n = static_cast<int>(s.size());
  const double h = n > 0 ? harmonic_number(n) : 0.0;
  return {"profit_upper_bound_stocked", k * h * buyer.mean(), {{"kappa", k}, {"n", static_cast<double>(n)}}};
}

OfflinePrices uniform_offline_policy(double a, double b) {
  if (a == 0.0 && b == 1.0) return {0.125, 0.5, 1.0 / 128.0};
  if (!(a > 0.0 && b > 2.0 * a)) {
    throw std::domain_error("uniform_offline_policy requires b > 2a > 0 or (a, b) = (0, 1)");
  }
  const double k = b / a - 1.0;
  const double y = 0.5 * (1.0 - 1.0 / k);
  const double p = a * (y * k + 1.0);
  const double q = 0.5 * a * (2.0 + y * y * k);
  const double profit_per_n = a * k / 128.0 * std::pow(1.0 - 1.0 / k, 4);
  return {q, p, profit_per_n};
}

double prophet_price(const Distribution& d, int n) {
  if (n < 1) throw std::invalid_argument("prophet_price requires n >= 1");
  return 0.5 * d.max_order_stat_mean(n);
}

double azuma_bound(int m, int alpha) {
  if (m < 2) throw std::domain_error("azuma_bound requires m >= 2");
  if (alpha < 1) throw std::domain_error("azuma_bound requires alpha >= 1");
  const double md = m;
  const double a = alpha;
  return std::sqrt(2.0 * md * a * a * std::log(md)) * (1.0 - 2.0 / md) + 2.0 * a;
}

double balanced_profit_decomposition(int m, int alpha, const FractionalSolution& sol,
                                     const Distribution& seller, double expected_leftover) {
  if (expected_leftover < 0.0) throw std::invalid_argument("expected leftover stock must be >= 0");
  const double bought = static_cast<double>(alpha) * m * seller.cdf(sol.q);
  return (bought - expected_leftover) * (sol.p - sol.q) - expected_leftover * sol.q;
}

double adaptive_dp_oracle(const AgentStream& s, const Distribution& seller, const Distribution& buyer,
                          const DpOptions& options) {
  if (s.size() > kDpMaxLength) throw std::length_error("adaptive_dp_oracle: stream longer than 30");
  if (options.price_grid < 1 || options.price_grid > kDpMaxGrid) {
    throw std::length_error("adaptive_dp_oracle: price grid must lie in [1, 2048]");
  }
  if (options.stock_cap.bounded() && options.stock_cap.value() > static_cast<long long>(s.size())) {
    throw std::length_error("adaptive_dp_oracle: stock cap exceeds stream length");
  }
  const int grid = options.price_grid;
  const std::size_t n = s.size();

  // Candidate (trade probability, price) pairs on the quantile grid; the
  // zero-probability entry is "decline".
  struct Offer {
    double prob;
    double price;
  };
  std::vector<Offer> seller_offers, buyer_offers;
  for (int j = 0; j <= grid; ++j) {
    const double level = static_cast<double>(j) / grid;
    const double q = seller.quantile_unchecked(level);
    if (std::isfinite(q)) seller_offers.push_back({seller.cdf(q), q});
    const double p = buyer.quantile_unchecked(1.0 - level);
    if (std::isfinite(p)) buyer_offers.push_back({1.0 - buyer.cdf(p), p});
  }

  const std::size_t max_stock =
      options.stock_cap.bounded() ? static_cast<std::size_t>(options.stock_cap.value()) : n;
  std::vector<double> next(max_stock + 2, 0.0), cur(max_stock + 2, 0.0);
  for (std::size_t t = n; t-- > 0;) {
    const std::size_t reachable = std::min(t, max_stock);
    for (std::size_t k = 0; k <= reachable; ++k) {
      double best;
      if (s[t] == Role::Seller) {
        best = next[k];
        if (k < max_stock) {
          for (const Offer& o : seller_offers) {
            best = std::max(best, o.prob * (next[k + 1] - o.price) + (1.0 - o.prob) * next[k]);
          }
        }
      } else {
        best = next[k];
        if (k >= 1) {
          for (const Offer& o : buyer_offers) {
            best = std::max(best, o.prob * (o.price + next[k - 1]) + (1.0 - o.prob) * next[k]);
          }
        }
      }
      cur[k] = best;
    }
    std::swap(cur, next);
  }
  return next[0];
}

}  // namespace ppim
