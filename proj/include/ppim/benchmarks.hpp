#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ppim/distributions.hpp"
#include "ppim/fractional.hpp"
#include "ppim/matching.hpp"
#include "ppim/streams.hpp"

namespace ppim {

struct BoundReport {
  std::string name;
  double value = 0.0;
  std::vector<std::pair<std::string, double>> inputs;
};

/// mu^{(m)} / mu.
double order_stat_ratio(const Distribution& d, int m);

/// max{1, mu_S / mu_B}, the constant of the stock-limited mechanism.
double stock_ratio(const Distribution& seller, const Distribution& buyer);

/// max{2, mu_S / mu_B}, the constant of the fractional-program bounds.
double fractional_ratio(const Distribution& seller, const Distribution& buyer);

/// n_S mu_S + kappa(s, inf) mu_B^{(n_B)}.
BoundReport welfare_upper_bound(const AgentStream& s, const Distribution& seller, const Distribution& buyer);

/// 3 sqrt(kappa) sqrt(n) mu_B; F_B must be MHR.
BoundReport profit_upper_bound_general(const AgentStream& s, const Distribution& buyer);

/// kappa(s, K) H_n mu_B.
BoundReport profit_upper_bound_stocked(const AgentStream& s, StockCap cap, const Distribution& buyer);

struct OfflinePrices {
  double q;
  double p;
  double profit_per_n;  // guaranteed expected profit per agent on S^{n/2} B^{n/2}
};

/// Fixed-price offline witness for i.i.d. Uniform(a, b) values on
/// S^{n/2} B^{n/2}. Requires b > 2a, or (a, b) = (0, 1).
OfflinePrices uniform_offline_policy(double a, double b);

/// mu^{(n)} / 2.
double prophet_price(const Distribution& d, int n);

/// sqrt(2 m alpha^2 ln m) (1 - 2/m) + 2 alpha; requires m >= 2.
double azuma_bound(int m, int alpha);

/// (alpha m F_S(q) - E[Z_m]) (p - q) - E[Z_m] q.
double balanced_profit_decomposition(int m, int alpha, const FractionalSolution& sol,
                                     const Distribution& seller, double expected_leftover);

struct DpOptions {
  int price_grid = 1024;
  StockCap stock_cap = StockCap::unbounded();
};

inline constexpr std::size_t kDpMaxLength = 30;
inline constexpr int kDpMaxGrid = 2048;

/// Expected profit of the optimal adaptive posted-price mechanism whose
/// prices are restricted to quantile levels j / price_grid, by backward
/// induction over (step, stock).
double adaptive_dp_oracle(const AgentStream& s, const Distribution& seller, const Distribution& buyer,
                          const DpOptions& options = {});

}  // namespace ppim
