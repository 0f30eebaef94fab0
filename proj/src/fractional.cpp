#include "ppim/fractional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "ppim/format.hpp"

namespace ppim {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct QuantileProgram {
  const Distribution& seller;
  const Distribution& buyer;
  int alpha;

  double seller_price(double s) const { return seller.quantile_unchecked(std::clamp(s, 0.0, 1.0)); }
  double buyer_price(double s) const {
    return buyer.quantile_unchecked(std::clamp(1.0 - alpha * s, 0.0, 1.0));
  }

  // alpha s (p - q): the per-buyer objective after eliminating the constraint.
  double objective(double s) const {
    if (s <= 0.0) return 0.0;
    const double v = alpha * s * (buyer_price(s) - seller_price(s));
    return std::isfinite(v) ? v : kNegInf;
  }

  // Derivative of the objective divided by alpha; decreasing in s for
  // regular inputs.
  double first_order(double s) const {
    return virtual_value(buyer, buyer_price(s)) - virtual_cost(seller, seller_price(s));
  }
};

}  // namespace

double virtual_value(const Distribution& buyer, double x) {
  const auto [F, f] = buyer.eval(x);
  if (!(f > 0.0)) throw std::domain_error("virtual_value: zero density at x = " + format_number(x));
  return x - (1.0 - F) / f;
}

double virtual_cost(const Distribution& seller, double x) {
  const auto [F, f] = seller.eval(x);
  if (!(f > 0.0)) throw std::domain_error("virtual_cost: zero density at x = " + format_number(x));
  return x + F / f;
}

FractionalSolution solve_fractional(const Distribution& seller, const Distribution& buyer, int alpha,
                                    const FractionalOptions& options) {
  if (alpha < 1) throw std::invalid_argument("solve_fractional: alpha must be >= 1");
  if (options.grid_points < 3) throw std::invalid_argument("solve_fractional: grid too small");
  if (options.require_regularity) require_regular(seller, buyer, "solve_fractional");

  const QuantileProgram prog{seller, buyer, alpha};
  const double s_max = std::min(1.0, 1.0 / alpha);
  const int grid = options.grid_points;

  int best_i = 0;
  double best_h = 0.0;
  for (int i = 1; i <= grid; ++i) {
    const double h = prog.objective(s_max * i / grid);
    if (h > best_h) {
      best_h = h;
      best_i = i;
    }
  }

  FractionalSolution sol;
  sol.alpha = alpha;
  if (best_i == 0) {
    sol.q = seller.support_min();
    sol.p = buyer.support_max();
    return sol;
  }

  const double lo = s_max * (best_i - 1) / grid;
  const double hi = s_max * std::min(best_i + 1, grid) / grid;

  // Golden section on the bracket.
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double hc = prog.objective(c), hd = prog.objective(d);
  for (int it = 0; it < 400; ++it) {
    const double width = std::abs(prog.seller_price(b) - prog.seller_price(a));
    if ((std::isfinite(width) && width <= options.price_tolerance) ||
        b - a <= 4.0 * std::numeric_limits<double>::epsilon() * b) {
      break;
    }
    if (hc > hd) {
      b = d;
      d = c;
      hd = hc;
      c = b - phi * (b - a);
      hc = prog.objective(c);
    } else {
      a = c;
      c = d;
      hc = hd;
      d = a + phi * (b - a);
      hd = prog.objective(d);
    }
  }
  double s_star = 0.5 * (a + b);
  double h_star = prog.objective(s_star);
  if (best_h > h_star) {
    s_star = s_max * best_i / grid;
    h_star = best_h;
  }

  // Polish with bisection on the first-order condition when the grid
  // bracket contains its sign change.
  try {
    double left = lo > 0.0 ? lo : s_max * 1e-9;
    double right = hi;
    double g_left = prog.first_order(left);
    double g_right = prog.first_order(right);
    if (g_left > 0.0 && g_right < 0.0) {
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (left + right);
        if (mid <= left || mid >= right) break;
        const double g_mid = prog.first_order(mid);
        if (g_mid > 0.0) {
          left = mid;
        } else if (g_mid < 0.0) {
          right = mid;
        } else {
          left = right = mid;
          break;
        }
      }
      const double s_root = 0.5 * (left + right);
      const double h_root = prog.objective(s_root);
      if (h_root >= h_star - 1e-12 * std::max(1.0, std::abs(h_star))) {
        s_star = s_root;
        h_star = h_root;
      }
    }
  } catch (const std::domain_error&) {
    // Density vanishes at a bracket end: keep the golden-section optimum.
  }

  if (!(h_star > 0.0)) {
    sol.q = seller.support_min();
    sol.p = buyer.support_max();
    return sol;
  }

  sol.trades = true;
  sol.q = prog.seller_price(s_star);
  sol.p = prog.buyer_price(s_star);
  const double sell_fraction = 1.0 - buyer.cdf(sol.p);
  const double buy_fraction = seller.cdf(sol.q);
  sol.per_buyer_value = sol.p * sell_fraction - alpha * sol.q * buy_fraction;
  sol.constraint_residual = sell_fraction - alpha * buy_fraction;
  if (std::abs(sol.constraint_residual) > options.constraint_tolerance) {
    throw std::runtime_error("solve_fractional: constraint residual " +
                             format_number(sol.constraint_residual) + " exceeds tolerance");
  }
  sol.interior = s_star > 0.0 && s_star < s_max && buyer.pdf(sol.p) > 0.0 && seller.pdf(sol.q) > 0.0;
  if (sol.interior) {
    const double vv = virtual_value(buyer, sol.p);
    const double vc = virtual_cost(seller, sol.q);
    sol.stationarity_residual = vv - vc;
    sol.multiplier = 0.5 * (vv + vc);
    sol.stationary = std::abs(sol.stationarity_residual) <= options.stationarity_tolerance;
  }
  return sol;
}

bool CertificateReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CertificateCheck& c) { return c.pass; });
}

CertificateReport certify_bounds(const FractionalSolution& sol, const Distribution& seller,
                                 const Distribution& buyer, int alpha, int m) {
  (void)alpha;
  const double mu_s = seller.mean();
  const double mu_b = buyer.mean();
  const double r = std::max(2.0, mu_s / mu_b);
  const double e = std::numbers::e;

  CertificateReport report;
  {
    CertificateCheck c;
    c.name = "value_lower_bound";
    c.lhs = m * sol.per_buyer_value;
    c.rhs = m * mu_b / (2.0 * e * r);
    c.slack = c.lhs - c.rhs;
    c.pass = c.lhs >= c.rhs;
    report.checks.push_back(c);
  }
  {
    CertificateCheck c;
    c.name = "buyer_price_upper_bound";
    c.lhs = sol.p;
    c.rhs = 4.0 * std::log(4.0 * e * r) * mu_b;
    c.slack = c.rhs - c.lhs;
    c.pass = c.lhs <= c.rhs;
    report.checks.push_back(c);
  }
  return report;
}

}  // namespace ppim
