#pragma once

#include <string>
#include <vector>

#include "ppim/distributions.hpp"

namespace ppim {

/// Optimal single-price pair of the fractional relaxation on S^{am} B^m.
struct FractionalSolution {
  double p = 0.0;  // buyer price
  double q = 0.0;  // seller price
  double per_buyer_value = 0.0;
  double constraint_residual = 0.0;    // (1 - F_B(p)) - alpha F_S(q)
  double stationarity_residual = 0.0;  // virtual_value(p) - virtual_cost(q)
  double multiplier = 0.0;             // common value of both virtual terms at the optimum
  bool trades = false;                 // false: the no-trade solution
  bool interior = false;               // stationarity applies
  bool stationary = true;              // interior implies |stationarity_residual| <= tolerance
  int alpha = 1;
};

/// x - (1 - F_B(x)) / f_B(x); std::domain_error where the density vanishes.
double virtual_value(const Distribution& buyer, double x);

/// x + F_S(x) / f_S(x); std::domain_error where the density vanishes.
double virtual_cost(const Distribution& seller, double x);

struct FractionalOptions {
  int grid_points = 1024;
  double price_tolerance = 1e-10;
  double constraint_tolerance = 1e-8;
  double stationarity_tolerance = 1e-5;
  bool require_regularity = true;
};

/// Maximizes p (1 - F_B(p)) - alpha q F_S(q) subject to
/// 1 - F_B(p) = alpha F_S(q). The constraint is eliminated by working in the
/// seller quantile s = F_S(q), with q = F_S^{-1}(s) and
/// p = F_B^{-1}(1 - alpha s): a coarse grid over s picks the bracket, golden
/// section refines it, and when the bracket holds a sign change of the
/// first-order condition virtual_value(p) = virtual_cost(q) a bisection on
/// that condition polishes the optimum to machine precision.
///
/// Throws RegularityError when the inputs are not regular (unless disabled).
FractionalSolution solve_fractional(const Distribution& seller, const Distribution& buyer, int alpha,
                                    const FractionalOptions& options = {});

struct CertificateCheck {
  std::string name;
  bool pass = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs for "<=" checks, lhs - rhs for ">=" checks
};

struct CertificateReport {
  std::vector<CertificateCheck> checks;
  bool all_pass() const;
};

/// With r = max{2, mu_S / mu_B}: (i) m * value >= m mu_B / (2 e r);
/// (ii) p <= 4 ln(4 e r) mu_B.
CertificateReport certify_bounds(const FractionalSolution& sol, const Distribution& seller,
                                 const Distribution& buyer, int alpha, int m);

}  // namespace ppim
