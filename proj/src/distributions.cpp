#include "ppim/distributions.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "ppim/format.hpp"

namespace ppim {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double pareto_shape(const ParetoEps& d) { return 1.0 / (1.0 - d.eps); }

// Q(1 - c), accurate for small c.
double upper_quantile(const Distribution::Kind& kind, double c) {
  return std::visit(
      Overloaded{
          [c](const Uniform& d) { return d.hi - c * (d.hi - d.lo); },
          [c](const Exponential& d) { return c <= 0.0 ? kInf : -std::log(c) / d.rate; },
          [c](const ParetoEps& d) { return c <= 0.0 ? kInf : std::pow(c, -(1.0 - d.eps)); },
      },
      kind);
}

// 1 - F(x), computed without cancellation.
double survival(const Distribution::Kind& kind, double x) {
  return std::visit(
      Overloaded{
          [x](const Uniform& d) {
            if (x <= d.lo) return 1.0;
            if (x >= d.hi) return 0.0;
            return (d.hi - x) / (d.hi - d.lo);
          },
          [x](const Exponential& d) { return x <= 0.0 ? 1.0 : std::exp(-d.rate * x); },
          [x](const ParetoEps& d) { return x <= 1.0 ? 1.0 : std::pow(x, -pareto_shape(d)); },
      },
      kind);
}

double tanh_sinh_integral(const std::function<double(double)>& f, double a, double b) {
  thread_local boost::math::quadrature::tanh_sinh<double> integrator(18);
  return integrator.integrate([&f](double x) { return f(x); }, a, b, 1e-13);
}

// slopes[i+1] <= slopes[i] up to a relative tolerance.
bool concave_on(const std::vector<double>& x, const std::vector<double>& g, double tol) {
  double prev = 0.0;
  bool have_prev = false;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double dx = x[i + 1] - x[i];
    if (!(dx > 0.0)) continue;
    const double slope = (g[i + 1] - g[i]) / dx;
    if (have_prev && slope > prev + tol * std::max(1.0, std::abs(prev))) return false;
    prev = slope;
    have_prev = true;
  }
  return true;
}

bool nondecreasing(const std::vector<double>& v, double tol) {
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if (v[i + 1] < v[i] - tol * std::max(1.0, std::abs(v[i]))) return false;
  }
  return true;
}

double parse_number(std::string_view token, std::string_view whole) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (token.empty() || ec != std::errc() || ptr != last) {
    throw std::invalid_argument("invalid number '" + std::string(token) +
                                "' in distribution spec '" + std::string(whole) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Distribution::Distribution(Kind kind) : kind_(kind) {
  std::visit(Overloaded{
                 [](const Uniform& d) {
                   if (!(std::isfinite(d.lo) && std::isfinite(d.hi) && d.lo >= 0.0 && d.lo < d.hi)) {
                     throw std::invalid_argument("uniform distribution requires 0 <= lo < hi");
                   }
                 },
                 [](const Exponential& d) {
                   if (!(std::isfinite(d.rate) && d.rate > 0.0)) {
                     throw std::invalid_argument("exponential distribution requires rate > 0");
                   }
                 },
                 [](const ParetoEps& d) {
                   if (!(d.eps > 0.0 && d.eps < 1.0)) {
                     throw std::invalid_argument("pareto-eps distribution requires 0 < eps < 1");
                   }
                 },
             },
             kind_);
}

CdfPdf Distribution::eval(double x) const {
  return std::visit(
      Overloaded{
          [x](const Uniform& d) -> CdfPdf {
            if (x < d.lo) return {0.0, 0.0};
            if (x > d.hi) return {1.0, 0.0};
            return {(x - d.lo) / (d.hi - d.lo), 1.0 / (d.hi - d.lo)};
          },
          [x](const Exponential& d) -> CdfPdf {
            if (x < 0.0) return {0.0, 0.0};
            if (x == kInf) return {1.0, 0.0};
            return {-std::expm1(-d.rate * x), d.rate * std::exp(-d.rate * x)};
          },
          [x](const ParetoEps& d) -> CdfPdf {
            if (x < 1.0) return {0.0, 0.0};
            if (x == kInf) return {1.0, 0.0};
            const double a = pareto_shape(d);
            const double tail = std::pow(x, -a);
            return {1.0 - tail, a * tail / x};
          },
      },
      kind_);
}

double Distribution::quantile_unchecked(double u) const {
  return std::visit(
      Overloaded{
          [u](const Uniform& d) { return d.lo + u * (d.hi - d.lo); },
          [u](const Exponential& d) { return u >= 1.0 ? kInf : -std::log1p(-u) / d.rate; },
          [u](const ParetoEps& d) { return u >= 1.0 ? kInf : std::pow(1.0 - u, -(1.0 - d.eps)); },
      },
      kind_);
}

double Distribution::quantile(double u) const {
  if (!(u >= 0.0 && u < 1.0)) {
    throw std::domain_error("quantile level must lie in [0, 1), got " + format_number(u));
  }
  return quantile_unchecked(u);
}

DistributionStats Distribution::stats() const {
  return std::visit(
      Overloaded{
          [](const Uniform& d) -> DistributionStats {
            return {0.5 * (d.lo + d.hi), (d.hi - d.lo) / std::sqrt(12.0), 0.5 * (d.lo + d.hi)};
          },
          [](const Exponential& d) -> DistributionStats {
            return {1.0 / d.rate, 1.0 / d.rate, std::log(2.0) / d.rate};
          },
          [](const ParetoEps& d) -> DistributionStats {
            const double a = pareto_shape(d);
            const double std_dev = a > 2.0 ? std::sqrt(a / ((a - 1.0) * (a - 1.0) * (a - 2.0))) : kInf;
            return {1.0 / d.eps, std_dev, std::pow(2.0, 1.0 - d.eps)};
          },
      },
      kind_);
}

double Distribution::support_min() const {
  return std::visit(Overloaded{
                        [](const Uniform& d) { return d.lo; },
                        [](const Exponential&) { return 0.0; },
                        [](const ParetoEps&) { return 1.0; },
                    },
                    kind_);
}

double Distribution::support_max() const {
  if (const auto* u = std::get_if<Uniform>(&kind_)) return u->hi;
  return kInf;
}

double Distribution::max_order_stat_mean(int m) const {
  if (m < 1) throw std::invalid_argument("order statistic size m must be >= 1");
  return std::visit(
      Overloaded{
          [m](const Uniform& d) { return d.lo + (d.hi - d.lo) * m / (m + 1.0); },
          [m](const Exponential& d) { return harmonic_number(m) / d.rate; },
          [m](const ParetoEps& d) {
            // m Gamma(m) Gamma(eps) / Gamma(m + eps)
            return std::exp(std::log(static_cast<double>(m)) + std::lgamma(static_cast<double>(m)) +
                            std::lgamma(d.eps) - std::lgamma(m + d.eps));
          },
      },
      kind_);
}

double Distribution::max_order_stat_mean_numeric(int m) const {
  if (m < 1) throw std::invalid_argument("order statistic size m must be >= 1");
  // v = u^m turns int_0^1 Q(u) m u^{m-1} du into int_0^1 Q(v^{1/m}) dv; then
  // w = 1 - v puts the (possibly singular) upper tail at w = 0.
  const double inv_m = 1.0 / m;
  auto integrand = [this, inv_m](double w) {
    const double c = -std::expm1(std::log1p(-w) * inv_m);
    return upper_quantile(kind_, c);
  };
  return tanh_sinh_integral(integrand, 0.0, 1.0);
}

double Distribution::partial_expectation_above(double y) const {
  return std::visit(
      Overloaded{
          [y](const Uniform& d) {
            if (y <= d.lo) return 0.5 * (d.lo + d.hi);
            if (y >= d.hi) return 0.0;
            return (d.hi * d.hi - y * y) / (2.0 * (d.hi - d.lo));
          },
          [y](const Exponential& d) {
            if (y <= 0.0) return 1.0 / d.rate;
            return std::exp(-d.rate * y) * (y + 1.0 / d.rate);
          },
          [y](const ParetoEps& d) {
            if (y <= 1.0) return 1.0 / d.eps;
            const double a = pareto_shape(d);
            return a / (a - 1.0) * std::pow(y, 1.0 - a);
          },
      },
      kind_);
}

double Distribution::partial_expectation_above_numeric(double y) const {
  const double tail = survival(kind_, y);
  if (tail <= 0.0) return 0.0;
  auto integrand = [this](double c) { return upper_quantile(kind_, c); };
  return tanh_sinh_integral(integrand, 0.0, tail);
}

Regularity Distribution::check_regularity(int grid_points, double tolerance) const {
  if (grid_points < 3) throw std::invalid_argument("check_regularity needs at least 3 grid points");
  std::vector<double> x(grid_points), log_surv(grid_points), log_cdf(grid_points),
      virtual_value(grid_points), virtual_cost(grid_points);
  for (int i = 0; i < grid_points; ++i) {
    const double u = static_cast<double>(i + 1) / (grid_points + 1);
    x[i] = quantile_unchecked(u);
    const auto [F, f] = eval(x[i]);
    const double S = survival(kind_, x[i]);
    log_surv[i] = std::log(S);
    log_cdf[i] = std::log(F);
    virtual_value[i] = x[i] - S / f;
    virtual_cost[i] = x[i] + F / f;
  }
  Regularity out;
  out.mhr = concave_on(x, log_surv, tolerance) && nondecreasing(virtual_value, tolerance);
  out.log_concave_cdf = concave_on(x, log_cdf, tolerance) && nondecreasing(virtual_cost, tolerance);
  return out;
}

std::string Distribution::to_string() const {
  return std::visit(Overloaded{
                        [](const Uniform& d) {
                          return "uniform:" + format_number(d.lo) + "," + format_number(d.hi);
                        },
                        [](const Exponential& d) { return "exp:" + format_number(d.rate); },
                        [](const ParetoEps& d) { return "pareto-eps:" + format_number(d.eps); },
                    },
                    kind_);
}

bool operator==(const Distribution& a, const Distribution& b) {
  return a.to_string() == b.to_string();
}

Distribution parse_distribution(std::string_view text) {
  const std::string_view spec = trim(text);
  const std::size_t colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("distribution spec '" + std::string(spec) +
                                "' is missing ':' after the kind");
  }
  const std::string_view name = trim(spec.substr(0, colon));
  std::vector<double> params;
  for (std::string_view tok : split(spec.substr(colon + 1), ',')) {
    params.push_back(parse_number(trim(tok), spec));
  }
  auto expect_count = [&](std::size_t n) {
    if (params.size() != n) {
      throw std::invalid_argument("distribution '" + std::string(name) + "' takes " +
                                  std::to_string(n) + " parameter(s), got " +
                                  std::to_string(params.size()) + " in '" + std::string(spec) + "'");
    }
  };
  try {
    if (name == "uniform") {
      expect_count(2);
      return Distribution::uniform(params[0], params[1]);
    }
    if (name == "exp") {
      expect_count(1);
      return Distribution::exponential(params[0]);
    }
    if (name == "pareto-eps") {
      expect_count(1);
      return Distribution::pareto_eps(params[0]);
    }
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    if (what.find(std::string(spec)) != std::string::npos) throw;
    throw std::invalid_argument(what + " (in '" + std::string(spec) + "')");
  }
  throw std::invalid_argument("unknown distribution kind '" + std::string(name) + "' in '" +
                              std::string(spec) + "'");
}

double top_k_sum_bound(double mean, double std, int m, int k) {
  if (k < 1 || m < 1 || k > m) {
    throw std::domain_error("top_k_sum_bound requires 1 <= k <= m");
  }
  if (!std::isfinite(std) || std < 0.0) {
    throw std::domain_error("top_k_sum_bound requires a finite nonnegative standard deviation");
  }
  return k * mean + 2.0 * std::sqrt(static_cast<double>(k) * m) * std;
}

void require_regular(const Distribution& seller, const Distribution& buyer, std::string_view context) {
  if (!buyer.check_regularity().mhr) {
    throw RegularityError(std::string(context) + ": buyer distribution " + buyer.to_string() +
                          " fails the MHR check");
  }
  if (!seller.check_regularity().log_concave_cdf) {
    throw RegularityError(std::string(context) + ": seller distribution " + seller.to_string() +
                          " fails the log-concave cdf check");
  }
}

double harmonic_number(int n) {
  double h = 0.0;
  for (int i = n; i >= 1; --i) h += 1.0 / i;
  return h;
}

}  // namespace ppim
