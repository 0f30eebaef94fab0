#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "ppim/random.hpp"

namespace ppim {

struct Uniform {
  double lo;
  double hi;
};

struct Exponential {
  double rate;
};

/// Pareto on [1, inf) with F(x) = 1 - x^{-1/(1-eps)}; mean 1/eps.
struct ParetoEps {
  double eps;
};

struct DistributionStats {
  double mean;
  double std;  // +inf when the second moment diverges
  double median;
};

struct CdfPdf {
  double cdf;
  double pdf;
};

struct Regularity {
  bool mhr;              // log(1-F) concave and virtual value increasing
  bool log_concave_cdf;  // log F concave and virtual cost increasing
};

/// Immutable parametric value distribution.
class Distribution {
 public:
  using Kind = std::variant<Uniform, Exponential, ParetoEps>;

  /// Throws std::invalid_argument when the parameters violate the kind's
  /// invariants.
  explicit Distribution(Kind kind);

  static Distribution uniform(double lo, double hi) { return Distribution(Uniform{lo, hi}); }
  static Distribution exponential(double rate) { return Distribution(Exponential{rate}); }
  static Distribution pareto_eps(double eps) { return Distribution(ParetoEps{eps}); }

  const Kind& kind() const { return kind_; }

  CdfPdf eval(double x) const;
  double cdf(double x) const { return eval(x).cdf; }
  double pdf(double x) const { return eval(x).pdf; }

  /// inf{x : F(x) >= u} for u in [0, 1); std::domain_error otherwise.
  double quantile(double u) const;

  DistributionStats stats() const;
  double mean() const { return stats().mean; }

  double support_min() const;
  double support_max() const;  // +inf for unbounded kinds

  double sample(RandomStream& rng) const { return quantile(rng.uniform()); }

  /// Quantile without the domain check, u in [0, 1]; u = 1 maps to the
  /// support maximum. Used on hot simulation paths.
  double quantile_unchecked(double u) const;

  /// E[max of m i.i.d. draws]; closed form for every supported kind.
  double max_order_stat_mean(int m) const;

  /// Same quantity through adaptive quadrature of the quantile function,
  /// int_0^1 Q(v^{1/m}) dv, independent of the closed forms.
  double max_order_stat_mean_numeric(int m) const;

  /// lambda(y) = E[X ; X >= y] = int_y^inf x f(x) dx.
  double partial_expectation_above(double y) const;

  /// Quadrature route for partial_expectation_above, int_{F(y)}^1 Q(u) du.
  double partial_expectation_above_numeric(double y) const;

  /// Grid test of the regularity conditions on `grid_points` quantile-spaced
  /// interior points (u_i = i / (grid_points + 1)).
  Regularity check_regularity(int grid_points = 1024, double tolerance = 1e-9) const;

  std::string to_string() const;

  friend bool operator==(const Distribution& a, const Distribution& b);

 private:
  Kind kind_;
};

/// `uniform:<lo>,<hi>` | `exp:<rate>` | `pareto-eps:<eps>`.
/// Throws std::invalid_argument naming the offending token.
Distribution parse_distribution(std::string_view text);

/// k * mean + 2 sqrt(k m) std: upper bound on the expected sum of the k
/// largest of m draws. Requires 1 <= k <= m and finite std.
double top_k_sum_bound(double mean, double std, int m, int k);

double harmonic_number(int n);

/// Raised when a mechanism or solver needs a regularity condition that the
/// given distribution fails.
class RegularityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Throws RegularityError naming the failed check: buyers must be MHR,
/// sellers must have a log-concave cdf.
void require_regular(const Distribution& seller, const Distribution& buyer, std::string_view context);

}  // namespace ppim
