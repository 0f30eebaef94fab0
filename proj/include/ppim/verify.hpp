#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ppim {

enum class Suite { Mhr, Matching, Adaptive, Azuma, Bounds };

Suite parse_suite(std::string_view name);
std::string to_string(Suite s);

struct VerifyCheck {
  std::string name;
  bool pass = false;
  double slack = 0.0;  // distance to the violating side; negative on failure
};

struct VerifyReport {
  Suite suite = Suite::Mhr;
  std::vector<VerifyCheck> checks;
  bool all_pass() const;
  std::size_t failures() const;
};

struct VerifyOptions {
  std::int64_t trials = 0;  // Monte Carlo trials per check; 0: the suite default
  std::uint64_t seed = 1;
  unsigned workers = 0;
};

/// mhr: tail and order-statistic properties of MHR and log-concave
///   distributions, the exponential H_m identity, the top-k sum bound.
/// matching: FIFO equals brute force on every stream of length <= 12 for
///   K in {1, 2, 3, inf}.
/// adaptive: DP oracle <= fractional value + n/1024 on every balanced
///   stream of length <= 12, alpha in {1, 2}; "SB" gives 1/64.
/// azuma: simulated E[Z_m] against azuma_bound for m in {10, 100, 1000},
///   alpha in {1, 2}; the profit decomposition identity.
/// bounds: simulated welfare and profit against the offline upper bounds,
///   4-competitiveness of the median on balanced streams, the fractional
///   certificates.
VerifyReport run_suite(Suite suite, const VerifyOptions& options = {});

std::int64_t default_trials(Suite suite);

}  // namespace ppim
