#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "ppim/streams.hpp"

namespace ppim {

/// Stock capacity: a positive integer or explicitly unbounded.
class StockCap {
 public:
  static StockCap unbounded() { return StockCap(); }
  static StockCap of(long long k);

  bool bounded() const { return bounded_; }
  /// Capacity value; meaningless when unbounded.
  long long value() const { return value_; }

  /// True when `level` items fill the capacity.
  bool full(long long level) const { return bounded_ && level >= value_; }

  std::string to_string() const { return bounded_ ? std::to_string(value_) : "inf"; }

  friend bool operator==(const StockCap&, const StockCap&) = default;

 private:
  StockCap() = default;
  bool bounded_ = false;
  long long value_ = std::numeric_limits<long long>::max();
};

/// Seller-to-later-buyer pairs (stream positions).
struct TemporalMatching {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::size_t size() const { return pairs.size(); }
};

/// Online FIFO matching: a seller joins the queue iff it holds fewer than K
/// sellers; a buyer pairs with the queue front when the queue is nonempty.
TemporalMatching fifo_match(const AgentStream& s, StockCap cap);

/// Empty string when `m` is a valid matching for (s, cap); otherwise a
/// description of the first violated invariant.
std::string validate_matching(const TemporalMatching& m, const AgentStream& s, StockCap cap);

/// Exhaustive maximum over all seller -> later-buyer assignments whose
/// temporal cuts stay within the cap. Refuses streams longer than 20.
std::size_t brute_force_max_matching(const AgentStream& s, StockCap cap);

inline constexpr std::size_t kBruteForceMaxLength = 20;

/// Size of the maximum temporal matching (computed by FIFO).
std::size_t kappa(const AgentStream& s, StockCap cap);

}  // namespace ppim
