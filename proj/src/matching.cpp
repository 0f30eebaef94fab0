#include "ppim/matching.hpp"

#include <deque>
#include <stdexcept>

namespace ppim {

StockCap StockCap::of(long long k) {
  if (k < 1) throw std::invalid_argument("stock capacity must be >= 1, got " + std::to_string(k));
  StockCap cap;
  cap.bounded_ = true;
  cap.value_ = k;
  return cap;
}

TemporalMatching fifo_match(const AgentStream& s, StockCap cap) {
  TemporalMatching out;
  std::deque<std::size_t> queue;
  for (std::size_t t = 0; t < s.size(); ++t) {
    if (s[t] == Role::Seller) {
      if (!cap.full(static_cast<long long>(queue.size()))) queue.push_back(t);
    } else if (!queue.empty()) {
      out.pairs.emplace_back(queue.front(), t);
      queue.pop_front();
    }
  }
  return out;
}

std::string validate_matching(const TemporalMatching& m, const AgentStream& s, StockCap cap) {
  std::vector<int> used(s.size(), 0);
  std::vector<long long> cut(s.size() + 1, 0);
  for (const auto& [seller, buyer] : m.pairs) {
    if (seller >= s.size() || buyer >= s.size()) return "pair index out of range";
    if (s[seller] != Role::Seller) return "position " + std::to_string(seller) + " is not a seller";
    if (s[buyer] != Role::Buyer) return "position " + std::to_string(buyer) + " is not a buyer";
    if (!(seller < buyer)) return "seller must precede its buyer";
    if (used[seller]++ || used[buyer]++) return "index reused across pairs";
    for (std::size_t t = seller; t < buyer; ++t) ++cut[t];
  }
  for (std::size_t t = 0; t < s.size(); ++t) {
    if (cap.bounded() && cut[t] > cap.value()) {
      return "temporal cut after position " + std::to_string(t) + " exceeds capacity";
    }
  }
  return {};
}

std::size_t brute_force_max_matching(const AgentStream& s, StockCap cap) {
  if (s.size() > kBruteForceMaxLength) {
    throw std::length_error("brute-force matching is limited to streams of length " +
                            std::to_string(kBruteForceMaxLength));
  }
  const std::size_t n = s.size();
  std::vector<std::size_t> sellers;
  for (std::size_t t = 0; t < n; ++t) {
    if (s[t] == Role::Seller) sellers.push_back(t);
  }
  std::vector<bool> buyer_taken(n, false);
  std::vector<long long> cut(n, 0);
  std::size_t best = 0;

  // Assign each seller in turn to an untaken later buyer, or leave it
  // unmatched; cut[t] counts pairs straddling t | t+1.
  auto rec = [&](auto&& self, std::size_t i, std::size_t matched) -> void {
    if (matched + (sellers.size() - i) <= best) return;
    if (i == sellers.size()) {
      best = matched;
      return;
    }
    const std::size_t from = sellers[i];
    for (std::size_t to = from + 1; to < n; ++to) {
      if (s[to] != Role::Buyer || buyer_taken[to]) continue;
      bool fits = true;
      for (std::size_t t = from; t < to; ++t) {
        if (cap.bounded() && cut[t] + 1 > cap.value()) {
          fits = false;
          break;
        }
      }
      if (!fits) continue;
      buyer_taken[to] = true;
      for (std::size_t t = from; t < to; ++t) ++cut[t];
      self(self, i + 1, matched + 1);
      for (std::size_t t = from; t < to; ++t) --cut[t];
      buyer_taken[to] = false;
    }
    self(self, i + 1, matched);
  };
  rec(rec, 0, 0);
  return best;
}

std::size_t kappa(const AgentStream& s, StockCap cap) { return fifo_match(s, cap).size(); }

}  // namespace ppim
