#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ppim/random.hpp"

namespace ppim {

enum class Role : std::uint8_t { Seller, Buyer };

inline char role_char(Role r) { return r == Role::Seller ? 'S' : 'B'; }

/// Finite sequence of agent roles with cached seller counts per prefix.
class AgentStream {
 public:
  AgentStream() = default;
  explicit AgentStream(std::vector<Role> roles);

  /// "SBSB"-style literal; throws std::invalid_argument on other characters.
  static AgentStream from_string(std::string_view letters);

  const std::vector<Role>& roles() const { return roles_; }
  std::size_t size() const { return roles_.size(); }
  bool empty() const { return roles_.empty(); }
  Role operator[](std::size_t t) const { return roles_[t]; }

  std::size_t sellers() const { return sellers_; }
  std::size_t buyers() const { return roles_.size() - sellers_; }

  /// Sellers among the first t roles, t in [0, size()].
  std::size_t prefix_sellers(std::size_t t) const { return prefix_[t]; }

  std::string to_string() const;

  friend bool operator==(const AgentStream& a, const AgentStream& b) { return a.roles_ == b.roles_; }

 private:
  std::vector<Role> roles_;
  std::vector<std::size_t> prefix_{0};
  std::size_t sellers_ = 0;
};

/// Upper bound on materialized pattern length.
inline constexpr std::uint64_t kMaxExpandedLength = 100'000'000;

/// AST of the pattern language: a sequence of terms, each an atom or a
/// parenthesized group, repeated `count` times.
struct PatternNode {
  enum class Kind { Atom, Group } kind = Kind::Atom;
  Role atom = Role::Seller;
  std::vector<PatternNode> children;  // Group only
  std::uint64_t count = 1;

  friend bool operator==(const PatternNode&, const PatternNode&) = default;
};

class StreamPattern {
 public:
  StreamPattern() = default;
  explicit StreamPattern(std::vector<PatternNode> terms);

  const std::vector<PatternNode>& terms() const { return terms_; }

  /// Expanded length, saturating at UINT64_MAX.
  std::uint64_t length() const { return length_; }

  friend bool operator==(const StreamPattern& a, const StreamPattern& b) { return a.terms_ == b.terms_; }

 private:
  std::vector<PatternNode> terms_;
  std::uint64_t length_ = 0;
};

/// Thrown for malformed patterns; `position` is the 0-based byte offset.
class PatternError : public std::invalid_argument {
 public:
  PatternError(const std::string& what, std::size_t position)
      : std::invalid_argument(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// pattern := term+ ; term := atom | atom '^' uint | '(' pattern ')' '^' uint ;
/// atom := 'S' | 'B'. Whitespace is ignored. Rejects patterns whose
/// expansion exceeds `max_length`.
StreamPattern parse_pattern(std::string_view text, std::uint64_t max_length = kMaxExpandedLength);

/// Canonical text: atoms with '^k' when k != 1, groups always carry '^k',
/// terms separated by single spaces.
std::string render(const StreamPattern& p);

AgentStream expand(const StreamPattern& p);

/// parse + expand.
AgentStream make_stream(std::string_view pattern);

/// Produces the roles of a pattern one at a time without materializing
/// the expansion. Not bounded by kMaxExpandedLength.
class RoleGenerator {
 public:
  explicit RoleGenerator(const StreamPattern& p);

  bool done() const { return stack_.empty(); }
  Role next();

 private:
  struct Frame {
    const std::vector<PatternNode>* seq;
    std::size_t index;
    std::uint64_t remaining;  // repetitions left of the current sequence
  };
  void settle();

  std::shared_ptr<const std::vector<PatternNode>> root_;
  std::vector<Frame> stack_;
  std::uint64_t atom_left_ = 0;
  Role atom_role_ = Role::Seller;
};

/// n_S = alpha n_B and the i-th buyer is preceded by at least alpha * i
/// sellers.
bool is_alpha_balanced(const AgentStream& s, int alpha);

/// Every prefix of s1 has at least as many sellers as the same-length
/// prefix of s2. Throws std::domain_error on unequal lengths.
bool prefix_dominates(const AgentStream& s1, const AgentStream& s2);

/// Random alpha-balanced stream with m buyers: at each position where both
/// roles keep the prefix feasible, each is chosen with probability 1/2.
AgentStream random_balanced_stream(int alpha, int m, RandomStream& rng);

/// Uniform random permutation of the given role counts.
AgentStream random_permutation_stream(std::size_t sellers, std::size_t buyers, RandomStream& rng);

/// Every alpha-balanced stream with m buyers, in lexicographic order
/// (S < B).
std::vector<AgentStream> all_balanced_streams(int alpha, int m);

}  // namespace ppim
