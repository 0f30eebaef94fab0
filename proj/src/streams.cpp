#include "ppim/streams.hpp"

#include <cctype>
#include <limits>

namespace ppim {
namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return a > kSaturated - b ? kSaturated : a + b; }

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a > kSaturated / b ? kSaturated : a * b;
}

std::uint64_t node_length(const PatternNode& node) {
  if (node.kind == PatternNode::Kind::Atom) return node.count;
  std::uint64_t inner = 0;
  for (const auto& child : node.children) inner = sat_add(inner, node_length(child));
  return sat_mul(inner, node.count);
}

std::uint64_t sequence_length(const std::vector<PatternNode>& seq) {
  std::uint64_t total = 0;
  for (const auto& node : seq) total = sat_add(total, node_length(node));
  return total;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  std::vector<PatternNode> parse_all() {
    auto terms = parse_sequence();
    skip_ws();
    if (pos_ < text_.size()) {
      throw PatternError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    }
    return terms;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::vector<PatternNode> parse_sequence() {
    std::vector<PatternNode> terms;
    for (;;) {
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] == ')') break;
      terms.push_back(parse_term());
    }
    if (terms.empty()) throw PatternError("expected 'S', 'B' or '('", pos_);
    return terms;
  }

  PatternNode parse_term() {
    PatternNode node;
    const char c = text_[pos_];
    if (c == 'S' || c == 'B') {
      node.kind = PatternNode::Kind::Atom;
      node.atom = c == 'S' ? Role::Seller : Role::Buyer;
      ++pos_;
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '^') {
        ++pos_;
        node.count = parse_uint();
      }
      return node;
    }
    if (c == '(') {
      ++pos_;
      node.kind = PatternNode::Kind::Group;
      node.children = parse_sequence();
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != ')') throw PatternError("expected ')'", pos_);
      ++pos_;
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != '^') {
        throw PatternError("expected '^' after group", pos_);
      }
      ++pos_;
      node.count = parse_uint();
      return node;
    }
    throw PatternError(std::string("unexpected '") + c + "'", pos_);
  }

  std::uint64_t parse_uint() {
    skip_ws();
    const std::size_t start = pos_;
    std::uint64_t value = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      const std::uint64_t digit = static_cast<std::uint64_t>(text_[pos_] - '0');
      if (value > (kSaturated - digit) / 10) throw PatternError("repetition count overflow", start);
      value = value * 10 + digit;
      ++pos_;
    }
    if (pos_ == start) throw PatternError("expected repetition count", pos_);
    return value;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void render_sequence(const std::vector<PatternNode>& seq, std::string& out) {
  bool first = true;
  for (const auto& node : seq) {
    if (!first) out += ' ';
    first = false;
    if (node.kind == PatternNode::Kind::Atom) {
      out += role_char(node.atom);
      if (node.count != 1) out += '^' + std::to_string(node.count);
    } else {
      out += '(';
      render_sequence(node.children, out);
      out += ")^" + std::to_string(node.count);
    }
  }
}

void expand_into(const std::vector<PatternNode>& seq, std::vector<Role>& out) {
  for (const auto& node : seq) {
    if (node.kind == PatternNode::Kind::Atom) {
      out.insert(out.end(), node.count, node.atom);
    } else {
      for (std::uint64_t r = 0; r < node.count; ++r) expand_into(node.children, out);
    }
  }
}

}  // namespace

AgentStream::AgentStream(std::vector<Role> roles) : roles_(std::move(roles)) {
  prefix_.reserve(roles_.size() + 1);
  for (Role r : roles_) {
    if (r == Role::Seller) ++sellers_;
    prefix_.push_back(sellers_);
  }
}

AgentStream AgentStream::from_string(std::string_view letters) {
  std::vector<Role> roles;
  roles.reserve(letters.size());
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (letters[i] == 'S') {
      roles.push_back(Role::Seller);
    } else if (letters[i] == 'B') {
      roles.push_back(Role::Buyer);
    } else {
      throw std::invalid_argument("invalid role '" + std::string(1, letters[i]) + "' at position " +
                                  std::to_string(i));
    }
  }
  return AgentStream(std::move(roles));
}

std::string AgentStream::to_string() const {
  std::string out;
  out.reserve(roles_.size());
  for (Role r : roles_) out += role_char(r);
  return out;
}

StreamPattern::StreamPattern(std::vector<PatternNode> terms)
    : terms_(std::move(terms)), length_(sequence_length(terms_)) {}

StreamPattern parse_pattern(std::string_view text, std::uint64_t max_length) {
  Parser parser(text);
  StreamPattern pattern(parser.parse_all());
  if (pattern.length() > max_length) {
    throw PatternError("pattern expands to more than " + std::to_string(max_length) + " roles", 0);
  }
  return pattern;
}

std::string render(const StreamPattern& p) {
  std::string out;
  render_sequence(p.terms(), out);
  return out;
}

AgentStream expand(const StreamPattern& p) {
  if (p.length() > kMaxExpandedLength) {
    throw std::length_error("pattern expands to more than " + std::to_string(kMaxExpandedLength) +
                            " roles");
  }
  std::vector<Role> roles;
  roles.reserve(p.length());
  expand_into(p.terms(), roles);
  return AgentStream(std::move(roles));
}

AgentStream make_stream(std::string_view pattern) { return expand(parse_pattern(pattern)); }

RoleGenerator::RoleGenerator(const StreamPattern& p)
    : root_(std::make_shared<const std::vector<PatternNode>>(p.terms())) {
  stack_.push_back({root_.get(), 0, 1});
  settle();
}

// Moves the cursor to the next atom with a positive count, or empties the
// stack when the pattern is exhausted.
void RoleGenerator::settle() {
  while (!stack_.empty()) {
    Frame& top = stack_.back();
    if (top.index == top.seq->size()) {
      if (--top.remaining > 0) {
        top.index = 0;
        continue;
      }
      stack_.pop_back();
      if (!stack_.empty()) ++stack_.back().index;
      continue;
    }
    const PatternNode& node = (*top.seq)[top.index];
    if (node_length(node) == 0) {
      ++top.index;
      continue;
    }
    if (node.kind == PatternNode::Kind::Atom) {
      atom_left_ = node.count;
      atom_role_ = node.atom;
      return;
    }
    stack_.push_back({&node.children, 0, node.count});
  }
}

Role RoleGenerator::next() {
  if (done()) throw std::out_of_range("RoleGenerator exhausted");
  const Role role = atom_role_;
  if (--atom_left_ == 0) {
    ++stack_.back().index;
    settle();
  }
  return role;
}

bool is_alpha_balanced(const AgentStream& s, int alpha) {
  if (alpha < 1) throw std::invalid_argument("alpha must be >= 1");
  const std::size_t a = static_cast<std::size_t>(alpha);
  if (s.sellers() != a * s.buyers()) return false;
  std::size_t buyers_seen = 0;
  for (std::size_t t = 0; t < s.size(); ++t) {
    if (s[t] == Role::Buyer) {
      ++buyers_seen;
      if (s.prefix_sellers(t) < a * buyers_seen) return false;
    }
  }
  return true;
}

bool prefix_dominates(const AgentStream& s1, const AgentStream& s2) {
  if (s1.size() != s2.size()) {
    throw std::domain_error("prefix_dominates requires streams of equal length");
  }
  for (std::size_t t = 1; t <= s1.size(); ++t) {
    if (s1.prefix_sellers(t) < s2.prefix_sellers(t)) return false;
  }
  return true;
}

AgentStream random_balanced_stream(int alpha, int m, RandomStream& rng) {
  if (alpha < 1 || m < 0) throw std::invalid_argument("random_balanced_stream needs alpha >= 1, m >= 0");
  const std::size_t a = static_cast<std::size_t>(alpha);
  const std::size_t total_sellers = a * static_cast<std::size_t>(m);
  std::vector<Role> roles;
  roles.reserve(total_sellers + m);
  std::size_t sellers = 0, buyers = 0;
  while (sellers + buyers < total_sellers + m) {
    const bool can_sell = sellers < total_sellers;
    const bool can_buy = buyers < static_cast<std::size_t>(m) && sellers >= a * (buyers + 1);
    Role next;
    if (can_sell && can_buy) {
      next = rng.uniform() < 0.5 ? Role::Seller : Role::Buyer;
    } else {
      next = can_sell ? Role::Seller : Role::Buyer;
    }
    roles.push_back(next);
    (next == Role::Seller ? sellers : buyers)++;
  }
  return AgentStream(std::move(roles));
}

AgentStream random_permutation_stream(std::size_t sellers, std::size_t buyers, RandomStream& rng) {
  std::vector<Role> roles(sellers, Role::Seller);
  roles.insert(roles.end(), buyers, Role::Buyer);
  // Fisher-Yates
  for (std::size_t i = roles.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.uniform() * i);
    std::swap(roles[i - 1], roles[j < i ? j : i - 1]);
  }
  return AgentStream(std::move(roles));
}

std::vector<AgentStream> all_balanced_streams(int alpha, int m) {
  if (alpha < 1 || m < 0) throw std::invalid_argument("all_balanced_streams needs alpha >= 1, m >= 0");
  const std::size_t a = static_cast<std::size_t>(alpha);
  const std::size_t mm = static_cast<std::size_t>(m);
  std::vector<AgentStream> out;
  std::vector<Role> prefix;
  auto rec = [&](auto&& self, std::size_t sellers, std::size_t buyers) -> void {
    if (sellers == a * mm && buyers == mm) {
      out.emplace_back(prefix);
      return;
    }
    if (sellers < a * mm) {
      prefix.push_back(Role::Seller);
      self(self, sellers + 1, buyers);
      prefix.pop_back();
    }
    if (buyers < mm && sellers >= a * (buyers + 1)) {
      prefix.push_back(Role::Buyer);
      self(self, sellers, buyers + 1);
      prefix.pop_back();
    }
  };
  rec(rec, 0, 0);
  return out;
}

}  // namespace ppim
