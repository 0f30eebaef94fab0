#include <doctest.h>

#include <string>

#include "ppim/streams.hpp"

using namespace ppim;

namespace {

std::string letters(std::string_view pattern) { return make_stream(pattern).to_string(); }

AgentStream bottom(int alpha, int m) {
  return make_stream("(S^" + std::to_string(alpha) + " B)^" + std::to_string(m));
}

}  // namespace

TEST_CASE("parse_pattern examples") {
  CHECK(letters("S B^3") == "SBBB");
  CHECK(letters("(S^2 B)^2") == "SSBSSB");
  CHECK(letters("S^0 B") == "B");
}

TEST_CASE("expand examples") {
  const AgentStream a = make_stream("(SB)^2");
  CHECK(a.to_string() == "SBSB");
  CHECK(a.sellers() == 2);
  CHECK(a.buyers() == 2);

  const AgentStream b = make_stream("S^500 B^500");
  CHECK(b.sellers() == 500);
  CHECK(b.buyers() == 500);

  const AgentStream c = make_stream("SB^4");
  CHECK(c.sellers() == 1);
  CHECK(c.buyers() == 4);
}

TEST_CASE("pattern grammar details") {
  CHECK(letters(" S\tB  ( S B ) ^ 2 ") == "SBSBSB");
  CHECK(letters("((S B)^2 B)^2") == "SBSBBSBSBB");
  CHECK(letters("(S)^0") == "");
  CHECK(letters("S^10").size() == 10);
  CHECK(parse_pattern("(S^3 B)^1000").length() == 4000);
}

TEST_CASE("pattern syntax errors carry a position") {
  auto position = [](std::string_view text) -> long {
    try {
      parse_pattern(text);
    } catch (const PatternError& e) {
      return static_cast<long>(e.position());
    }
    return -1;
  };
  CHECK(position("") == 0);
  CHECK(position("SX") == 1);
  CHECK(position("S^") == 2);
  CHECK(position("(SB") == 3);
  CHECK(position("(SB)") == 4);
  CHECK(position("S^99999999999999999999999") >= 2);
  CHECK(position(")") == 0);
  CHECK(position("s") == 0);
}

TEST_CASE("oversized expansions are rejected") {
  CHECK_THROWS_AS(parse_pattern("S^100000001"), PatternError);
  CHECK_THROWS_AS(parse_pattern("(S^10000 B^10000)^10000"), PatternError);
  CHECK_NOTHROW(parse_pattern("S^50000000 B^50000000"));
  CHECK_THROWS_AS(parse_pattern("S^11 B", 10), PatternError);
}

TEST_CASE("render is canonical and parse inverts it") {
  CHECK(render(parse_pattern("S B^3")) == "S B^3");
  CHECK(render(parse_pattern("(SB)^2")) == "(S B)^2");
  CHECK(render(parse_pattern("S^1 B^1")) == "S B");
  CHECK(render(parse_pattern("((S^2 B)^3 B)^1")) == "((S^2 B)^3 B)^1");

  RandomStream rng(7);
  auto random_terms = [&](auto&& self, int depth) -> std::vector<PatternNode> {
    std::vector<PatternNode> terms;
    const int n = 1 + static_cast<int>(rng.next_u64() % 3);
    for (int i = 0; i < n; ++i) {
      PatternNode node;
      node.count = rng.next_u64() % 5;
      if (depth < 3 && rng.uniform() < 0.3) {
        node.kind = PatternNode::Kind::Group;
        node.children = self(self, depth + 1);
      } else {
        node.atom = rng.uniform() < 0.5 ? Role::Seller : Role::Buyer;
      }
      terms.push_back(std::move(node));
    }
    return terms;
  };
  for (int i = 0; i < 500; ++i) {
    const StreamPattern p(random_terms(random_terms, 0));
    const std::string text = render(p);
    CAPTURE(text);
    const StreamPattern q = parse_pattern(text);
    CHECK(q == p);
    CHECK(render(q) == text);
    CHECK(expand(q) == expand(p));
  }
}

TEST_CASE("lazy generation agrees with expansion") {
  for (const char* text : {"S B^3", "((S^2 B)^3 B)^2", "(S)^0 B", "(S^0)^5", "S^3 (B (S B^2)^2)^3"}) {
    const StreamPattern p = parse_pattern(text);
    const AgentStream s = expand(p);
    RoleGenerator gen(p);
    std::size_t t = 0;
    while (!gen.done()) {
      REQUIRE(t < s.size());
      CHECK(gen.next() == s[t]);
      ++t;
    }
    CHECK(t == s.size());
  }
}

TEST_CASE("lazy generation beyond the materialization cap") {
  const StreamPattern p = parse_pattern("(S B)^60000000", UINT64_MAX);
  CHECK(p.length() == 120000000);
  RoleGenerator gen(p);
  for (int i = 0; i < 1000; ++i) CHECK(gen.next() == (i % 2 == 0 ? Role::Seller : Role::Buyer));
  CHECK_THROWS_AS(expand(p), std::length_error);
}

TEST_CASE("generator survives a move") {
  RoleGenerator gen = [] {
    RoleGenerator g(parse_pattern("(S B^2)^2"));
    return g;
  }();
  std::string out;
  while (!gen.done()) out += role_char(gen.next());
  CHECK(out == "SBBSBB");
}

TEST_CASE("from_string and prefix counts") {
  const AgentStream s = AgentStream::from_string("SBSSB");
  CHECK(s.prefix_sellers(0) == 0);
  CHECK(s.prefix_sellers(1) == 1);
  CHECK(s.prefix_sellers(2) == 1);
  CHECK(s.prefix_sellers(5) == 3);
  CHECK_THROWS_AS(AgentStream::from_string("SBX"), std::invalid_argument);
  CHECK(AgentStream::from_string("").empty());
}

TEST_CASE("is_alpha_balanced examples") {
  CHECK(is_alpha_balanced(AgentStream::from_string("SBSSBSBB"), 1));
  CHECK_FALSE(is_alpha_balanced(AgentStream::from_string("SBBSSB"), 1));
  CHECK(is_alpha_balanced(AgentStream::from_string("SSSBSB"), 2));
  CHECK_FALSE(is_alpha_balanced(AgentStream::from_string("SSBSBSSSB"), 2));
  CHECK(is_alpha_balanced(AgentStream(), 1));
  CHECK_FALSE(is_alpha_balanced(AgentStream::from_string("SSB"), 1));
  CHECK_THROWS_AS(is_alpha_balanced(AgentStream::from_string("SB"), 0), std::invalid_argument);
}

TEST_CASE("prefix_dominates examples") {
  CHECK(prefix_dominates(AgentStream::from_string("SSBB"), AgentStream::from_string("SBSB")));
  CHECK_FALSE(prefix_dominates(AgentStream::from_string("SSBBSB"), AgentStream::from_string("SBSSBB")));
  CHECK_FALSE(prefix_dominates(AgentStream::from_string("SBSSBB"), AgentStream::from_string("SSBBSB")));
  const AgentStream s = AgentStream::from_string("SBSB");
  CHECK(prefix_dominates(s, s));
  CHECK_THROWS_AS(prefix_dominates(s, AgentStream::from_string("SB")), std::domain_error);
}

TEST_CASE("canonical balanced streams are balanced") {
  for (int alpha = 1; alpha <= 4; ++alpha) {
    for (int m = 1; m <= 100; ++m) CHECK(is_alpha_balanced(bottom(alpha, m), alpha));
  }
}

TEST_CASE("the canonical balanced stream is the bottom element") {
  RandomStream rng(11);
  for (int alpha = 1; alpha <= 3; ++alpha) {
    for (int trial = 0; trial < 200; ++trial) {
      const int m = 1 + static_cast<int>(rng.next_u64() % 40);
      const AgentStream s = random_balanced_stream(alpha, m, rng);
      REQUIRE(is_alpha_balanced(s, alpha));
      CHECK(prefix_dominates(s, bottom(alpha, m)));
    }
  }
}

TEST_CASE("all_balanced_streams enumerates the Catalan family") {
  CHECK(all_balanced_streams(1, 0).size() == 1);
  CHECK(all_balanced_streams(1, 3).size() == 5);
  CHECK(all_balanced_streams(1, 6).size() == 132);
  CHECK(all_balanced_streams(2, 3).size() == 12);  // Fuss-Catalan
  CHECK(all_balanced_streams(2, 4).size() == 55);
  const auto all = all_balanced_streams(1, 4);
  for (std::size_t i = 0; i < all.size(); ++i) {
    CHECK(is_alpha_balanced(all[i], 1));
    if (i > 0) CHECK(all[i - 1].to_string() > all[i].to_string());  // S sorts first
  }
  CHECK(all.front().to_string() == "SSSSBBBB");
  CHECK(all.back().to_string() == "SBSBSBSB");
}

TEST_CASE("random permutation keeps role counts") {
  RandomStream rng(3);
  for (int i = 0; i < 50; ++i) {
    const AgentStream s = random_permutation_stream(7, 4, rng);
    CHECK(s.sellers() == 7);
    CHECK(s.buyers() == 4);
  }
}
