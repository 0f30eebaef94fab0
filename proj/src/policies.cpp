#include "ppim/policies.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "ppim/format.hpp"

namespace ppim {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::vector<double> parse_params(std::string_view body, std::string_view whole) {
  std::vector<double> out;
  if (body.empty()) return out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = body.find(',', start);
    std::string_view tok = body.substr(start, comma == std::string_view::npos ? comma : comma - start);
    while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.front()))) tok.remove_prefix(1);
    while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back()))) tok.remove_suffix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw std::invalid_argument("invalid number '" + std::string(tok) + "' in policy spec '" +
                                  std::string(whole) + "'");
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

int as_positive_int(double v, std::string_view what) {
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e9) {
    throw std::invalid_argument(std::string(what) + " must be a positive integer, got " + format_number(v));
  }
  return static_cast<int>(v);
}

}  // namespace

PolicyKind parse_policy(std::string_view text) {
  const std::size_t colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  const std::vector<double> params =
      colon == std::string_view::npos ? std::vector<double>{} : parse_params(text.substr(colon + 1), text);
  auto expect = [&](std::size_t n) {
    if (params.size() != n || (n > 0 && colon == std::string_view::npos)) {
      throw std::invalid_argument("policy '" + std::string(name) + "' takes " + std::to_string(n) +
                                  " parameter(s) in '" + std::string(text) + "'");
    }
  };
  if (name == "median") {
    if (colon != std::string_view::npos) expect(0);
    return policy::Median{};
  }
  if (name == "fixed") {
    expect(2);
    return policy::FixedPrice{params[0], params[1]};
  }
  if (name == "quantile") {
    expect(2);
    return policy::FixedQuantile{params[0], params[1]};
  }
  if (name == "decay") {
    expect(1);
    return policy::DecayingSeller{params[0]};
  }
  if (name == "stock") {
    expect(1);
    return policy::StockLimited{as_positive_int(params[0], "stock capacity K")};
  }
  if (name == "balanced") {
    expect(1);
    return policy::Balanced{as_positive_int(params[0], "alpha")};
  }
  throw std::invalid_argument("unknown policy '" + std::string(name) + "' in '" + std::string(text) + "'");
}

std::string to_string(const PolicyKind& kind) {
  return std::visit(
      Overloaded{
          [](const policy::Median&) -> std::string { return "median"; },
          [](const policy::FixedPrice& k) { return "fixed:" + format_number(k.q) + "," + format_number(k.p); },
          [](const policy::FixedQuantile& k) {
            return "quantile:" + format_number(k.c1) + "," + format_number(k.c2);
          },
          [](const policy::DecayingSeller& k) { return "decay:" + format_number(k.eps); },
          [](const policy::StockLimited& k) { return "stock:" + std::to_string(k.K); },
          [](const policy::Balanced& k) { return "balanced:" + std::to_string(k.alpha); },
      },
      kind);
}

PricePolicy PricePolicy::build(const PolicyKind& kind, const Distribution& seller, const Distribution& buyer) {
  PricePolicy out(kind, seller);
  const std::string name = to_string(kind);
  std::visit(
      Overloaded{
          [&](const policy::Median&) {
            require_regular(seller, buyer, name);
            out.q_ = seller.stats().median;
            out.p_ = buyer.stats().median;
          },
          [&](const policy::FixedPrice& k) {
            if (!(std::isfinite(k.q) && std::isfinite(k.p) && k.q >= 0.0 && k.p >= 0.0)) {
              throw std::invalid_argument(name + ": prices must be finite and nonnegative");
            }
            out.q_ = k.q;
            out.p_ = k.p;
          },
          [&](const policy::FixedQuantile& k) {
            if (!(k.c1 > 1.0 && k.c2 > 1.0)) throw std::invalid_argument(name + ": c1 and c2 must exceed 1");
            out.q_ = seller.quantile(1.0 / k.c1);
            out.p_ = buyer.quantile((k.c2 - 1.0) / k.c2);
          },
          [&](const policy::DecayingSeller& k) {
            if (!(k.eps > 0.0 && k.eps < 0.5)) throw std::invalid_argument(name + ": eps must lie in (0, 1/2)");
            require_regular(seller, buyer, name);
            out.decay_exponent_ = 0.5 + k.eps;
            out.q_ = seller.quantile(1.0 / std::numbers::e);
            out.p_ = buyer.mean();
          },
          [&](const policy::StockLimited& k) {
            if (k.K < 1) throw std::invalid_argument(name + ": K must be >= 1");
            require_regular(seller, buyer, name);
            const double r = std::max(1.0, seller.mean() / buyer.mean());
            out.stock_limit_ = k.K;
            out.q_ = seller.quantile(1.0 / (2.0 * std::numbers::e * k.K * r));
            out.p_ = buyer.mean();
          },
          [&](const policy::Balanced& k) {
            if (k.alpha < 1) throw std::invalid_argument(name + ": alpha must be >= 1");
            FractionalSolution sol = solve_fractional(seller, buyer, k.alpha);
            if (!sol.trades) {
              throw std::invalid_argument(name + ": fractional program has no profitable trade for " +
                                          seller.to_string() + " / " + buyer.to_string());
            }
            out.q_ = sol.q;
            out.p_ = sol.p;
            out.fractional_ = sol;
          },
      },
      kind);
  return out;
}

PolicyAction PricePolicy::quote(Role role) const {
  if (role == Role::Buyer) return PolicyAction::Post(p_);
  if (stock_limit_ > 0 && stock_ >= stock_limit_) return PolicyAction::Decline();
  if (decay_exponent_ > 0.0) {
    const double i = static_cast<double>(sellers_seen_ + 1);
    return PolicyAction::Post(seller_.quantile(std::pow(i, -decay_exponent_) / std::numbers::e));
  }
  return PolicyAction::Post(q_);
}

void PricePolicy::update(Role role, bool traded) {
  if (role == Role::Seller) {
    ++sellers_seen_;
    if (traded) {
      if (stock_limit_ > 0 && stock_ >= stock_limit_) {
        throw std::logic_error("policy update: seller trade recorded with full stock");
      }
      ++stock_;
    }
    return;
  }
  if (traded) {
    if (stock_ <= 0) throw std::logic_error("policy update: buyer trade recorded with empty stock");
    --stock_;
  }
}

void PricePolicy::reset() {
  sellers_seen_ = 0;
  stock_ = 0;
}

}  // namespace ppim
