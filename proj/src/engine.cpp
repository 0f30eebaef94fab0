#include "ppim/engine.hpp"

#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

namespace ppim {
namespace {

class NeumaierSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace

double profit(const TradeLog& log) { return log.income - log.spend; }

double welfare(const TradeLog& log) { return log.kept_seller_value + log.traded_buyer_value; }

double welfare_from_steps(std::span<const TradeStep> steps) {
  double total = 0.0;
  for (const auto& st : steps) {
    if (st.role == Role::Seller ? !st.traded : st.traded) total += st.value;
  }
  return total;
}

TradeLog run_trial(const AgentStream& s, PricePolicy policy, const Distribution& seller,
                   const Distribution& buyer, const RandomStream& rng, const TrialOptions& options) {
  TradeLog log;
  if (options.record_steps) log.steps.reserve(s.size());

  RandomStream position_lane = rng;
  RandomStream seller_lane = RandomStream::substream(rng.key(), 0);
  RandomStream buyer_lane = RandomStream::substream(rng.key(), 1);
  const bool by_position = options.draws == DrawIndexing::ByPosition;

  long long stock = 0;
  for (std::size_t t = 0; t < s.size(); ++t) {
    const Role role = s[t];
    const PolicyAction action = policy.quote(role);
    bool traded = false;
    double value;
    if (role == Role::Seller) {
      const double u = by_position ? position_lane.uniform() : seller_lane.uniform();
      value = seller.quantile_unchecked(u);
      if (action.post && value <= action.price && !options.stock_cap.full(stock)) {
        traded = true;
        ++stock;
        ++log.items_bought;
        log.spend += action.price;
      } else {
        log.kept_seller_value += value;
      }
    } else {
      const double u = by_position ? position_lane.uniform() : buyer_lane.uniform();
      value = buyer.quantile_unchecked(u);
      if (action.post && value >= action.price && stock >= 1) {
        traded = true;
        --stock;
        ++log.items_sold;
        log.income += action.price;
        log.traded_buyer_value += value;
      }
    }
    policy.update(role, traded);
    if (options.record_steps) log.steps.push_back({role, action, value, traded, stock});
  }
  log.leftover_stock = stock;
  return log;
}

MCEstimate summarize(std::span<const double> samples) {
  MCEstimate out;
  out.trials = static_cast<std::int64_t>(samples.size());
  if (samples.empty()) return out;
  NeumaierSum sum;
  for (double x : samples) sum.add(x);
  out.mean = sum.value() / static_cast<double>(samples.size());
  if (samples.size() > 1) {
    NeumaierSum sq;
    for (double x : samples) sq.add((x - out.mean) * (x - out.mean));
    const double var = sq.value() / static_cast<double>(samples.size() - 1);
    out.std_err = std::sqrt(var / static_cast<double>(samples.size()));
  }
  out.ci95_low = out.mean - 1.96 * out.std_err;
  out.ci95_high = out.mean + 1.96 * out.std_err;
  return out;
}

MCEstimate estimate(std::int64_t trials, std::uint64_t seed, unsigned workers,
                    const std::function<double(std::int64_t, const RandomStream&)>& trial) {
  if (trials < 0) throw std::invalid_argument("estimate: negative trial count");
  std::vector<double> samples(static_cast<std::size_t>(trials));
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::int64_t>(workers, std::max<std::int64_t>(trials, 1)));

  auto run_lane = [&](unsigned lane) {
    for (std::int64_t i = lane; i < trials; i += workers) {
      samples[static_cast<std::size_t>(i)] = trial(i, RandomStream::substream(seed, static_cast<std::uint64_t>(i)));
    }
  };

  if (workers <= 1) {
    run_lane(0);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          run_lane(w);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& err : errors) {
      if (err) std::rethrow_exception(err);
    }
  }
  return summarize(samples);
}

MCEstimate monte_carlo(const AgentStream& s, const PricePolicy& policy, const Distribution& seller,
                       const Distribution& buyer, const MonteCarloOptions& options) {
  if (options.trials < 2) throw std::invalid_argument("monte_carlo requires at least 2 trials");
  TrialOptions trial_options;
  trial_options.stock_cap = options.stock_cap;
  trial_options.draws = options.draws;
  trial_options.record_steps = false;
  const Objective objective = options.objective;
  return estimate(options.trials, options.seed, options.workers,
                  [&](std::int64_t, const RandomStream& rng) {
                    const TradeLog log = run_trial(s, policy, seller, buyer, rng, trial_options);
                    return objective == Objective::Profit ? profit(log) : welfare(log);
                  });
}

MCEstimate monte_carlo(const AgentStream& s, const PolicyKind& kind, const Distribution& seller,
                       const Distribution& buyer, const MonteCarloOptions& options) {
  return monte_carlo(s, PricePolicy::build(kind, seller, buyer), seller, buyer, options);
}

MCEstimate inventory_terminal(int alpha, int m, const Distribution& seller, const Distribution& buyer,
                              std::int64_t trials, std::uint64_t seed, unsigned workers) {
  if (alpha < 1 || m < 0) throw std::invalid_argument("inventory_terminal needs alpha >= 1 and m >= 0");
  if (trials < 2) throw std::invalid_argument("inventory_terminal requires at least 2 trials");
  const PricePolicy policy = PricePolicy::build(policy::Balanced{alpha}, seller, buyer);
  std::vector<Role> roles;
  roles.reserve(static_cast<std::size_t>(alpha + 1) * m);
  for (int i = 0; i < m; ++i) {
    roles.insert(roles.end(), static_cast<std::size_t>(alpha), Role::Seller);
    roles.push_back(Role::Buyer);
  }
  const AgentStream stream(std::move(roles));
  TrialOptions trial_options;
  trial_options.record_steps = false;
  return estimate(trials, seed, workers, [&](std::int64_t, const RandomStream& rng) {
    return static_cast<double>(run_trial(stream, policy, seller, buyer, rng, trial_options).leftover_stock);
  });
}

double welfare_series(std::span<const double> prices, const Distribution& dist) {
  double total = dist.mean();
  double reach = 1.0;  // probability that no earlier buyer bought
  for (double price : prices) {
    if (!std::isfinite(price)) throw std::invalid_argument("welfare_series: prices must be finite");
    total += reach * dist.partial_expectation_above(price);
    reach *= dist.cdf(price);
  }
  return total;
}

}  // namespace ppim
