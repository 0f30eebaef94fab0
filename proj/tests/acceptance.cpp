// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "ppim/distributions.hpp"
#include "ppim/engine.hpp"
#include "ppim/experiments.hpp"
#include "ppim/format.hpp"
#include "ppim/fractional.hpp"
#include "ppim/verify.hpp"

using namespace ppim;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string record;  // every number the criterion computed, for the rerun comparison
  std::string note;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!note.empty()) note += "; ";
      note += what;
    }
  }
  void log(const std::string& key, double v) { record += key + "=" + format_scientific(v) + " "; }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double grid_oracle(const Distribution& seller, const Distribution& buyer, int alpha, int points) {
  double best = 0.0;
  for (int i = 1; i < points; ++i) {
    const double u = static_cast<double>(i) / points;
    const double bought = (1.0 - u) / alpha;
    if (bought >= 1.0) continue;
    best = std::max(best, (1.0 - u) * (buyer.quantile(u) - seller.quantile(bought)));
  }
  return best;
}

Outcome fractional_exactness() {
  Outcome o;
  const Distribution u = Distribution::uniform(0.0, 1.0);
  struct Target {
    int alpha;
    double p, q, v;
  };
  const auto t0 = Clock::now();
  for (const Target t : {Target{1, 0.75, 0.25, 0.125}, Target{2, 2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0}}) {
    const FractionalSolution sol = solve_fractional(u, u, t.alpha);
    const double oracle = grid_oracle(u, u, t.alpha, 1'000'000);
    const std::string tag = "alpha=" + std::to_string(t.alpha);
    o.log(tag + ".p", sol.p);
    o.log(tag + ".q", sol.q);
    o.log(tag + ".value", sol.per_buyer_value);
    o.log(tag + ".oracle", oracle);
    o.require(std::abs(sol.p - t.p) <= 1e-6, tag + " p off");
    o.require(std::abs(sol.q - t.q) <= 1e-6, tag + " q off");
    o.require(std::abs(sol.per_buyer_value - t.v) <= 1e-6, tag + " value off");
    o.require(std::abs(oracle - sol.per_buyer_value) <= 1e-6 * oracle, tag + " disagrees with the grid oracle");
  }
  const double secs = seconds_since(t0);
  o.require(secs < 1.0, "runtime " + format_number(secs) + " s");
  return o;
}

Outcome suite_outcome(Suite suite, double limit_seconds, VerifyOptions opt = {}) {
  Outcome o;
  const auto t0 = Clock::now();
  const VerifyReport r = run_suite(suite, opt);
  const double secs = seconds_since(t0);
  for (const auto& c : r.checks) {
    o.record += c.name + (c.pass ? ":pass:" : ":fail:") + format_scientific(c.slack) + " ";
    o.require(c.pass, c.name);
  }
  o.require(!r.checks.empty(), "empty suite");
  if (limit_seconds > 0.0) o.require(secs < limit_seconds, "runtime " + format_number(secs) + " s");
  o.note = std::to_string(r.checks.size() - r.failures()) + "/" + std::to_string(r.checks.size()) + " checks" +
           (o.note.empty() ? "" : "; " + o.note);
  return o;
}

Outcome fifo_maximality() { return suite_outcome(Suite::Matching, 300.0); }

Outcome mhr_properties() { return suite_outcome(Suite::Mhr, 0.0); }

Outcome adaptive_vs_fractional() { return suite_outcome(Suite::Adaptive, 0.0); }

Outcome azuma_inventory() {
  VerifyOptions opt;
  opt.trials = 100'000;
  return suite_outcome(Suite::Azuma, 120.0, opt);
}

Outcome four_competitive() {
  Outcome o;
  int index = 0;
  for (const Distribution& d : {Distribution::uniform(0.0, 1.0), Distribution::exponential(1.0)}) {
    RandomStream rng(606 + index);
    for (int i = 0; i < 20; ++i) {
      const AgentStream s = random_balanced_stream(1, 500, rng);
      MonteCarloOptions mc;
      mc.trials = 2000;
      mc.seed = RandomStream::substream(6, static_cast<std::uint64_t>(index * 100 + i)).next_u64();
      mc.objective = Objective::Welfare;
      const MCEstimate w = monte_carlo(s, policy::Median{}, d, d, mc);
      const double total = static_cast<double>(s.sellers()) * d.mean() + static_cast<double>(s.buyers()) * d.mean();
      o.log(d.to_string() + "#" + std::to_string(i), w.mean);
      o.require(4.0 * w.mean >= total - 3.0 * 4.0 * w.std_err, d.to_string() + " stream " + std::to_string(i));
    }
    ++index;
  }
  return o;
}

std::vector<double> to_doubles(const std::vector<std::int64_t>& xs) { return {xs.begin(), xs.end()}; }

Outcome profit_sqrt_n() {
  Outcome o;
  ExperimentConfig cfg;
  cfg.scenario = Scenario::ProfitSqrtN;
  cfg.n_values = default_n_values(cfg.scenario);
  cfg.trials = 10'000;
  cfg.seed = 7;
  const auto t0 = Clock::now();
  const auto rows = run_experiment(cfg);
  const double secs = seconds_since(t0);
  std::vector<double> ratios;
  for (const RatioRow& r : rows) {
    const double n = static_cast<double>(r.n);
    const double per_n_high = (r.offline_bound + 1.96 * r.offline_std_err) / n;
    o.record += to_csv({r});
    o.require(per_n_high >= 1.0 / 128.0, "witness below n/128 at n=" + std::to_string(r.n));
    o.require(r.online_mean > 0.0, "online profit not positive at n=" + std::to_string(r.n));
    ratios.push_back(r.ratio);
  }
  const double slope = log_log_slope(to_doubles(cfg.n_values), ratios);
  o.log("slope", slope);
  o.require(slope >= 0.4 && slope <= 0.6, "ratio slope " + format_number(slope));
  o.require(secs < 600.0, "runtime " + format_number(secs) + " s");
  o.note = "slope=" + format_number(slope) + (o.note.empty() ? "" : "; " + o.note);
  return o;
}

Outcome welfare_log_n() {
  Outcome o;
  ExperimentConfig cfg;
  cfg.scenario = Scenario::WelfareLogN;
  cfg.n_values = default_n_values(cfg.scenario);
  cfg.trials = 2000;
  cfg.seed = 8;
  cfg.seller_dist = "exp:1";
  cfg.buyer_dist = "exp:1";
  double lo = INFINITY, hi = 0.0;
  for (const RatioRow& r : run_experiment(cfg)) {
    const double scaled = r.ratio / harmonic_number(static_cast<int>(r.n));
    o.record += to_csv({r});
    lo = std::min(lo, scaled);
    hi = std::max(hi, scaled);
    o.require(scaled >= 0.2 && scaled <= 2.0, "ratio/H_n=" + format_number(scaled) + " at n=" + std::to_string(r.n));
  }

  ExperimentConfig pareto;
  pareto.scenario = Scenario::ParetoBlowup;
  pareto.n_values = default_n_values(pareto.scenario);
  pareto.trials = 2000;
  pareto.seed = 8;
  pareto.pareto_eps = 0.5;
  std::vector<double> ratios;
  for (const RatioRow& r : run_experiment(pareto)) {
    o.record += to_csv({r});
    ratios.push_back(r.ratio);
  }
  const double slope = log_log_slope(to_doubles(pareto.n_values), ratios);
  o.log("pareto_slope", slope);
  o.require(slope >= 0.4, "pareto slope " + format_number(slope));
  o.note = "ratio/H_n in [" + format_number(lo) + ", " + format_number(hi) + "], pareto slope=" +
           format_number(slope) + (o.note.empty() ? "" : "; " + o.note);
  return o;
}

Outcome balanced_near_optimal() {
  Outcome o;
  ExperimentConfig cfg;
  cfg.scenario = Scenario::Balanced;
  cfg.n_values = {100, 1000, 10000};
  cfg.trials = 2000;
  cfg.seed = 9;
  cfg.alpha = 1;
  const auto rows = run_experiment(cfg);
  std::string ratios;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    o.record += to_csv({rows[i]});
    ratios += (i ? ", " : "") + format_number(rows[i].ratio);
    if (i > 0) o.require(rows[i].ratio < rows[i - 1].ratio, "not strictly decreasing at m=" + std::to_string(rows[i].n));
  }
  o.require(rows.back().ratio <= 1.1, "ratio at m=10^4 is " + format_number(rows.back().ratio));
  o.note = "ratios " + ratios + (o.note.empty() ? "" : "; " + o.note);
  return o;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "fractional solver exactness", fractional_exactness},
      {2, "FIFO maximality", fifo_maximality},
      {3, "MHR and log-concave properties", mhr_properties},
      {4, "adaptive DP at most fractional", adaptive_vs_fractional},
      {5, "Azuma inventory bound", azuma_inventory},
      {6, "4-competitive median welfare", four_competitive},
      {7, "profit sqrt(n) scaling", profit_sqrt_n},
      {8, "welfare log(n) scaling", welfare_log_n},
      {9, "balanced profit near-optimality", balanced_near_optimal},
  };

  bool all = true;
  std::vector<std::string> first;
  for (const Criterion& c : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note = std::string("exception: ") + e.what();
    }
    first.push_back(o.record);
    all = all && o.pass;
    std::printf("%s %d %s (%.1f s)%s%s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, seconds_since(t0),
                o.note.empty() ? "" : ": ", o.note.c_str());
    std::fflush(stdout);
  }

  Outcome rerun;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::string again;
    try {
      again = criteria[i].run().record;
    } catch (const std::exception& e) {
      again = e.what();
    }
    rerun.require(!first[i].empty() && again == first[i], "criterion " + std::to_string(criteria[i].id) + " differs");
  }
  all = all && rerun.pass;
  std::printf("%s 10 bit-identical reruns%s%s\n", rerun.pass ? "PASS" : "FAIL", rerun.note.empty() ? "" : ": ",
              rerun.note.c_str());
  return all ? 0 : 1;
}
