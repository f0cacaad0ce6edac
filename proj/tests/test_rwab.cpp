#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include "doctest.h"
#include "driftlab/error.hpp"
#include "driftlab/rwab.hpp"

using namespace driftlab;
using namespace driftlab::bandit;

namespace {

BanditEnv fixed_env(std::uint64_t T, std::vector<std::uint64_t> changes, double mu1, double mu2) {
  BanditEnv env;
  env.horizon = T;
  env.changes = changes.size();
  env.mu = {mu1, mu2};
  env.change_times = std::move(changes);
  return env;
}

}  // namespace

TEST_CASE("change times") {
  RngStream s(1, 0);
  CHECK(sample_change_times(s, 10, 0).empty());
  const auto all = sample_change_times(s, 10, 9);
  std::vector<std::uint64_t> want(9);
  std::iota(want.begin(), want.end(), 2);
  CHECK(all == want);
  CHECK_THROWS_AS(sample_change_times(s, 10, 10), std::invalid_argument);
  CHECK_THROWS_AS(sample_change_times(s, 10, 11), std::invalid_argument);

  std::vector<int> hits(1001, 0);
  const int draws = 10'000;
  for (int i = 0; i < draws; ++i) {
    const auto t = sample_change_times(s, 1000, 5);
    REQUIRE(t.size() == 5);
    for (std::size_t k = 0; k < t.size(); ++k) {
      REQUIRE(t[k] >= 2);
      REQUIRE(t[k] <= 1000);
      if (k > 0) REQUIRE(t[k] > t[k - 1]);
      ++hits[t[k]];
    }
  }
  double worst = 0.0;
  for (int t = 2; t <= 1000; ++t) worst = std::max(worst, std::abs(double(hits[t]) / draws - 5.0 / 999));
  CHECK(worst < 0.01);
  CHECK(hits[0] == 0);
  CHECK(hits[1] == 0);
}

TEST_CASE("env validation") {
  auto field = [](const BanditEnv& e) {
    try {
      e.validate();
    } catch (const ConfigError& err) {
      return err.field();
    }
    return std::string("none");
  };
  CHECK(field(fixed_env(10, {}, 0.2, 0.8)) == "L");
  CHECK(field(fixed_env(10, {3}, 0.2, 1.2)) == "mu2");
  CHECK(field(fixed_env(10, {1}, 0.2, 0.8)) == "change_times");
  CHECK(field(fixed_env(10, {5, 5}, 0.2, 0.8)) == "change_times");
  CHECK(field(fixed_env(10, {3, 11}, 0.2, 0.8)) == "change_times");
  CHECK(field(fixed_env(10, {3, 10}, 0.2, 0.8)) == "none");
}

TEST_CASE("challenge with deterministic arms") {
  SUBCASE("a+ always wins: S = 1 after one round") {
    const auto env = fixed_env(100, {90}, 1.0, 0.0);
    RngStream s(1, 1);
    Rwab algo(env, s);
    const auto r = algo.challenge();
    CHECK(r.iterations == 1);
    CHECK(r.final_value == 1.0);
    CHECK_FALSE(r.swapped);
    CHECK(algo.plus() == Arm::a1);
  }
  SUBCASE("a- always wins with s = 2: swap after two rounds") {
    const auto env = fixed_env(8, {7, 8}, 0.0, 1.0);
    RngStream s(1, 1);
    Rwab algo(env, s);
    CHECK(algo.boundary() == 2.0);
    CHECK(algo.challenge_probability() == 0.5);
    const auto r = algo.challenge();
    CHECK(r.iterations == 2);
    CHECK(r.final_value == -2.0);
    CHECK(r.swapped);
    CHECK_FALSE(r.mistake);
    CHECK(algo.plus() == Arm::a2);
    CHECK(algo.ledger().swaps == 1);
  }
  SUBCASE("per-call challenge of equal arms stops after T iterations") {
    const auto env = fixed_env(50, {20}, 1.0, 1.0);
    RngStream s(1, 1);
    Rwab algo(env, s);
    const auto r = algo.challenge();
    CHECK(r.horizon_exhausted);
    CHECK(r.iterations == 50);
    CHECK(algo.rounds_started() == 1);
  }
  SUBCASE("per-iteration challenge consumes the horizon and sees changes") {
    const auto env = fixed_env(50, {20}, 1.0, 1.0);
    RngStream s(1, 1);
    Rwab algo(env, s, RwabOptions{Accounting::mean_gap, ChallengeClock::iteration, false});
    const auto r = algo.challenge();
    CHECK(r.horizon_exhausted);
    CHECK(r.change_during);
    CHECK(r.iterations == 50);
    CHECK(algo.finished());
    CHECK_THROWS_AS(algo.challenge(), std::logic_error);
  }
  SUBCASE("iteration clock: a change mid-challenge is applied and is no mistake") {
    // a1 optimal at the start, swapped at round 2: a+ = a1 then loses twice
    const auto env = fixed_env(16, {2, 12, 13, 14}, 1.0, 0.0);
    RngStream s(1, 1);
    Rwab algo(env, s, RwabOptions{Accounting::mean_gap, ChallengeClock::iteration, true});
    CHECK(algo.boundary() == 2.0);
    const auto r = algo.challenge();
    // round 1: +1 (S = 1, exits)
    CHECK(r.iterations == 1);
    CHECK_FALSE(r.swapped);
    const auto r2 = algo.challenge();  // round 2: means swapped, a+ = a1 now loses
    CHECK(r2.swapped);
    CHECK_FALSE(r2.mistake);
    CHECK(r2.iterations == 2);
    CHECK(algo.rounds_started() == 3);
  }
}

TEST_CASE("zero gap gives zero regret") {
  for (double mu : {1.0, 0.5, 0.0}) {
    for (auto clock : {ChallengeClock::call, ChallengeClock::iteration}) {
      RngStream s(8, 0);
      const auto env = make_env(s, 1000, 10, mu, mu);
      const auto led = run_rwab(env, s, RwabOptions{Accounting::mean_gap, clock, false});
      CHECK(led.total == 0.0);
      CHECK(led.rounds == 1000);
    }
  }
}

TEST_CASE("ledger invariants") {
  for (auto clock : {ChallengeClock::call, ChallengeClock::iteration}) {
    for (auto acc : {Accounting::mean_gap, Accounting::realized}) {
      for (std::uint64_t L : {1, 5, 100}) {
        for (std::uint64_t id = 0; id < 40; ++id) {
          RngStream s(21, id);
          const auto env = make_env(s, 1000, L, 0.2, 0.8);
          const auto led = run_rwab(env, s, RwabOptions{acc, clock, true});
          CHECK(led.rounds == 1000);
          const std::uint64_t challenge_rounds = clock == ChallengeClock::call ? led.challenges : led.challenge_iterations;
          CHECK(challenge_rounds + led.plain_pulls == 1000);
          CHECK(led.per_round.size() == led.challenge_iterations + led.plain_pulls);
          CHECK(led.eras == L + 1);
          CHECK(led.sub_eras >= led.eras);
          CHECK(led.mistakes <= led.swaps);
          CHECK(led.swaps <= led.sub_eras);
          const double sum = std::accumulate(led.per_round.begin(), led.per_round.end(), 0.0);
          CHECK(sum == doctest::Approx(led.total).epsilon(1e-12));
          for (double r : led.per_round) {
            if (acc == Accounting::mean_gap) {
              CHECK(r >= 0.0);
              CHECK(r <= 0.6 + 1e-12);
            } else {
              CHECK(std::abs(r) <= 1.0);
            }
          }
          if (acc == Accounting::mean_gap) CHECK(led.total >= 0.0);
        }
      }
    }
  }
}

TEST_CASE("determinism") {
  RngStream a(77, 3), b(77, 3);
  const auto ea = make_env(a, 1000, 5, 0.2, 0.8);
  const auto eb = make_env(b, 1000, 5, 0.2, 0.8);
  CHECK(ea.change_times == eb.change_times);
  const auto la = run_rwab(ea, a);
  const auto lb = run_rwab(eb, b);
  CHECK(la.total == lb.total);
  CHECK(la.swaps == lb.swaps);
  CHECK(a == b);
}

TEST_CASE("theoretical regret bound") {
  const auto b1 = theoretical_regret_bound(1000, 10, 1.0);
  CHECK(b1.bound == doctest::Approx(52800.0).epsilon(1e-12));
  CHECK(b1.confidence == 0.0);
  const double eps95 = std::pow(std::numbers::e * std::log(40.0), 2);
  CHECK(theoretical_regret_bound(1000, 10, eps95).confidence >= 0.95 - 1e-12);
  CHECK(theoretical_regret_bound(1000, 10, eps95 * 1.01).confidence > 0.95);
  CHECK(theoretical_regret_bound(1000, 10, 2).bound > b1.bound);
  CHECK(theoretical_regret_bound(1000, 11, 1).bound > b1.bound);
  CHECK(theoretical_regret_bound(1001, 10, 1).bound > b1.bound);
  CHECK_THROWS_AS(theoretical_regret_bound(1000, 10, 0.99), std::invalid_argument);
}

TEST_CASE("geometric samples: larger success probability dominates") {
  auto sample_cdf = [](double p, std::uint64_t id) {
    RngStream s(5, id);
    std::vector<double> cdf(40, 0.0);
    const int n = 20'000;
    for (int i = 0; i < n; ++i) {
      int k = 1;
      while (!s.next_bernoulli(p)) ++k;
      for (int j = k; j < 40; ++j) cdf[j] += 1.0 / n;
    }
    return cdf;
  };
  const auto hi = sample_cdf(0.5, 0), lo = sample_cdf(0.3, 1);
  for (int j = 1; j < 40; ++j) CHECK(hi[j] >= lo[j]);
}
