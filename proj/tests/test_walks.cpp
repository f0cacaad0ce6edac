#include <cmath>

#include "doctest.h"
#include "driftlab/walks.hpp"
#include "oracles.hpp"

using namespace driftlab;

TEST_CASE("oracle solver against closed forms") {
  const auto fair = oracle::mean_hitting_times(oracle::fair_walk(20));
  for (std::size_t x = 0; x <= 20; ++x) CHECK(fair[x] == doctest::Approx(double(x) * (20.0 - x)).epsilon(1e-9));

  // reflected biased walk: d_0 = 1, d_x = (1 + q d_{x-1}) / p, h(x0) = sum_{x >= x0} d_x
  const double p = 0.75, q = 0.25;
  double d = 1.0, total = 1.0;
  for (int x = 1; x < 50; ++x) {
    d = (1.0 + q * d) / p;
    total += d;
  }
  CHECK(oracle::mean_hitting_times(oracle::biased_walk(50, p))[0] == doctest::Approx(total).epsilon(1e-9));

  // lazy walk from the top: b^2 / delta
  CHECK(oracle::mean_hitting_times(oracle::lazy_walk(10, 0.5))[10] == doctest::Approx(200.0).epsilon(1e-9));

  // survival sums to the mean
  const auto surv = oracle::survival(oracle::fair_walk(8), 3, 4000);
  double mean = 0.0;
  for (double s : surv) mean += s;
  CHECK(mean == doctest::Approx(15.0).epsilon(1e-6));
}

TEST_CASE("fair walk") {
  RngStream s(1, 0);
  CHECK(simulate_fair_walk(s, 10, 0, 100).sample.stopping_time == 0);
  CHECK(simulate_fair_walk(s, 10, 10, 100).sample.stopping_time == 0);
  for (int i = 0; i < 100; ++i) CHECK(simulate_fair_walk(s, 2, 1, 100).sample.stopping_time == 1);

  double sum = 0.0;
  const int runs = 10'000;
  for (int i = 0; i < runs; ++i) {
    RngStream r(2024, i);
    const auto w = simulate_fair_walk(r, 20, 10, 100'000);
    REQUIRE_FALSE(w.sample.censored);
    sum += static_cast<double>(w.sample.stopping_time);
  }
  CHECK(std::abs(sum / runs - 100.0) < 5.0);
}

TEST_CASE("biased walk") {
  RngStream s(1, 0);
  CHECK(simulate_biased_walk(s, 7, 7, 0.75, 100).sample.stopping_time == 0);
  for (int i = 0; i < 20; ++i) CHECK(simulate_biased_walk(s, 5, 0, 1.0, 100).sample.stopping_time == 5);
  CHECK_THROWS_AS(simulate_biased_walk(s, 5, 0, 0.5, 100), std::invalid_argument);
  CHECK_THROWS_AS(simulate_biased_walk(s, 5, 6, 0.7, 100), std::invalid_argument);

  const double exact = oracle::mean_hitting_times(oracle::biased_walk(50, 0.75))[0];
  double sum = 0.0;
  const int runs = 10'000;
  for (int i = 0; i < runs; ++i) {
    RngStream r(77, i);
    sum += static_cast<double>(simulate_biased_walk(r, 50, 0, 0.75, 100'000).sample.stopping_time);
  }
  const double mean = sum / runs;
  CHECK(mean <= 100.0);
  CHECK(std::abs(mean - exact) / exact < 0.05);
}

TEST_CASE("lazy walk") {
  RngStream s(1, 0);
  CHECK(simulate_lazy_zero_drift_walk(s, 10, 0, 0.5, 100).sample.stopping_time == 0);
  CHECK_THROWS_AS(simulate_lazy_zero_drift_walk(s, 10, 3, 0.0, 100), std::invalid_argument);
  CHECK_THROWS_AS(simulate_lazy_zero_drift_walk(s, 10, 3, 1.5, 100), std::invalid_argument);

  // delta = 1: never holds, so every step has size one
  for (int i = 0; i < 50; ++i) {
    const auto w = simulate_lazy_zero_drift_walk(s, 6, 3, 1.0, 10'000, true);
    REQUIRE(w.trajectory.has_value());
    for (std::size_t t = 1; t < w.trajectory->values.size(); ++t) {
      CHECK(std::abs(w.trajectory->values[t] - w.trajectory->values[t - 1]) == 1.0);
    }
  }

  const double exact = oracle::mean_hitting_times(oracle::lazy_walk(10, 0.5))[10];
  double sum = 0.0;
  const int runs = 10'000;
  for (int i = 0; i < runs; ++i) {
    RngStream r(31, i);
    sum += static_cast<double>(simulate_lazy_zero_drift_walk(r, 10, 10, 0.5, 1'000'000).sample.stopping_time);
  }
  CHECK(std::abs(sum / runs - exact) / exact < 0.05);
}

TEST_CASE("censoring and recorded trajectories") {
  RngStream s(8, 8);
  const auto w = simulate_fair_walk(s, 1000, 500, 25, true);
  CHECK(w.sample.censored);
  CHECK(w.sample.stopping_time == 25);
  REQUIRE(w.trajectory.has_value());
  CHECK(w.trajectory->censored);
  CHECK(w.trajectory->values.size() == 26);
  CHECK(w.trajectory->values.front() == 500);

  for (int i = 0; i < 100; ++i) {
    RngStream r(8, i);
    const auto v = simulate_biased_walk(r, 12, 3, 0.6, 100'000, true);
    REQUIRE_FALSE(v.sample.censored);
    CHECK(v.trajectory->values.size() == v.sample.stopping_time + 1);
    CHECK(v.trajectory->values.back() == 12);
    CHECK(v.sample.run_id == static_cast<std::uint64_t>(i));
    CHECK(v.sample.seed_used == 8);
  }
}

TEST_CASE("same stream, same sample") {
  RngStream a(5, 9), b(5, 9);
  CHECK(simulate_lazy_zero_drift_walk(a, 10, 5, 0.3, 5000).sample ==
        simulate_lazy_zero_drift_walk(b, 10, 5, 0.3, 5000).sample);
}
