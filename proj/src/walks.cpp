#include "driftlab/walks.hpp"

#include <stdexcept>

namespace driftlab {

namespace {

// Runs `step` until `done(x)` or `cap` steps. `step` maps the current state to
// the next one using the stream.
template <class Done, class Step>
WalkResult run_walk(RngStream& stream, std::int64_t x0, std::uint64_t cap, bool record,
                    Done&& done, Step&& step) {
  WalkResult result;
  result.sample.run_id = stream.stream_id();
  result.sample.seed_used = stream.master_seed();
  if (record) {
    result.trajectory.emplace();
    result.trajectory->cap = cap;
    result.trajectory->values.push_back(static_cast<double>(x0));
  }
  std::int64_t x = x0;
  std::uint64_t t = 0;
  while (!done(x)) {
    if (t == cap) {
      result.sample.censored = true;
      break;
    }
    x = step(x);
    ++t;
    if (record) result.trajectory->values.push_back(static_cast<double>(x));
  }
  result.sample.stopping_time = t;
  if (record) result.trajectory->censored = result.sample.censored;
  return result;
}

void check_start(std::uint64_t b, std::uint64_t x0) {
  if (x0 > b) throw std::invalid_argument("walk: x0 must lie in [0, b]");
}

}  // namespace

WalkResult simulate_fair_walk(RngStream& stream, std::uint64_t b, std::uint64_t x0,
                              std::uint64_t cap, bool record) {
  check_start(b, x0);
  const auto top = static_cast<std::int64_t>(b);
  return run_walk(
      stream, static_cast<std::int64_t>(x0), cap, record,
      [top](std::int64_t x) { return x == 0 || x == top; },
      [&stream](std::int64_t x) { return stream.next_bernoulli(0.5) ? x + 1 : x - 1; });
}

WalkResult simulate_biased_walk(RngStream& stream, std::uint64_t b, std::uint64_t x0, double p_up,
                                std::uint64_t cap, bool record) {
  check_start(b, x0);
  if (!(p_up > 0.5 && p_up <= 1.0)) throw std::invalid_argument("biased walk: p_up must lie in (1/2, 1]");
  const auto top = static_cast<std::int64_t>(b);
  return run_walk(
      stream, static_cast<std::int64_t>(x0), cap, record,
      [top](std::int64_t x) { return x >= top; },
      [&stream, p_up](std::int64_t x) {
        if (x == 0) return std::int64_t{1};
        return stream.next_bernoulli(p_up) ? x + 1 : x - 1;
      });
}

WalkResult simulate_lazy_zero_drift_walk(RngStream& stream, std::uint64_t b, std::uint64_t x0,
                                         double delta, std::uint64_t cap, bool record) {
  check_start(b, x0);
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("lazy walk: delta must lie in (0, 1]");
  const auto top = static_cast<std::int64_t>(b);
  return run_walk(
      stream, static_cast<std::int64_t>(x0), cap, record,
      [](std::int64_t x) { return x <= 0; },
      [&stream, delta, top](std::int64_t x) {
        const double u = stream.next_uniform();
        if (x == top) return u < delta ? x - 1 : x;
        if (u < 0.5 * delta) return x + 1;
        if (u < delta) return x - 1;
        return x;
      });
}

}  // namespace driftlab
