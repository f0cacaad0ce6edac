#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace driftlab {

// Potential values X_0, X_1, ... of one simulation run. When `censored` is
// set the run hit its iteration cap and values holds cap + 1 entries.
struct Trajectory {
  std::vector<double> values;
  bool censored = false;
  std::uint64_t cap = 0;

  std::size_t size() const noexcept { return values.size(); }
};

// Scalar outcome of one replication. `seed_used` is the master seed; together
// with run_id (the stream id) it reproduces the run.
struct HittingTimeSample {
  std::uint64_t run_id = 0;
  std::uint64_t stopping_time = 0;
  bool censored = false;
  std::uint64_t seed_used = 0;

  friend bool operator==(const HittingTimeSample&, const HittingTimeSample&) = default;
};

// Smallest t >= k with target(X_t); nullopt when no recorded step qualifies.
template <class Predicate>
std::optional<std::size_t> kth_hitting_time(const Trajectory& traj, std::size_t k,
                                            Predicate&& target) {
  for (std::size_t t = k; t < traj.values.size(); ++t) {
    if (target(traj.values[t])) return t;
  }
  return std::nullopt;
}

template <class Predicate>
std::optional<std::size_t> first_hitting_time(const Trajectory& traj, Predicate&& target) {
  return kth_hitting_time(traj, 0, std::forward<Predicate>(target));
}

// CSV `step,value`.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

// CSV `run_id,seed,stopping_time,censored`.
void write_samples_csv(std::ostream& out, std::span<const HittingTimeSample> samples);

}  // namespace driftlab
