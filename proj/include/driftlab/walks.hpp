#pragma once

#include <cstdint>
#include <optional>

#include "driftlab/rng.hpp"
#include "driftlab/trajectory.hpp"

namespace driftlab {

// Synthetic processes with exactly known hitting-time laws, used to check the
// bound formulas end to end. Every walk runs at most `cap` steps; a run still
// outside its target after `cap` steps is censored with stopping_time = cap.
struct WalkResult {
  HittingTimeSample sample;
  std::optional<Trajectory> trajectory;  // set when record == true
};

// +-1 with probability 1/2 each; stops on {0, b}. Requires x0 <= b.
WalkResult simulate_fair_walk(RngStream& stream, std::uint64_t b, std::uint64_t x0,
                              std::uint64_t cap, bool record = false);

// +1 w.p. p_up, -1 otherwise, forced +1 at 0; stops when X >= b.
// Requires x0 <= b and p_up in (1/2, 1]. Drift is 2 p_up - 1 everywhere.
WalkResult simulate_biased_walk(RngStream& stream, std::uint64_t b, std::uint64_t x0, double p_up,
                                std::uint64_t cap, bool record = false);

// Lazy zero-drift walk on [0, b]: +-1 w.p. delta/2 each, hold otherwise; at b
// moves down w.p. delta. Stops when X <= 0. Requires delta in (0, 1].
WalkResult simulate_lazy_zero_drift_walk(RngStream& stream, std::uint64_t b, std::uint64_t x0,
                                         double delta, std::uint64_t cap, bool record = false);

}  // namespace driftlab
