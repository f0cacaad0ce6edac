#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "driftlab/bounds.hpp"
#include "driftlab/trajectory.hpp"

namespace driftlab::stats {

// One scalar outcome: a stopping time or a total regret. Censored values are
// lower bounds on the true outcome.
struct Observation {
  double value = 0.0;
  bool censored = false;
};

std::vector<Observation> observations(std::span<const HittingTimeSample> samples);

struct DriftBin {
  double mean_drift = 0.0;
  double second_moment = 0.0;
  std::uint64_t count = 0;
};

struct DriftEstimate {
  double mean_drift = 0.0;
  double second_moment = 0.0;
  std::uint64_t transitions = 0;
  std::map<long long, DriftBin> bins;  // keyed by floor(X_t); empty unless requested
};

// Throws EmptySampleError if no trajectory has a transition.
DriftEstimate estimate_drift(std::span<const Trajectory> trajectories, bool per_state_bins = false);

struct ProcessClassParams {
  double n = 1.0;
  double c = 1.0;
  double delta = 1.0;  // lower bound demanded of the second moment
  double tolerance = 0.0;
};

struct ProcessClass {
  bool variance_dominated = false;   // mean >= -tol and second moment >= delta
  bool variance_transformed = false; // mean in [-c/n - tol, 0) and second moment >= delta
};

ProcessClass classify(const DriftEstimate& est, const ProcessClassParams& params);

struct StepTailFit {
  double r_hat = 0.0;
  double eta_hat = 0.0;
  double max_violation = 0.0;  // max_j freq(|dX| >= j) - r/(1+eta)^j
};

std::vector<double> default_eta_grid();

// Absolute increments |X_{t+1} - X_t| of every trajectory.
std::vector<double> step_sizes(std::span<const Trajectory> trajectories);

// Throws EmptySampleError on no steps, std::invalid_argument on an empty or
// non-positive eta grid.
StepTailFit fit_step_tail(std::span<const double> steps, std::span<const double> eta_grid);
StepTailFit fit_step_tail(std::span<const Trajectory> trajectories, std::span<const double> eta_grid);

struct TailRow {
  double tau = 0.0;
  double empirical_survival = 0.0;
  double margin = 0.0;
  double hoeffding_upper = 0.0;  // survival + margin
  double bound = 0.0;
  bool violated = false;
};

struct TailReport {
  std::uint64_t samples = 0;
  std::uint64_t censored = 0;
  double confidence = 0.0;
  bool inclusive = false;  // rows estimate Pr(T >= tau) rather than Pr(T > tau)
  std::vector<TailRow> rows;  // ascending tau

  bool any_violated() const noexcept;
};

double hoeffding_margin(std::uint64_t n, double confidence);

// Throws EmptySampleError on no samples, std::invalid_argument on a
// confidence outside (0,1).
TailReport compare_bound(std::span<const Observation> samples, const BoundSpec& spec,
                         std::vector<double> tau_grid, double confidence);
TailReport compare_bound(std::span<const HittingTimeSample> samples, const BoundSpec& spec,
                         std::vector<double> tau_grid, double confidence);

struct SummaryTable {
  double mean = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t censored = 0;
  std::vector<std::pair<double, double>> freq_at_multiples;  // (k, Fr(T <= k mean)), ascending k

  std::optional<double> frequency(double k) const;
};

// Throws EmptySampleError when every sample is censored.
SummaryTable summary_table(std::span<const Observation> samples, std::vector<double> k_list);
SummaryTable summary_table(std::span<const HittingTimeSample> samples, std::vector<double> k_list);

struct HistogramBin {
  double low = 0.0;
  double high = 0.0;
  std::uint64_t count = 0;
  double density = 0.0;
};

// Non-censored values only. Throws std::invalid_argument for bin_count == 0
// and EmptySampleError when nothing is left to bin.
std::vector<HistogramBin> histogram_export(std::span<const Observation> samples, std::uint32_t bin_count);

// Least squares y = a + b x; returns (a, b, R^2).
struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r_squared = 0.0;
};
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

}  // namespace driftlab::stats
