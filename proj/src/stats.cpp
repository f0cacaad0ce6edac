#include "driftlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "driftlab/error.hpp"

namespace driftlab::stats {

std::vector<Observation> observations(std::span<const HittingTimeSample> samples) {
  std::vector<Observation> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back({static_cast<double>(s.stopping_time), s.censored});
  return out;
}

DriftEstimate estimate_drift(std::span<const Trajectory> trajectories, bool per_state_bins) {
  DriftEstimate est;
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& traj : trajectories) {
    for (std::size_t t = 0; t + 1 < traj.values.size(); ++t) {
      const double d = traj.values[t + 1] - traj.values[t];
      sum += d;
      sum_sq += d * d;
      ++est.transitions;
      if (per_state_bins) {
        auto& bin = est.bins[static_cast<long long>(std::floor(traj.values[t]))];
        bin.mean_drift += d;
        bin.second_moment += d * d;
        ++bin.count;
      }
    }
  }
  if (est.transitions == 0) throw EmptySampleError("estimate_drift: no transitions");
  const auto n = static_cast<double>(est.transitions);
  est.mean_drift = sum / n;
  est.second_moment = sum_sq / n;
  for (auto& [state, bin] : est.bins) {
    bin.mean_drift /= static_cast<double>(bin.count);
    bin.second_moment /= static_cast<double>(bin.count);
  }
  return est;
}

ProcessClass classify(const DriftEstimate& est, const ProcessClassParams& params) {
  ProcessClass out;
  const bool moment_ok = est.second_moment >= params.delta;
  out.variance_dominated = moment_ok && est.mean_drift >= -params.tolerance;
  out.variance_transformed =
      moment_ok && est.mean_drift < 0.0 && est.mean_drift >= -params.c / params.n - params.tolerance;
  return out;
}

std::vector<double> default_eta_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 500; ++i) grid.push_back(i / 100.0);
  return grid;
}

std::vector<double> step_sizes(std::span<const Trajectory> trajectories) {
  std::vector<double> out;
  for (const auto& traj : trajectories) {
    for (std::size_t t = 0; t + 1 < traj.values.size(); ++t) {
      out.push_back(std::fabs(traj.values[t + 1] - traj.values[t]));
    }
  }
  return out;
}

StepTailFit fit_step_tail(std::span<const double> steps, std::span<const double> eta_grid) {
  if (steps.empty()) throw EmptySampleError("fit_step_tail: no transitions");
  if (eta_grid.empty()) throw std::invalid_argument("fit_step_tail: empty eta grid");
  const auto total = static_cast<double>(steps.size());

  // freq[j-1] = fraction of steps with |dX| >= j, j = 1..J.
  const double biggest = *std::max_element(steps.begin(), steps.end());
  const auto J = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(biggest)));
  std::vector<double> at_least(J + 1, 0.0);
  for (const double s : steps) {
    const auto j = std::min(J, static_cast<std::size_t>(std::floor(s)));
    at_least[j] += 1.0;
  }
  for (std::size_t j = J; j-- > 1;) at_least[j] += at_least[j + 1];
  std::vector<double> freq(J);
  for (std::size_t j = 1; j <= J; ++j) freq[j - 1] = at_least[j] / total;

  StepTailFit best;
  double best_score = std::numeric_limits<double>::infinity();
  for (const double eta : eta_grid) {
    if (!(eta > 0.0)) throw std::invalid_argument("fit_step_tail: eta must be positive");
    double r = 0.0;
    for (std::size_t j = 1; j <= J; ++j) {
      r = std::max(r, freq[j - 1] * std::pow(1.0 + eta, static_cast<double>(j)));
    }
    // no jump of size >= 1 at all: one observation's worth keeps r positive
    if (r == 0.0) r = (1.0 + eta) / total;
    const double score = r / std::log1p(eta);
    if (score < best_score) {
      best_score = score;
      best.r_hat = r;
      best.eta_hat = eta;
    }
  }
  best.max_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j <= J; ++j) {
    const double v = freq[j - 1] - best.r_hat / std::pow(1.0 + best.eta_hat, static_cast<double>(j));
    best.max_violation = std::max(best.max_violation, v);
  }
  return best;
}

StepTailFit fit_step_tail(std::span<const Trajectory> trajectories, std::span<const double> eta_grid) {
  const auto steps = step_sizes(trajectories);
  return fit_step_tail(std::span<const double>(steps), eta_grid);
}

bool TailReport::any_violated() const noexcept {
  return std::any_of(rows.begin(), rows.end(), [](const TailRow& r) { return r.violated; });
}

double hoeffding_margin(std::uint64_t n, double confidence) {
  return std::sqrt(std::log(1.0 / (1.0 - confidence)) / (2.0 * static_cast<double>(n)));
}

TailReport compare_bound(std::span<const Observation> samples, const BoundSpec& spec,
                         std::vector<double> tau_grid, double confidence) {
  if (samples.empty()) throw EmptySampleError("compare_bound: no samples");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw std::invalid_argument("compare_bound: confidence must lie in (0,1)");
  }
  spec.validate();
  std::sort(tau_grid.begin(), tau_grid.end());

  TailReport rep;
  rep.samples = samples.size();
  rep.confidence = confidence;
  rep.inclusive = tail_is_inclusive(spec.kind);
  for (const auto& s : samples) rep.censored += s.censored ? 1 : 0;
  const double margin = hoeffding_margin(rep.samples, confidence);

  for (const double tau : tau_grid) {
    std::uint64_t exceed = 0;
    for (const auto& s : samples) {
      if (s.censored || (rep.inclusive ? s.value >= tau : s.value > tau)) ++exceed;
    }
    TailRow row;
    row.tau = tau;
    row.empirical_survival = static_cast<double>(exceed) / static_cast<double>(rep.samples);
    row.margin = margin;
    row.hoeffding_upper = row.empirical_survival + margin;
    row.bound = tail_probability_upper(spec, tau);
    row.violated = row.empirical_survival - margin > row.bound;
    rep.rows.push_back(row);
  }
  return rep;
}

TailReport compare_bound(std::span<const HittingTimeSample> samples, const BoundSpec& spec,
                         std::vector<double> tau_grid, double confidence) {
  const auto obs = observations(samples);
  return compare_bound(std::span<const Observation>(obs), spec, std::move(tau_grid), confidence);
}

std::optional<double> SummaryTable::frequency(double k) const {
  for (const auto& [kk, fr] : freq_at_multiples) {
    if (kk == k) return fr;
  }
  return std::nullopt;
}

SummaryTable summary_table(std::span<const Observation> samples, std::vector<double> k_list) {
  SummaryTable tab;
  tab.samples = samples.size();
  double sum = 0.0;
  for (const auto& s : samples) {
    if (s.censored) {
      ++tab.censored;
    } else {
      sum += s.value;
    }
  }
  const auto finished = tab.samples - tab.censored;
  if (finished == 0) throw EmptySampleError("summary_table: no non-censored samples");
  tab.mean = sum / static_cast<double>(finished);

  std::sort(k_list.begin(), k_list.end());
  k_list.erase(std::unique(k_list.begin(), k_list.end()), k_list.end());
  for (const double k : k_list) {
    const double limit = k * tab.mean;
    // a censored run's true value is unknown beyond the cap; never counted as <= limit
    const auto hits = std::count_if(samples.begin(), samples.end(),
                                    [&](const Observation& s) { return !s.censored && s.value <= limit; });
    tab.freq_at_multiples.emplace_back(k, static_cast<double>(hits) / static_cast<double>(tab.samples));
  }
  return tab;
}

SummaryTable summary_table(std::span<const HittingTimeSample> samples, std::vector<double> k_list) {
  const auto obs = observations(samples);
  return summary_table(std::span<const Observation>(obs), std::move(k_list));
}

std::vector<HistogramBin> histogram_export(std::span<const Observation> samples, std::uint32_t bin_count) {
  if (bin_count == 0) throw std::invalid_argument("histogram_export: bin_count must be >= 1");
  std::vector<double> vals;
  for (const auto& s : samples) {
    if (!s.censored) vals.push_back(s.value);
  }
  if (vals.empty()) throw EmptySampleError("histogram_export: no non-censored samples");
  const auto [lo_it, hi_it] = std::minmax_element(vals.begin(), vals.end());
  const double lo = *lo_it;
  const double hi = *hi_it > lo ? *hi_it : lo + 1.0;
  const double width = (hi - lo) / bin_count;

  std::vector<HistogramBin> bins(bin_count);
  for (std::uint32_t i = 0; i < bin_count; ++i) {
    bins[i].low = lo + width * i;
    bins[i].high = i + 1 == bin_count ? hi : lo + width * (i + 1);
  }
  for (const double v : vals) {
    auto i = static_cast<std::uint32_t>((v - lo) / width);
    if (i >= bin_count) i = bin_count - 1;
    ++bins[i].count;
  }
  const auto total = static_cast<double>(vals.size());
  for (auto& b : bins) b.density = static_cast<double>(b.count) / (total * width);
  return bins;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("linear_fit: need >= 2 paired points");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("linear_fit: x values are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

}  // namespace driftlab::stats
