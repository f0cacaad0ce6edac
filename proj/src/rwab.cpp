#include "driftlab/rwab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>

#include "driftlab/error.hpp"

namespace driftlab::bandit {

std::string_view to_string(Accounting a) noexcept { return a == Accounting::mean_gap ? "mean_gap" : "realized"; }
std::string_view to_string(ChallengeClock c) noexcept { return c == ChallengeClock::call ? "call" : "iteration"; }

Accounting accounting_from_string(std::string_view s) {
  if (s == "mean_gap") return Accounting::mean_gap;
  if (s == "realized") return Accounting::realized;
  throw std::invalid_argument("unknown accounting '" + std::string(s) + "'");
}

ChallengeClock challenge_clock_from_string(std::string_view s) {
  if (s == "call") return ChallengeClock::call;
  if (s == "iteration") return ChallengeClock::iteration;
  throw std::invalid_argument("unknown challenge clock '" + std::string(s) + "'");
}

void BanditEnv::validate() const {
  if (horizon < 1) throw ConfigError("T", "must be >= 1");
  if (changes < 1) throw ConfigError("L", "must be >= 1 (the challenge boundary sqrt(T/L) needs L > 0)");
  if (changes >= horizon) throw ConfigError("L", "must be < T");
  for (int i = 0; i < 2; ++i) {
    if (!(mu[i] >= 0.0 && mu[i] <= 1.0)) throw ConfigError(i == 0 ? "mu1" : "mu2", "must lie in [0,1]");
  }
  if (change_times.size() != changes) throw ConfigError("change_times", "must hold exactly L entries");
  for (std::size_t i = 0; i < change_times.size(); ++i) {
    if (change_times[i] < 2 || change_times[i] > horizon) throw ConfigError("change_times", "entries must lie in [2, T]");
    if (i > 0 && change_times[i] <= change_times[i - 1]) throw ConfigError("change_times", "must be strictly increasing");
  }
}

std::vector<std::uint64_t> sample_change_times(RngStream& stream, std::uint64_t horizon, std::uint64_t changes) {
  if (changes >= horizon) throw std::invalid_argument("sample_change_times: L must be < T");
  // Floyd: a uniform L-subset of {1..N} with N = T-1, shifted by one.
  const std::uint64_t pool = horizon - 1;
  std::set<std::uint64_t> chosen;
  for (std::uint64_t j = pool - changes + 1; j <= pool && changes > 0; ++j) {
    const std::uint64_t t = stream.next_index(j) + 1;
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::uint64_t> out;
  out.reserve(chosen.size());
  for (const auto t : chosen) out.push_back(t + 1);
  return out;
}

BanditEnv make_env(RngStream& stream, std::uint64_t horizon, std::uint64_t changes, double mu1, double mu2) {
  BanditEnv env;
  env.horizon = horizon;
  env.changes = changes;
  env.mu = {mu1, mu2};
  if (changes < horizon) env.change_times = sample_change_times(stream, horizon, changes);
  env.validate();
  return env;
}

Rwab::Rwab(const BanditEnv& env, RngStream& stream, RwabOptions options)
    : env_(env), stream_(stream), options_(options), mu_(env.mu) {
  env_.validate();
  const double ratio = static_cast<double>(env_.horizon) / static_cast<double>(env_.changes);
  boundary_ = std::sqrt(ratio);
  challenge_prob_ = std::sqrt(1.0 / ratio);
}

bool Rwab::begin_round() {
  ++round_;
  ++ledger_.rounds;
  bool changed = false;
  while (next_change_ < env_.change_times.size() && env_.change_times[next_change_] == round_) {
    std::swap(mu_[0], mu_[1]);
    ++next_change_;
    changed = true;
  }
  return changed;
}

void Rwab::add_step(double regret) {
  ledger_.total += regret;
  if (options_.record_per_round) ledger_.per_round.push_back(regret);
}

void Rwab::pull() {
  if (finished()) throw std::logic_error("Rwab::pull: horizon exhausted");
  begin_round();
  ++ledger_.plain_pulls;
  const Arm best = optimal();
  if (options_.accounting == Accounting::mean_gap) {
    add_step(mean(best) - mean(plus_));
    return;
  }
  const double r = stream_.next_bernoulli(mean(plus_)) ? 1.0 : 0.0;
  const double r_best = plus_ == best ? r : (stream_.next_bernoulli(mean(best)) ? 1.0 : 0.0);
  add_step(r_best - r);
}

ChallengeResult Rwab::challenge() {
  if (finished()) throw std::logic_error("Rwab::challenge: horizon exhausted");
  begin_round();
  ++ledger_.challenges;
  ChallengeResult res;
  const bool started_correct = plus_ == optimal();
  // Per-call challenges never see the horizon; T iterations bounds the
  // otherwise endless walk of two equal deterministic arms.
  const std::uint64_t iteration_limit = env_.horizon;
  double s_value = 0.0;
  for (;;) {
    if (res.iterations > 0) {
      if (options_.clock == ChallengeClock::iteration) {
        if (finished()) {
          res.horizon_exhausted = true;
          break;
        }
        if (begin_round()) res.change_during = true;
      } else if (res.iterations == iteration_limit) {
        res.horizon_exhausted = true;
        break;
      }
    }
    const Arm minus_arm = other(plus_);
    const double r_plus = stream_.next_bernoulli(mean(plus_)) ? 1.0 : 0.0;
    const double r_minus = stream_.next_bernoulli(mean(minus_arm)) ? 1.0 : 0.0;
    const Arm best = optimal();
    if (options_.accounting == Accounting::mean_gap) {
      add_step(mean(best) - 0.5 * (mean(plus_) + mean(minus_arm)));
    } else {
      const double r_best = best == plus_ ? r_plus : r_minus;
      add_step(r_best - 0.5 * (r_plus + r_minus));
    }
    ++res.iterations;
    ++ledger_.challenge_iterations;
    s_value += r_plus - r_minus;
    if (s_value >= 1.0) break;
    if (s_value <= -boundary_) {
      plus_ = minus_arm;
      res.swapped = true;
      break;
    }
  }
  res.final_value = s_value;
  if (res.swapped) {
    ++ledger_.swaps;
    if (started_correct && !res.change_during) {
      res.mistake = true;
      ++ledger_.mistakes;
    }
    if (round_ < env_.horizon) swap_boundaries_.push_back(round_ + 1);
  }
  return res;
}

void Rwab::close_ledger() {
  ledger_.eras = 1 + next_change_;
  std::set<std::uint64_t> boundaries(env_.change_times.begin(), env_.change_times.begin() + next_change_);
  boundaries.insert(swap_boundaries_.begin(), swap_boundaries_.end());
  ledger_.sub_eras = 1 + boundaries.size();
}

RegretLedger Rwab::run() {
  while (!finished()) {
    if (stream_.next_bernoulli(challenge_prob_)) {
      challenge();
    } else {
      pull();
    }
  }
  close_ledger();
  return ledger_;
}

RegretLedger run_rwab(const BanditEnv& env, RngStream& stream, RwabOptions options) {
  Rwab algo(env, stream, options);
  return algo.run();
}

RegretBound theoretical_regret_bound(std::uint64_t horizon, std::uint64_t changes, double eps) {
  if (!(eps >= 1.0)) throw std::invalid_argument("theoretical_regret_bound: eps must be >= 1");
  const double T = static_cast<double>(horizon);
  const double L = static_cast<double>(changes);
  RegretBound out;
  out.bound = 480.0 * eps * (L + std::sqrt(L * T));
  out.confidence = std::max(0.0, 1.0 - 2.0 * std::exp(-std::sqrt(eps) / std::numbers::e));
  return out;
}

}  // namespace driftlab::bandit
