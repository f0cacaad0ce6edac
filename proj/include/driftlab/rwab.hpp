#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "driftlab/rng.hpp"

namespace driftlab::bandit {

enum class Arm : std::uint8_t { a1 = 0, a2 = 1 };

inline Arm other(Arm a) noexcept { return a == Arm::a1 ? Arm::a2 : Arm::a1; }

// `mean_gap`: a step's regret is mu(a*) minus the mean of the pulled arms'
// means. `realized`: the same with sampled rewards, the optimal arm's reward
// drawn as a counterfactual when it was not pulled.
enum class Accounting { mean_gap, realized };

// `call`: a whole CHALLENGE occupies one iteration of the horizon loop and the
// reward distribution is frozen while it runs. `iteration`: every challenge
// iteration consumes one horizon round and changes may land mid-challenge.
enum class ChallengeClock { call, iteration };

std::string_view to_string(Accounting a) noexcept;
std::string_view to_string(ChallengeClock c) noexcept;
Accounting accounting_from_string(std::string_view s);
ChallengeClock challenge_clock_from_string(std::string_view s);

// Two-armed Bernoulli bandit whose arm means swap at each change time.
struct BanditEnv {
  std::uint64_t horizon = 0;                // T
  std::uint64_t changes = 0;                // L
  std::array<double, 2> mu{0.0, 0.0};       // initial means of a1, a2
  std::vector<std::uint64_t> change_times;  // sorted, distinct, in [2, T]

  // Throws ConfigError on L == 0, L >= T, means outside [0,1] or a change
  // schedule that does not match L.
  void validate() const;
};

// L distinct rounds drawn uniformly without replacement from {2, ..., T}
// (Floyd's algorithm), sorted. Throws std::invalid_argument if L >= T.
std::vector<std::uint64_t> sample_change_times(RngStream& stream, std::uint64_t horizon, std::uint64_t changes);

BanditEnv make_env(RngStream& stream, std::uint64_t horizon, std::uint64_t changes, double mu1, double mu2);

struct RwabOptions {
  Accounting accounting = Accounting::mean_gap;
  ChallengeClock clock = ChallengeClock::call;
  bool record_per_round = false;
};

struct RegretLedger {
  double total = 0.0;
  std::vector<double> per_round;  // one entry per plain pull or challenge iteration
  std::uint64_t eras = 0;
  std::uint64_t sub_eras = 0;
  std::uint64_t swaps = 0;
  std::uint64_t mistakes = 0;
  std::uint64_t challenges = 0;
  std::uint64_t challenge_iterations = 0;
  std::uint64_t plain_pulls = 0;
  std::uint64_t rounds = 0;  // horizon rounds consumed; equals T after a full run
};

struct ChallengeResult {
  bool swapped = false;
  bool mistake = false;
  bool horizon_exhausted = false;  // left without reaching either boundary
  bool change_during = false;
  std::uint64_t iterations = 0;
  double final_value = 0.0;  // S at exit
};

/// Random Walk with Asymmetric Boundaries on a two-armed bandit.
///
/// Each round, with probability sqrt(L/T), a CHALLENGE pulls a+ and a- in
/// lockstep and accumulates S += r+ - r- until S >= 1 (keep a+) or
/// S <= -sqrt(T/L) (swap the arms); otherwise a+ is pulled once.
class Rwab {
 public:
  Rwab(const BanditEnv& env, RngStream& stream, RwabOptions options = {});

  Arm plus() const noexcept { return plus_; }
  Arm minus() const noexcept { return other(plus_); }
  double boundary() const noexcept { return boundary_; }
  double challenge_probability() const noexcept { return challenge_prob_; }
  std::uint64_t rounds_started() const noexcept { return round_; }
  bool finished() const noexcept { return round_ >= env_.horizon; }
  // Current means of a1, a2 (after any changes applied so far).
  const std::array<double, 2>& means() const noexcept { return mu_; }

  // Starts the next round with a CHALLENGE. Throws std::logic_error once the
  // horizon is used up.
  ChallengeResult challenge();
  // Starts the next round with a single pull of a+.
  void pull();
  // Plays the remaining rounds and returns the closed ledger.
  RegretLedger run();

  // Ledger so far; eras/sub_eras are only final after run().
  const RegretLedger& ledger() const noexcept { return ledger_; }

 private:
  bool begin_round();  // returns whether a change was applied
  Arm optimal() const noexcept { return mu_[0] >= mu_[1] ? Arm::a1 : Arm::a2; }
  double mean(Arm a) const noexcept { return mu_[static_cast<int>(a)]; }
  void add_step(double regret);
  void close_ledger();

  const BanditEnv& env_;
  RngStream& stream_;
  RwabOptions options_;
  double boundary_;
  double challenge_prob_;
  std::array<double, 2> mu_;
  Arm plus_ = Arm::a1;
  std::uint64_t round_ = 0;
  std::size_t next_change_ = 0;
  std::vector<std::uint64_t> swap_boundaries_;
  RegretLedger ledger_;
};

RegretLedger run_rwab(const BanditEnv& env, RngStream& stream, RwabOptions options = {});

struct RegretBound {
  double bound = 0.0;       // 480 eps (L + sqrt(L T))
  double confidence = 0.0;  // max(0, 1 - 2 exp(-sqrt(eps)/e))
};

// Throws std::invalid_argument for eps < 1.
RegretBound theoretical_regret_bound(std::uint64_t horizon, std::uint64_t changes, double eps);

}  // namespace driftlab::bandit
