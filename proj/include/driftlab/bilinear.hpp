#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "driftlab/bits.hpp"
#include "driftlab/rng.hpp"
#include "driftlab/trajectory.hpp"

namespace driftlab::bilinear {

__extension__ typedef __int128 Int128;

// `revised` carries the tie-breaking terms E1 = max{(an-|y|)^2,1}/n^3 and
// E2 = -max{(bn-|x|)^2,1}/n^3; `original` omits them.
enum class Variant { revised, original };

std::string_view to_string(Variant v) noexcept;
Variant variant_from_string(std::string_view name);  // throws std::invalid_argument

class BilinearParams {
 public:
  // Throws ConfigError unless n >= 2, alpha and beta lie in (0,1), and
  // alpha*n, beta*n are integers (otherwise OPT is empty).
  static BilinearParams make(std::uint32_t n, double alpha, double beta, Variant variant = Variant::revised);

  std::uint32_t n() const noexcept { return n_; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  std::uint32_t alpha_n() const noexcept { return alpha_n_; }
  std::uint32_t beta_n() const noexcept { return beta_n_; }
  Variant variant() const noexcept { return variant_; }

 private:
  BilinearParams() = default;
  std::uint32_t n_ = 0;
  double alpha_ = 0, beta_ = 0;
  std::uint32_t alpha_n_ = 0, beta_n_ = 0;
  Variant variant_ = Variant::revised;
};

// Pair of bit strings with incrementally maintained one-counts.
class SearchPair {
 public:
  SearchPair(Bits x, Bits y);

  const Bits& x() const noexcept { return x_; }
  const Bits& y() const noexcept { return y_; }
  std::uint32_t ones_x() const noexcept { return ones_x_; }
  std::uint32_t ones_y() const noexcept { return ones_y_; }
  std::uint32_t n() const noexcept { return static_cast<std::uint32_t>(x_.size()); }

  void flip_x(std::uint32_t i) noexcept;
  void flip_y(std::uint32_t i) noexcept;
  // Recounts from the bits; false when the caches have drifted.
  bool counts_consistent() const noexcept;

  friend bool operator==(const SearchPair&, const SearchPair&) = default;

 private:
  Bits x_, y_;
  std::uint32_t ones_x_ = 0, ones_y_ = 0;
};

// n^3 * BILINEAR(x,y), exact. Throws std::invalid_argument for counts > n.
Int128 scaled_value(const BilinearParams& p, std::uint32_t ones_x, std::uint32_t ones_y);
double bilinear_value(const BilinearParams& p, std::uint32_t ones_x, std::uint32_t ones_y);

// (x1,y1) dominates (x2,y2) iff g(x1,y2) >= g(x1,y1) >= g(x2,y1); compared
// exactly on the scaled integer values.
bool dominates_counts(const BilinearParams& p, std::uint32_t x1, std::uint32_t y1, std::uint32_t x2,
                      std::uint32_t y2);
bool dominates(const BilinearParams& p, const SearchPair& candidate, const SearchPair& incumbent);

// |beta n - |x|| + |alpha n - |y||; zero exactly on OPT.
std::uint32_t manhattan_distance(const BilinearParams& p, std::uint32_t ones_x, std::uint32_t ones_y);
std::uint32_t manhattan_distance(const BilinearParams& p, const SearchPair& pair);

enum class Quadrant { at_optimum = 0, first = 1, second = 2, third = 3, fourth = 4 };

std::string_view to_string(Quadrant q) noexcept;
Quadrant quadrant(const BilinearParams& p, std::uint32_t ones_x, std::uint32_t ones_y);
Quadrant quadrant(const BilinearParams& p, const SearchPair& pair);

SearchPair random_pair(RngStream& stream, std::uint32_t n);
// First beta*n bits of x and first alpha*n bits of y set.
SearchPair canonical_opt(const BilinearParams& p);

// One RLS-PD iteration: flip one of the 2n bits chosen uniformly and keep the
// result iff it dominates the current pair. Returns whether it was accepted.
bool rls_pd_step_inplace(const BilinearParams& p, SearchPair& pair, RngStream& stream);
SearchPair rls_pd_step(const BilinearParams& p, const SearchPair& pair, RngStream& stream);

struct RunOutcome {
  std::uint64_t iterations = 0;
  bool censored = false;
  Quadrant quadrant_at_start = Quadrant::at_optimum;
  Quadrant quadrant_at_end = Quadrant::at_optimum;
  std::optional<Trajectory> trajectory;  // M_t
};

// Iterates until M = 0 or `cap` iterations. A missing `init` is sampled
// uniformly from the stream.
RunOutcome run_until_opt(const BilinearParams& p, std::optional<SearchPair> init, RngStream& stream,
                         std::uint64_t cap, bool record = false);

// From canonical_opt, iterates until M >= (A+B) sqrt(n) or `cap` iterations.
RunOutcome run_forgetting(const BilinearParams& p, double A, double B, RngStream& stream,
                          std::uint64_t cap, bool record = false);

// 20 n^1.5, rounded up.
std::uint64_t default_runtime_cap(std::uint32_t n);

}  // namespace driftlab::bilinear
