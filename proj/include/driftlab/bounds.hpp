#pragma once

#include <cstdint>
#include <string_view>

namespace driftlab {

enum class BoundKind {
  NegativeDriftVariance,  // zero/negative drift, second-moment condition, T = first time X <= 0
  StandardVariance,       // nonnegative drift, second moment >= delta, T = first time X >= b
  TwoAbsorbing,           // martingale absorbed at 0 or b
  Additive,               // drift >= epsilon, T = first time X >= b
  KotzingPolynomial,      // polynomial tail (1/r)^(1/(ell ln c)) at tau = r n^2
};

std::string_view to_string(BoundKind kind) noexcept;
// Throws std::invalid_argument for unknown names.
BoundKind bound_kind_from_string(std::string_view name);

struct BoundSpec {
  BoundKind kind = BoundKind::StandardVariance;
  double delta = 1.0;
  double b = 1.0;
  double epsilon = 0.0;
  double x0 = 0.0;
  // KotzingPolynomial only.
  std::uint64_t n = 0;
  double ell = 0.0;
  double c = 0.0;

  // Throws ConfigError naming the first invalid field.
  void validate() const;
};

// Upper bound on E[T]. Throws UnsupportedKindError for KotzingPolynomial.
double expected_time_upper(const BoundSpec& spec);

// Upper bound on Pr(T > tau) (or Pr(T >= tau), per the kind's statement),
// clamped to [0,1]. Throws std::invalid_argument for tau <= 0.
double tail_probability_upper(const BoundSpec& spec, double tau);

// Whether the kind's tail statement is about Pr(T >= tau) rather than Pr(T > tau).
bool tail_is_inclusive(BoundKind kind) noexcept;

}  // namespace driftlab
