#include "driftlab/bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "driftlab/error.hpp"

namespace driftlab {

namespace {

constexpr std::array<std::pair<BoundKind, std::string_view>, 5> kKindNames{{
    {BoundKind::NegativeDriftVariance, "NegativeDriftVariance"},
    {BoundKind::StandardVariance, "StandardVariance"},
    {BoundKind::TwoAbsorbing, "TwoAbsorbing"},
    {BoundKind::Additive, "Additive"},
    {BoundKind::KotzingPolynomial, "KotzingPolynomial"},
}};

double clamp_unit(double p) { return std::clamp(p, 0.0, 1.0); }

}  // namespace

std::string_view to_string(BoundKind kind) noexcept {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

BoundKind bound_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  throw std::invalid_argument("unknown bound kind '" + std::string(name) + "'");
}

void BoundSpec::validate() const {
  if (kind == BoundKind::KotzingPolynomial) {
    if (n < 1) throw ConfigError("n", "must be >= 1");
    if (!(ell > 0.0)) throw ConfigError("ell", "must be > 0");
    if (!(c > 1.0)) throw ConfigError("c", "must be > 1");
    return;
  }
  if (!(b > 0.0)) throw ConfigError("b", "must be > 0");
  if (!(x0 >= 0.0 && x0 <= b)) throw ConfigError("x0", "must lie in [0, b]");
  if (kind == BoundKind::Additive) {
    if (!(epsilon > 0.0)) throw ConfigError("epsilon", "must be > 0");
  } else if (!(delta > 0.0)) {
    throw ConfigError("delta", "must be > 0");
  }
}

double expected_time_upper(const BoundSpec& spec) {
  spec.validate();
  const double b = spec.b;
  const double x0 = spec.x0;
  switch (spec.kind) {
    case BoundKind::NegativeDriftVariance:
      return (b * b - (b - x0) * (b - x0)) / spec.delta;
    case BoundKind::StandardVariance:
      return (b * b - x0 * x0) / spec.delta;
    case BoundKind::TwoAbsorbing:
      return x0 * (b - x0) / spec.delta;
    case BoundKind::Additive:
      return (b - x0) / spec.epsilon;
    case BoundKind::KotzingPolynomial:
      break;
  }
  throw UnsupportedKindError("expected_time_upper: KotzingPolynomial gives a tail bound only");
}

double tail_probability_upper(const BoundSpec& spec, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("tail_probability_upper: tau must be > 0");
  spec.validate();
  const double e = std::numbers::e;
  switch (spec.kind) {
    case BoundKind::NegativeDriftVariance:
    case BoundKind::StandardVariance:
      return clamp_unit(std::exp(-tau * spec.delta / (e * spec.b * spec.b)));
    case BoundKind::TwoAbsorbing:
      return clamp_unit(std::exp(-2.0 * tau * spec.delta / (e * spec.b * spec.b)));
    case BoundKind::Additive:
      return clamp_unit(std::exp(-tau * spec.epsilon / (e * spec.b)));
    case BoundKind::KotzingPolynomial: {
      const double n = static_cast<double>(spec.n);
      const double r = tau / (n * n);
      return clamp_unit(std::pow(1.0 / r, 1.0 / (spec.ell * std::log(spec.c))));
    }
  }
  throw std::logic_error("tail_probability_upper: unhandled kind");
}

bool tail_is_inclusive(BoundKind kind) noexcept {
  return kind != BoundKind::NegativeDriftVariance;
}

}  // namespace driftlab
