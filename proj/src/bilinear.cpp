#include "driftlab/bilinear.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "driftlab/error.hpp"

namespace driftlab::bilinear {

std::string_view to_string(Variant v) noexcept { return v == Variant::revised ? "revised" : "original"; }

Variant variant_from_string(std::string_view name) {
  if (name == "revised") return Variant::revised;
  if (name == "original") return Variant::original;
  throw std::invalid_argument("unknown BILINEAR variant '" + std::string(name) + "'");
}

BilinearParams BilinearParams::make(std::uint32_t n, double alpha, double beta, Variant variant) {
  if (n < 2) throw ConfigError("n", "must be >= 2");
  auto count_of = [n](double frac, const char* field) {
    if (!(frac > 0.0 && frac < 1.0)) throw ConfigError(field, "must lie in (0,1)");
    const double scaled = frac * n;
    const double rounded = std::round(scaled);
    if (std::abs(scaled - rounded) > 1e-9 * n) throw ConfigError(field, "times n must be an integer");
    return static_cast<std::uint32_t>(rounded);
  };
  BilinearParams p;
  p.n_ = n;
  p.alpha_ = alpha;
  p.beta_ = beta;
  p.alpha_n_ = count_of(alpha, "alpha");
  p.beta_n_ = count_of(beta, "beta");
  p.variant_ = variant;
  return p;
}

SearchPair::SearchPair(Bits x, Bits y) : x_(std::move(x)), y_(std::move(y)) {
  if (x_.size() != y_.size()) throw std::invalid_argument("SearchPair: x and y lengths differ");
  ones_x_ = static_cast<std::uint32_t>(std::count_if(x_.begin(), x_.end(), [](auto b) { return b != 0; }));
  ones_y_ = static_cast<std::uint32_t>(std::count_if(y_.begin(), y_.end(), [](auto b) { return b != 0; }));
}

void SearchPair::flip_x(std::uint32_t i) noexcept {
  x_[i] ^= 1u;
  ones_x_ = x_[i] ? ones_x_ + 1 : ones_x_ - 1;
}

void SearchPair::flip_y(std::uint32_t i) noexcept {
  y_[i] ^= 1u;
  ones_y_ = y_[i] ? ones_y_ + 1 : ones_y_ - 1;
}

bool SearchPair::counts_consistent() const noexcept {
  const SearchPair recounted(x_, y_);
  return recounted.ones_x_ == ones_x_ && recounted.ones_y_ == ones_y_;
}

Int128 scaled_value(const BilinearParams& p, std::uint32_t ones_x, std::uint32_t ones_y) {
  if (ones_x > p.n() || ones_y > p.n()) throw std::invalid_argument("bilinear_value: one-count exceeds n");
  const Int128 n = p.n();
  const Int128 x = ones_x;
  const Int128 y = ones_y;
  const Int128 an = p.alpha_n();
  const Int128 bn = p.beta_n();
  Int128 v = n * n * n * (y * (x - bn) - an * x);
  if (p.variant() == Variant::revised) {
    v += std::max<Int128>((an - y) * (an - y), 1);
    v -= std::max<Int128>((bn - x) * (bn - x), 1);
  }
  return v;
}

double bilinear_value(const BilinearParams& p, std::uint32_t ones_x, std::uint32_t ones_y) {
  const double n = p.n();
  return static_cast<double>(scaled_value(p, ones_x, ones_y)) / (n * n * n);
}

bool dominates_counts(const BilinearParams& p, std::uint32_t x1, std::uint32_t y1, std::uint32_t x2,
                      std::uint32_t y2) {
  const Int128 g12 = scaled_value(p, x1, y2);
  const Int128 g11 = scaled_value(p, x1, y1);
  const Int128 g21 = scaled_value(p, x2, y1);
  return g12 >= g11 && g11 >= g21;
}

bool dominates(const BilinearParams& p, const SearchPair& candidate, const SearchPair& incumbent) {
  return dominates_counts(p, candidate.ones_x(), candidate.ones_y(), incumbent.ones_x(), incumbent.ones_y());
}

std::uint32_t manhattan_distance(const BilinearParams& p, std::uint32_t ones_x, std::uint32_t ones_y) {
  const auto gap = [](std::uint32_t a, std::uint32_t b) { return a > b ? a - b : b - a; };
  return gap(p.beta_n(), ones_x) + gap(p.alpha_n(), ones_y);
}

std::uint32_t manhattan_distance(const BilinearParams& p, const SearchPair& pair) {
  return manhattan_distance(p, pair.ones_x(), pair.ones_y());
}

std::string_view to_string(Quadrant q) noexcept {
  switch (q) {
    case Quadrant::first: return "1";
    case Quadrant::second: return "2";
    case Quadrant::third: return "3";
    case Quadrant::fourth: return "4";
    case Quadrant::at_optimum: break;
  }
  return "opt";
}

Quadrant quadrant(const BilinearParams& p, std::uint32_t ones_x, std::uint32_t ones_y) {
  const auto bn = p.beta_n();
  const auto an = p.alpha_n();
  if (ones_x == bn && ones_y == an) return Quadrant::at_optimum;
  if (ones_x < bn && ones_y >= an) return Quadrant::first;
  if (ones_x >= bn && ones_y > an) return Quadrant::second;
  if (ones_x > bn && ones_y <= an) return Quadrant::third;
  // Remaining: ones_x <= bn and ones_y < an (includes the ray ones_x == bn).
  return Quadrant::fourth;
}

Quadrant quadrant(const BilinearParams& p, const SearchPair& pair) {
  return quadrant(p, pair.ones_x(), pair.ones_y());
}

SearchPair random_pair(RngStream& stream, std::uint32_t n) {
  auto draw = [&] {
    Bits b(n);
    std::uint64_t word = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (i % 64 == 0) word = stream.next_u64();
      b[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
    }
    return b;
  };
  Bits x = draw();
  Bits y = draw();
  return SearchPair(std::move(x), std::move(y));
}

SearchPair canonical_opt(const BilinearParams& p) {
  Bits x(p.n(), 0), y(p.n(), 0);
  std::fill_n(x.begin(), p.beta_n(), 1);
  std::fill_n(y.begin(), p.alpha_n(), 1);
  return SearchPair(std::move(x), std::move(y));
}

bool rls_pd_step_inplace(const BilinearParams& p, SearchPair& pair, RngStream& stream) {
  const std::uint32_t n = pair.n();
  const auto k = static_cast<std::uint32_t>(stream.next_index(2ull * n));
  const std::uint32_t ox = pair.ones_x();
  const std::uint32_t oy = pair.ones_y();
  if (k < n) {
    const std::uint32_t nx = pair.x()[k] ? ox - 1 : ox + 1;
    if (!dominates_counts(p, nx, oy, ox, oy)) return false;
    pair.flip_x(k);
  } else {
    const std::uint32_t i = k - n;
    const std::uint32_t ny = pair.y()[i] ? oy - 1 : oy + 1;
    if (!dominates_counts(p, ox, ny, ox, oy)) return false;
    pair.flip_y(i);
  }
  return true;
}

SearchPair rls_pd_step(const BilinearParams& p, const SearchPair& pair, RngStream& stream) {
  SearchPair next = pair;
  rls_pd_step_inplace(p, next, stream);
  return next;
}

namespace {

template <class Done>
RunOutcome iterate(const BilinearParams& p, SearchPair pair, RngStream& stream, std::uint64_t cap, bool record,
                   Done&& done) {
  if (pair.n() != p.n()) throw std::invalid_argument("search pair length != n");
  RunOutcome out;
  out.quadrant_at_start = quadrant(p, pair);
  std::uint32_t m = manhattan_distance(p, pair);
  if (record) {
    out.trajectory.emplace();
    out.trajectory->cap = cap;
    out.trajectory->values.push_back(m);
  }
  while (!done(m)) {
    if (out.iterations == cap) {
      out.censored = true;
      break;
    }
    rls_pd_step_inplace(p, pair, stream);
#ifndef NDEBUG
    if (!pair.counts_consistent()) throw std::logic_error("one-count cache out of sync");
#endif
    m = manhattan_distance(p, pair);
    ++out.iterations;
    if (record) out.trajectory->values.push_back(m);
  }
  out.quadrant_at_end = quadrant(p, pair);
  if (record) out.trajectory->censored = out.censored;
  return out;
}

}  // namespace

RunOutcome run_until_opt(const BilinearParams& p, std::optional<SearchPair> init, RngStream& stream,
                         std::uint64_t cap, bool record) {
  SearchPair start = init ? std::move(*init) : random_pair(stream, p.n());
  return iterate(p, std::move(start), stream, cap, record, [](std::uint32_t m) { return m == 0; });
}

RunOutcome run_forgetting(const BilinearParams& p, double A, double B, RngStream& stream, std::uint64_t cap,
                          bool record) {
  if (!(A >= 0.0 && B >= 0.0)) throw std::invalid_argument("run_forgetting: A and B must be >= 0");
  const double threshold = (A + B) * std::sqrt(static_cast<double>(p.n()));
  return iterate(p, canonical_opt(p), stream, cap, record,
                 [threshold](std::uint32_t m) { return static_cast<double>(m) >= threshold; });
}

std::uint64_t default_runtime_cap(std::uint32_t n) {
  return static_cast<std::uint64_t>(std::ceil(20.0 * std::pow(static_cast<double>(n), 1.5)));
}

}  // namespace driftlab::bilinear
