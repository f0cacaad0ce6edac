#include "driftlab/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace driftlab {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) noexcept {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

std::uint64_t RngStream::next_u64() noexcept {
  const std::uint64_t block = draw_counter_ >> 1;
  const auto out = philox4x32_10(
      {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
       static_cast<std::uint32_t>(stream_id_), static_cast<std::uint32_t>(stream_id_ >> 32)},
      {static_cast<std::uint32_t>(master_seed_), static_cast<std::uint32_t>(master_seed_ >> 32)});
  const bool high_lane = (draw_counter_ & 1u) != 0;
  ++draw_counter_;
  return high_lane ? (static_cast<std::uint64_t>(out[3]) << 32) | out[2]
                   : (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

double RngStream::next_uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::next_index(std::uint64_t k) {
  if (k == 0) throw std::invalid_argument("next_index: k must be >= 1");
  // 2^64 mod k; draws below this are rejected so the rest split evenly.
  const std::uint64_t threshold = (0 - k) % k;
  for (;;) {
    const std::uint64_t x = next_u64();
    if (x >= threshold) return x % k;
  }
}

bool RngStream::next_bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("next_bernoulli: p must lie in [0,1]");
  return next_uniform() < p;
}

}  // namespace driftlab
