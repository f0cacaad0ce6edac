#pragma once

#include <array>
#include <cstdint>

namespace driftlab {

// Philox4x32-10 block function (Salmon et al., Random123). Exposed for
// known-answer testing.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

/// Counter-addressable random stream.
///
/// The n-th 64-bit output of stream (seed, id) is a pure function of
/// (seed, id, n): it is lane n%2 of the Philox4x32-10 block with key = seed
/// and counter = (n/2, id). Distinct stream ids therefore never share a block,
/// and any draw can be reproduced from the triple alone, on any platform.
///
/// A stream is a value type; copying it forks an identical sequence.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id,
            std::uint64_t draw_counter = 0) noexcept
      : master_seed_(master_seed), stream_id_(stream_id), draw_counter_(draw_counter) {}

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  std::uint64_t draw_counter() const noexcept { return draw_counter_; }

  // Raw 64 bits; advances draw_counter by one.
  std::uint64_t next_u64() noexcept;

  // Uniform in [0,1) with 53 bits of resolution; consumes exactly one draw.
  double next_uniform() noexcept;

  // Uniform over {0, ..., k-1} without modulo bias (rejection on the low
  // residue class). Throws std::invalid_argument for k == 0.
  std::uint64_t next_index(std::uint64_t k);

  // True with probability p; consumes exactly one draw. Throws
  // std::invalid_argument unless 0 <= p <= 1.
  bool next_bernoulli(double p);

  friend bool operator==(const RngStream&, const RngStream&) = default;

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::uint64_t draw_counter_;
};

}  // namespace driftlab
