#pragma once

#include <cstdint>
#include <vector>

namespace driftlab {

// One byte per bit; cheap single-bit flips and no vector<bool> proxies.
using Bits = std::vector<std::uint8_t>;

}  // namespace driftlab
