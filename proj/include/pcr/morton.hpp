#pragma once

#include <cstdint>
#include <vector>

#include "pcr/cloud.hpp"

namespace pcr {

inline constexpr int kMortonBitsPerAxis = 21;

/// Spreads the low 21 bits of v so that bit k lands at bit 3k.
constexpr std::uint64_t spread_bits_3(std::uint64_t v) {
  v &= 0x1fffff;
  v = (v | (v << 32)) & 0x1f00000000ffffULL;
  v = (v | (v << 16)) & 0x1f0000ff0000ffULL;
  v = (v | (v << 8)) & 0x100f00f00f00f00fULL;
  v = (v | (v << 4)) & 0x10c30c30c30c30c3ULL;
  v = (v | (v << 2)) & 0x1249249249249249ULL;
  return v;
}

/// Interleaves three 21-bit grid coordinates: x at bits 3k, y at 3k+1,
/// z at 3k+2.
constexpr std::uint64_t morton_code(std::uint32_t ix, std::uint32_t iy, std::uint32_t iz) {
  return spread_bits_3(ix) | (spread_bits_3(iy) << 1) | (spread_bits_3(iz) << 2);
}

/// Morton code of p on a 2^21 grid spanning `bounds`.
std::uint64_t morton_code_of(const Vec3& p, const Aabb& bounds);

/// Permutation that stably sorts `cloud` by Morton code.
std::vector<std::uint32_t> morton_order(const RawCloud& cloud);

/// Stable Morton sort; colors are permuted with their positions.
RawCloud morton_sort(const RawCloud& cloud);

}  // namespace pcr
