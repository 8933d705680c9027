#include "pcr/morton.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pcr {

namespace {

std::uint32_t grid_coord(double x, double lo, double size) {
  constexpr double cells = double(1u << kMortonBitsPerAxis);
  if (!(size > 0.0)) return 0;
  const double t = std::floor((x - lo) / size * cells);
  if (!(t >= 0.0)) return 0;
  return std::uint32_t(std::min(t, cells - 1.0));
}

}  // namespace

std::uint64_t morton_code_of(const Vec3& p, const Aabb& bounds) {
  const Vec3 size = bounds.size();
  return morton_code(grid_coord(p[0], bounds.min[0], size[0]), grid_coord(p[1], bounds.min[1], size[1]),
                     grid_coord(p[2], bounds.min[2], size[2]));
}

std::vector<std::uint32_t> morton_order(const RawCloud& cloud) {
  const std::size_t n = cloud.size();
  std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed(n);
  for (std::size_t i = 0; i < n; ++i) {
    keyed[i] = {morton_code_of(cloud.positions[i], cloud.bounds), std::uint32_t(i)};
  }
  // (code, index) pairs are unique, so an unstable sort yields the stable order.
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::uint32_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = keyed[i].second;
  return order;
}

RawCloud morton_sort(const RawCloud& cloud) {
  const auto order = morton_order(cloud);
  RawCloud out;
  out.positions.resize(cloud.size());
  out.colors.resize(cloud.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.positions[i] = cloud.positions[order[i]];
    out.colors[i] = cloud.colors[order[i]];
  }
  out.bounds = cloud.bounds;
  return out;
}

}  // namespace pcr
