#include "pcr/frustum.hpp"

#include <algorithm>
#include <cmath>

namespace pcr {

namespace {

Plane row_combination(const Mat4& m, int row, double sign) {
  // Plane coefficients of (row3 + sign * row) . (x, y, z, 1) >= 0.
  Plane p;
  for (int k = 0; k < 3; ++k) p.normal[k] = m(3, k) + sign * (row >= 0 ? m(row, k) : 0.0);
  p.offset = m(3, 3) + sign * (row >= 0 ? m(row, 3) : 0.0);
  return p;
}

}  // namespace

FrustumPlanes FrustumPlanes::from_view_proj(const Mat4& m) {
  FrustumPlanes f;
  f.planes[Left] = row_combination(m, 0, +1.0);
  f.planes[Right] = row_combination(m, 0, -1.0);
  f.planes[Bottom] = row_combination(m, 1, +1.0);
  f.planes[Top] = row_combination(m, 1, -1.0);
  f.planes[Near] = row_combination(m, -1, 0.0);
  f.planes[Far] = row_combination(m, 2, -1.0);
  return f;
}

FrustumResult frustum_test(const Aabb& box, const FrustumPlanes& frustum) {
  for (const Plane& p : frustum.planes) {
    Vec3 pv;
    double magnitude = std::abs(p.offset);
    for (int k = 0; k < 3; ++k) {
      pv[k] = p.normal[k] >= 0.0 ? box.max[k] : box.min[k];
      magnitude += std::abs(p.normal[k]) * std::max(std::abs(box.min[k]), std::abs(box.max[k]));
    }
    if (p.distance(pv) < -1e-5 * magnitude) return FrustumResult::Outside;
  }
  return FrustumResult::Intersects;
}

}  // namespace pcr
