#pragma once

#include <array>

#include "pcr/geometry.hpp"

namespace pcr {

/// dot(normal, p) + offset >= 0 on the inner side.
struct Plane {
  Vec3 normal{0, 0, 0};
  double offset = 0.0;

  double distance(const Vec3& p) const { return dot(normal, p) + offset; }
};

/// World-space planes of the clip volume |x| <= w, |y| <= w, w >= 0,
/// z <= w. The near plane passes through the eye, matching the rasterizer's
/// per-point rule of drawing everything in front of the camera.
struct FrustumPlanes {
  enum Side { Left, Right, Bottom, Top, Near, Far };
  std::array<Plane, 6> planes;

  static FrustumPlanes from_view_proj(const Mat4& viewProj);
};

enum class FrustumResult { Intersects, Outside };

/// Conservative p-vertex test: Outside only when the box lies wholly on the
/// outer side of some plane, with a small relative tolerance so rounding
/// (covering single-precision projection) can never cull a box containing
/// a visible point.
FrustumResult frustum_test(const Aabb& box, const FrustumPlanes& frustum);

}  // namespace pcr
