#include "pcr/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "pcr/error.hpp"

namespace pcr {

Mat4 Mat4::identity() {
  Mat4 r;
  r.m = {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1};
  return r;
}

Mat4 operator*(const Mat4& a, const Mat4& b) {
  Mat4 r;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      double s = 0;
      for (int k = 0; k < 4; ++k) s += a(i, k) * b(k, j);
      r(i, j) = s;
    }
  }
  return r;
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double length(const Vec3& a) { return std::sqrt(dot(a, a)); }

Vec3 normalize(const Vec3& a) {
  const double len = length(a);
  if (len == 0.0) return a;
  return a * (1.0 / len);
}

Aabb Aabb::empty() {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return Aabb{{inf, inf, inf}, {-inf, -inf, -inf}};
}

Aabb Aabb::of(std::span<const Vec3> points) {
  Aabb box = empty();
  for (const auto& p : points) box.extend(p);
  return box;
}

double Aabb::surface_area() const {
  if (is_empty()) return 0.0;
  const Vec3 s = size();
  return 2.0 * (s[0] * s[1] + s[1] * s[2] + s[2] * s[0]);
}

Aabb Aabb::cubed() const {
  const Vec3 s = size();
  const double edge = std::max({s[0], s[1], s[2]});
  return Aabb{min, min + Vec3{edge, edge, edge}};
}

Mat4 look_at_view(const Vec3& eye, const Vec3& target, const Vec3& up) {
  const Vec3 f = normalize(target - eye);
  const Vec3 s = normalize(cross(f, up));
  const Vec3 u = cross(s, f);
  Mat4 v = Mat4::identity();
  v(0, 0) = s[0];
  v(0, 1) = s[1];
  v(0, 2) = s[2];
  v(1, 0) = u[0];
  v(1, 1) = u[1];
  v(1, 2) = u[2];
  v(2, 0) = -f[0];
  v(2, 1) = -f[1];
  v(2, 2) = -f[2];
  v(0, 3) = -dot(s, eye);
  v(1, 3) = -dot(u, eye);
  v(2, 3) = dot(f, eye);
  return v;
}

Mat4 perspective(double fovYRadians, double aspect, double nearPlane, double farPlane) {
  const double f = 1.0 / std::tan(fovYRadians / 2.0);
  Mat4 p;
  p(0, 0) = f / aspect;
  p(1, 1) = f;
  p(2, 2) = (farPlane + nearPlane) / (nearPlane - farPlane);
  p(2, 3) = 2.0 * farPlane * nearPlane / (nearPlane - farPlane);
  p(3, 2) = -1.0;
  return p;
}

Camera Camera::look_at(const Vec3& eye, const Vec3& target, const Vec3& up, double fovYDegrees,
                       double nearPlane, double farPlane, int width, int height) {
  if (width < 1 || height < 1) throw ConfigError("camera viewport must be at least 1x1");
  if (!(fovYDegrees > 0.0 && fovYDegrees < 180.0)) throw ConfigError("fovY must lie in (0, 180) degrees");
  if (!(nearPlane > 0.0) || !(farPlane > nearPlane)) throw ConfigError("require 0 < near < far");
  Mat4 proj = perspective(fovYDegrees * std::numbers::pi / 180.0, double(width) / double(height),
                          nearPlane, farPlane);
  // Flip y so image rows grow downwards.
  for (int c = 0; c < 4; ++c) proj(1, c) = -proj(1, c);
  Camera cam;
  cam.viewProj = proj * look_at_view(eye, target, up);
  cam.viewportWidth = width;
  cam.viewportHeight = height;
  return cam;
}

}  // namespace pcr
