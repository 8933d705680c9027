#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>

namespace pcr {

using Vec3 = std::array<double, 3>;
using Vec4 = std::array<double, 4>;

/// Row-major 4x4 matrix; transforms column vectors (clip = m * p).
struct Mat4 {
  std::array<double, 16> m{};

  static Mat4 identity();

  double operator()(int row, int col) const { return m[row * 4 + col]; }
  double& operator()(int row, int col) { return m[row * 4 + col]; }

  Vec4 transform(const Vec3& p) const {
    return {m[0] * p[0] + m[1] * p[1] + m[2] * p[2] + m[3],
            m[4] * p[0] + m[5] * p[1] + m[6] * p[2] + m[7],
            m[8] * p[0] + m[9] * p[1] + m[10] * p[2] + m[11],
            m[12] * p[0] + m[13] * p[1] + m[14] * p[2] + m[15]};
  }

  friend Mat4 operator*(const Mat4& a, const Mat4& b);
  friend bool operator==(const Mat4&, const Mat4&) = default;
};

inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator*(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }
double dot(const Vec3& a, const Vec3& b);
Vec3 cross(const Vec3& a, const Vec3& b);
double length(const Vec3& a);
Vec3 normalize(const Vec3& a);

/// Axis-aligned box in world units. min[k] <= max[k] for valid boxes;
/// zero-extent axes are allowed.
struct Aabb {
  Vec3 min{0, 0, 0};
  Vec3 max{0, 0, 0};

  /// The empty box: extend() with any point yields that point's box.
  static Aabb empty();
  static Aabb of(std::span<const Vec3> points);

  bool is_empty() const { return min[0] > max[0] || min[1] > max[1] || min[2] > max[2]; }
  Vec3 size() const { return max - min; }
  Vec3 center() const { return (min + max) * 0.5; }
  double surface_area() const;

  void extend(const Vec3& p) {
    for (int k = 0; k < 3; ++k) {
      min[k] = std::min(min[k], p[k]);
      max[k] = std::max(max[k], p[k]);
    }
  }
  bool contains(const Vec3& p, double slack = 0.0) const {
    for (int k = 0; k < 3; ++k) {
      if (p[k] < min[k] - slack || p[k] > max[k] + slack) return false;
    }
    return true;
  }
  /// Smallest cube sharing this box's min corner that contains it.
  Aabb cubed() const;

  friend bool operator==(const Aabb&, const Aabb&) = default;
};

/// World-to-clip transform plus viewport. Clip w is the positive view
/// depth of points in front of the camera.
struct Camera {
  Mat4 viewProj = Mat4::identity();
  int viewportWidth = 1;
  int viewportHeight = 1;

  /// Right-handed look-at camera with an OpenGL-style perspective whose
  /// clip-space y axis points down, so ndc y = -1 maps to the top image row.
  static Camera look_at(const Vec3& eye, const Vec3& target, const Vec3& up, double fovYDegrees,
                        double nearPlane, double farPlane, int width, int height);
};

Mat4 look_at_view(const Vec3& eye, const Vec3& target, const Vec3& up);
Mat4 perspective(double fovYRadians, double aspect, double nearPlane, double farPlane);

}  // namespace pcr
