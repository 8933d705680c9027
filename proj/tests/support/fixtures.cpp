#include "support/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>
#include <random>

#include "pcr/frustum.hpp"
#include "pcr/morton.hpp"
#include "pcr/raster.hpp"

namespace pcr::fixtures {

Rgba tag_color(const Vec3& p) {
  std::uint64_t h = 1469598103934665603ull;
  for (double v : p) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    h = (h ^ bits) * 1099511628211ull;
  }
  h ^= h >> 29;
  return make_rgba(std::uint8_t(h), std::uint8_t(h >> 8), std::uint8_t(h >> 16), 255);
}

RawCloud uniform_cube(std::size_t n, std::uint64_t seed, const Aabb& box) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> c(0, 255);
  RawCloud cloud;
  cloud.positions.reserve(n);
  cloud.colors.reserve(n);
  const Vec3 size = box.size();
  for (std::size_t i = 0; i < n; ++i) {
    Vec3 p;
    for (int k = 0; k < 3; ++k) p[k] = box.min[k] + u(rng) * size[k];
    cloud.push_back(p, make_rgba(std::uint8_t(c(rng)), std::uint8_t(c(rng)), std::uint8_t(c(rng))));
  }
  return cloud;
}

RawCloud sphere_shell(std::size_t n, std::uint64_t seed, const Vec3& center, double radius) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  RawCloud cloud;
  cloud.positions.reserve(n);
  cloud.colors.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vec3 d{g(rng), g(rng), g(rng)};
    const double len = length(d);
    if (len < 1e-12) {
      d = {1, 0, 0};
    } else {
      d = d * (1.0 / len);
    }
    auto channel = [](double v) { return std::uint8_t(std::lround(127.5 + 127.5 * v)); };
    cloud.push_back(center + d * radius, make_rgba(channel(d[0]), channel(d[1]), channel(d[2])));
  }
  return cloud;
}

RawCloud building_interior(int rooms, double roomSize, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RawCloud cloud;
  const double extent = rooms * roomSize;
  const double height = 0.6 * roomSize;
  // Axis-aligned rectangle sampler: fixed coordinate on `axis`.
  auto rect = [&](int axis, double fixed, double a0, double a1, double b0, double b1, Rgba color) {
    const auto n = std::size_t(density * (a1 - a0) * (b1 - b0));
    const int ia = (axis + 1) % 3;
    const int ib = (axis + 2) % 3;
    for (std::size_t i = 0; i < n; ++i) {
      Vec3 p;
      p[axis] = fixed;
      p[ia] = a0 + u(rng) * (a1 - a0);
      p[ib] = b0 + u(rng) * (b1 - b0);
      cloud.push_back(p, color);
    }
  };
  rect(2, 0.0, 0.0, extent, 0.0, extent, make_rgba(120, 100, 80));
  rect(2, height, 0.0, extent, 0.0, extent, make_rgba(230, 230, 230));
  for (int i = 0; i <= rooms; ++i) {
    // x = const walls span (y, z) and y = const walls span (z, x).
    rect(0, i * roomSize, 0.0, extent, 0.0, height, make_rgba(200, 60, 60));
    rect(1, i * roomSize, 0.0, height, 0.0, extent, make_rgba(60, 60, 200));
  }
  return morton_sort(cloud);
}

RawCloud scan_pattern(int yawSteps, int pitchSteps) {
  constexpr double pi = std::numbers::pi;
  const Vec3 half{12.0, 9.0, 3.0};
  const Vec3 eye{1.0, -0.5, 0.0};
  RawCloud cloud;
  cloud.positions.reserve(std::size_t(yawSteps) * pitchSteps);
  cloud.colors.reserve(std::size_t(yawSteps) * pitchSteps);
  for (int y = 0; y < yawSteps; ++y) {
    const double yaw = 2.0 * pi * (y + 0.5) / yawSteps;
    for (int p = 0; p < pitchSteps; ++p) {
      const double pitch = -0.5 * pi + pi * (p + 0.5) / pitchSteps;
      const Vec3 d{std::cos(pitch) * std::cos(yaw), std::cos(pitch) * std::sin(yaw), std::sin(pitch)};
      // Distance to the room walls along d.
      double t = std::numeric_limits<double>::infinity();
      for (int k = 0; k < 3; ++k) {
        if (std::abs(d[k]) > 1e-12) {
          const double wall = d[k] > 0 ? half[k] : -half[k];
          t = std::min(t, (wall - eye[k]) / d[k]);
        }
      }
      const Vec3 q = eye + d * t;
      cloud.push_back(q, tag_color(q));
    }
  }
  return cloud;
}

RawCloud coincident(const Vec3& p, const std::vector<Rgba>& colors) {
  RawCloud cloud;
  for (Rgba c : colors) cloud.push_back(p, c);
  return cloud;
}

const RawCloud& large_sphere(std::size_t n) {
  static const RawCloud cloud = [n] {
    RawCloud c = sphere_shell(n, 20240607, {0, 0, 0}, 10.0);
    return morton_sort(c);
  }();
  return cloud;
}

Camera look(const Vec3& eye, const Vec3& target, int w, int h, double fov) {
  return Camera::look_at(eye, target, {0, 0, 1}, fov, 0.05, 1e4, w, h);
}

std::vector<FramebufferEntry> oracle_render(const EncodedCloud& cloud, const Camera& cam, const RenderConfig& cfg) {
  RenderConfig plain = cfg;
  plain.frustumCulling = false;
  const auto frustum = FrustumPlanes::from_view_proj(cam.viewProj);
  std::vector<FramebufferEntry> fb(std::size_t(cam.viewportWidth) * cam.viewportHeight, kClearEntry);
  for (const Batch& b : cloud.batches) {
    const BatchPlan plan = plan_batch(b, cam, frustum, plain);
    if (plan.verdict != BatchPlan::Verdict::Render) continue;
    const BatchProjector proj(b.box, plan.precision, cam);
    for (std::uint64_t i = b.firstPoint; i < b.firstPoint + b.numPoints; ++i) {
      const auto hit = proj.project(cloud.point(i));
      if (!hit) continue;
      const FramebufferEntry e = pack_entry(hit->depth, std::uint32_t(i));
      fb[hit->pixel] = std::min(fb[hit->pixel], e);
    }
  }
  return fb;
}

}  // namespace pcr::fixtures
