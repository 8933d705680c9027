#pragma once

#include <cstdint>
#include <vector>

#include "pcr/cloud.hpp"
#include "pcr/framebuffer.hpp"
#include "pcr/geometry.hpp"

namespace pcr::fixtures {

/// Color derived from a position hash, so reorderings can be checked.
Rgba tag_color(const Vec3& p);

/// n points uniform in `box` with random colors.
RawCloud uniform_cube(std::size_t n, std::uint64_t seed, const Aabb& box = {{0, 0, 0}, {1, 1, 1}});

/// n points uniform on a sphere surface, colored by normal direction.
RawCloud sphere_shell(std::size_t n, std::uint64_t seed, const Vec3& center = {0, 0, 0}, double radius = 1.0);

/// Surfaces of a multi-room building: a grid of rooms x rooms rooms of
/// `roomSize` edge, each with floor, ceiling and four walls, sampled at
/// roughly `density` points per square unit. Morton sorted.
RawCloud building_interior(int rooms, double roomSize, double density, std::uint64_t seed);

/// Terrestrial scanner sweep over a room-shaped environment: for each of
/// yawSteps yaw angles, pitch sweeps all pitchSteps angles. Points come out
/// in acquisition order.
RawCloud scan_pattern(int yawSteps, int pitchSteps);

/// k copies of the same position with the given colors.
RawCloud coincident(const Vec3& p, const std::vector<Rgba>& colors);

/// The large benchmark cloud: a Morton-sorted, normal-colored sphere shell
/// of radius 10 centered at the origin. Cached per process.
const RawCloud& large_sphere(std::size_t n = 10'000'000);

/// Camera at `eye` looking at `target` with up +z, 60 degree fov.
Camera look(const Vec3& eye, const Vec3& target, int w, int h, double fov = 60.0);

/// Sequential min-reduction over every point of every batch, using the
/// projection the rasterizer would pick for that batch (precision and
/// LOD culling seen through plan_batch with frustum culling disabled).
std::vector<FramebufferEntry> oracle_render(const EncodedCloud& cloud, const Camera& cam, const RenderConfig& cfg);

}  // namespace pcr::fixtures
