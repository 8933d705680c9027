#pragma once

#include <cstdint>

#include "pcr/config.hpp"
#include "pcr/geometry.hpp"

namespace pcr {

enum class PrecisionLevel : std::uint8_t { Low = 1, Medium = 2, High = 3 };

constexpr int words_per_point(PrecisionLevel level) { return int(level); }
constexpr int bits_per_axis(PrecisionLevel level) { return 10 * int(level); }

inline constexpr std::uint32_t kMax30 = (1u << 30) - 1;
inline constexpr std::uint32_t kMask10 = 1023;

/// Batch-relative 30-bit fixed-point coordinate.
struct QuantizedCoord {
  std::uint32_t x30 = 0;
  std::uint32_t y30 = 0;
  std::uint32_t z30 = 0;
  friend bool operator==(const QuantizedCoord&, const QuantizedCoord&) = default;
};

/// Three 32-bit words, each holding one 10-bit plane of all three axes as
/// X | Y << 10 | Z << 20. lowWord carries the most significant bits.
struct EncodedPoint {
  std::uint32_t lowWord = 0;
  std::uint32_t medWord = 0;
  std::uint32_t highWord = 0;
  friend bool operator==(const EncodedPoint&, const EncodedPoint&) = default;
};

/// min(floor(2^30 * (x - boxMin) / boxSize), 2^30 - 1), with x clamped into
/// the box first. A zero-size axis quantizes to 0.
std::uint32_t quantize_axis(double x, double boxMin, double boxSize);
QuantizedCoord quantize(const Vec3& p, const Aabb& box);

EncodedPoint split_and_pack(const QuantizedCoord& q);

inline constexpr std::uint32_t pack_plane(std::uint32_t x, std::uint32_t y, std::uint32_t z) {
  return (x & kMask10) | ((y & kMask10) << 10) | ((z & kMask10) << 20);
}

/// Reassembles the truncated per-axis integer of the given precision from
/// the word planes: 10, 20 or 30 significant bits.
QuantizedCoord truncated_value(const EncodedPoint& e, PrecisionLevel level);

/// Reconstructs the cell center of the truncated coordinate. Degenerate
/// axes decode to box.min.
Vec3 decode(const EncodedPoint& e, PrecisionLevel level, const Aabb& box);

/// Screen-space footprint of a box: bounding rectangle of its eight
/// projected corners, in pixels. `huge` is set when any corner lies on or
/// behind the camera plane, in which case the rectangle is meaningless.
struct ProjectedBox {
  bool huge = false;
  double minX = 0, minY = 0, maxX = 0, maxY = 0;

  /// max(width, height) of the rectangle; +inf when huge.
  double size_px() const;
};

inline constexpr double kBehindCameraEpsilon = 1e-9;

ProjectedBox project_aabb(const Aabb& box, const Camera& cam);
inline double project_aabb_size(const Aabb& box, const Camera& cam) {
  return project_aabb(box, cam).size_px();
}

PrecisionLevel select_precision(double sizePx, const RenderConfig& cfg);

/// Adaptive selection, or the forced level when cfg overrides it.
PrecisionLevel precision_for(double sizePx, const RenderConfig& cfg);

}  // namespace pcr
