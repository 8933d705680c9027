#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pcr/geometry.hpp"
#include "pcr/quantize.hpp"

namespace pcr {

/// 8-bit RGBA packed as R | G << 8 | B << 16 | A << 24.
using Rgba = std::uint32_t;

constexpr Rgba make_rgba(std::uint8_t r, std::uint8_t g, std::uint8_t b, std::uint8_t a = 255) {
  return Rgba(r) | (Rgba(g) << 8) | (Rgba(b) << 16) | (Rgba(a) << 24);
}
constexpr std::uint8_t red(Rgba c) { return std::uint8_t(c); }
constexpr std::uint8_t green(Rgba c) { return std::uint8_t(c >> 8); }
constexpr std::uint8_t blue(Rgba c) { return std::uint8_t(c >> 16); }
constexpr std::uint8_t alpha(Rgba c) { return std::uint8_t(c >> 24); }

struct RawCloud {
  std::vector<Vec3> positions;
  std::vector<Rgba> colors;
  Aabb bounds = Aabb::empty();

  std::size_t size() const { return positions.size(); }
  bool empty() const { return positions.empty(); }
  void push_back(const Vec3& p, Rgba c) {
    positions.push_back(p);
    colors.push_back(c);
    bounds.extend(p);
  }
  void recompute_bounds() { bounds = Aabb::of(positions); }
};

/// Contiguous point range rendered as one task.
struct Batch {
  std::uint64_t firstPoint = 0;
  std::uint32_t numPoints = 0;
  Aabb box;
  std::optional<std::int32_t> lodLevel;
  std::optional<double> spacing;

  friend bool operator==(const Batch&, const Batch&) = default;
};

/// Struct-of-arrays encoded cloud. Each word array holds one 10-bit plane
/// of every point, quantized against the point's own batch box.
struct EncodedCloud {
  std::vector<std::uint32_t> lowWords;
  std::vector<std::uint32_t> medWords;
  std::vector<std::uint32_t> highWords;
  std::vector<Rgba> colors;
  std::vector<Batch> batches;
  Aabb bounds = Aabb::empty();
  std::uint32_t batchSize = 0;

  std::size_t size() const { return colors.size(); }
  EncodedPoint point(std::size_t i) const { return {lowWords[i], medWords[i], highWords[i]}; }

  /// Appends the points of `src` selected by `indices` as one new batch
  /// quantized against `box`.
  void append_batch(const RawCloud& src, std::span<const std::uint32_t> indices, const Aabb& box,
                    std::optional<std::int32_t> lodLevel = {}, std::optional<double> spacing = {});

  friend bool operator==(const EncodedCloud&, const EncodedCloud&) = default;
};

/// Groups consecutive runs of batchSize points; the last batch may be short.
EncodedCloud build_batches(const RawCloud& cloud, std::uint32_t batchSize);

/// Sum of batch box surface areas; the locality metric for point orderings.
double total_batch_surface_area(const EncodedCloud& cloud);

}  // namespace pcr
