#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>

#include "pcr/cloud.hpp"
#include "pcr/config.hpp"
#include "pcr/framebuffer.hpp"
#include "pcr/frustum.hpp"
#include "pcr/quantize.hpp"

namespace pcr {

/// Top-left origin, row-major, floor rounding, half-open bounds. nullopt
/// when clip.w <= 1e-9 or the point falls outside the viewport.
std::optional<std::uint32_t> to_pixel_id(const Vec4& clip, const Camera& cam);

/// Per-batch outcome of frustum and LOD culling plus precision selection.
struct BatchPlan {
  enum class Verdict { Render, FrustumCulled, LodCulled };
  Verdict verdict = Verdict::Render;
  PrecisionLevel precision = PrecisionLevel::High;
  double sizePx = 0.0;
};

BatchPlan plan_batch(const Batch& batch, const Camera& cam, const FrustumPlanes& frustum, const RenderConfig& cfg);

/// Screen position and depth of one projected point.
struct PointHit {
  std::uint32_t pixel = 0;
  float depth = 0.0f;
};

/// The decode-then-transform of one batch at one precision, folded into a
/// single affine map from truncated integer coordinates to clip space.
/// Low precision evaluates in single precision (10-bit integers are exact
/// in float); Medium and High evaluate in double.
class BatchProjector {
 public:
  BatchProjector(const Aabb& box, PrecisionLevel level, const Camera& cam);

  PrecisionLevel level() const { return level_; }

  /// Reference scalar path; the render loop produces identical results.
  std::optional<PointHit> project(const EncodedPoint& e) const;

  /// Projects count points starting at words[first]. pixels[i] receives
  /// kOffscreen for rejected points.
  void project_block(const EncodedCloud& cloud, std::size_t first, std::size_t count, std::uint32_t* pixels,
                     std::uint32_t* depthBits) const;

  /// Projects the batch in blocks of `block` points (at most kMaxBlock)
  /// and calls fn(pixel, depthBits, pointIndex) for every on-screen point.
  template <typename Fn>
  void for_each_hit(const EncodedCloud& cloud, const Batch& batch, std::size_t block, Fn&& fn) const {
    std::uint32_t pixels[kMaxBlock];
    std::uint32_t depths[kMaxBlock];
    const std::uint64_t end = batch.firstPoint + batch.numPoints;
    for (std::uint64_t first = batch.firstPoint; first < end; first += block) {
      const auto count = std::size_t(std::min<std::uint64_t>(block, end - first));
      project_block(cloud, std::size_t(first), count, pixels, depths);
      for (std::size_t i = 0; i < count; ++i) {
        if (pixels[i] != kOffscreen) fn(pixels[i], depths[i], std::uint32_t(first + i));
      }
    }
  }

  static constexpr std::uint32_t kOffscreen = 0xFFFFFFFFu;
  static constexpr std::size_t kMaxBlock = 256;

 private:
  PrecisionLevel level_;
  int width_;
  int height_;
  double a_[4][3];
  double c_[4];
  float af_[4][3];
  float cf_[4];
};

/// Largest whole number of fetch groups fitting in one projection block.
std::size_t fetch_block_size(const RenderConfig& cfg);

/// Validates cfg and the framebuffer/viewport agreement; throws ConfigError.
void check_render_setup(const RenderConfig& cfg, int width, int height, const Camera& cam);

/// Renders every batch of `cloud` into `fb`, which must already be cleared
/// and sized to the camera viewport. Parallel over batches; the result is
/// independent of thread count and scheduling.
RenderStats render(const EncodedCloud& cloud, const Camera& cam, const RenderConfig& cfg, Framebuffer& fb);

}  // namespace pcr
