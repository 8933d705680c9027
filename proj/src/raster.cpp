#include "pcr/raster.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "pcr/error.hpp"
#include "pcr/lod.hpp"
#include "pcr/parallel.hpp"
#include "pcr/rings.hpp"

namespace pcr {

namespace {

struct Projected {
  std::uint32_t pixel;
  std::uint32_t depthBits;
};

// Shared by the scalar reference and the blocked loop so both round
// identically. Rejected points get pixel = kOffscreen.
template <typename Real>
inline Projected eval_point(Real vx, Real vy, Real vz, const Real (&a)[4][3], const Real (&c)[4], Real width,
                            Real height, std::uint32_t rowStride) {
  const Real x = a[0][0] * vx + a[0][1] * vy + a[0][2] * vz + c[0];
  const Real y = a[1][0] * vx + a[1][1] * vy + a[1][2] * vz + c[1];
  const Real z = a[2][0] * vx + a[2][1] * vy + a[2][2] * vz + c[2];
  const Real w = a[3][0] * vx + a[3][1] * vy + a[3][2] * vz + c[3];
  const Real sx = (x / w * Real(0.5) + Real(0.5)) * width;
  const Real sy = (y / w * Real(0.5) + Real(0.5)) * height;
  const bool valid = (w > Real(kBehindCameraEpsilon)) & (w < Real(std::numeric_limits<float>::max())) & (z <= w) &
                     (sx >= Real(0)) & (sx < width) & (sy >= Real(0)) & (sy < height);
  const Real px = valid ? sx : Real(0);
  const Real py = valid ? sy : Real(0);
  const float depth = valid ? float(w) : 1.0f;
  const std::uint32_t pixel = std::uint32_t(py) * rowStride + std::uint32_t(px);
  return {valid ? pixel : BatchProjector::kOffscreen, std::bit_cast<std::uint32_t>(depth)};
}

inline void unpack(std::uint32_t word, std::uint32_t& x, std::uint32_t& y, std::uint32_t& z) {
  x = word & kMask10;
  y = (word >> 10) & kMask10;
  z = (word >> 20) & kMask10;
}

}  // namespace

std::optional<std::uint32_t> to_pixel_id(const Vec4& clip, const Camera& cam) {
  if (!(clip[3] > kBehindCameraEpsilon)) return std::nullopt;
  const double px = std::floor((clip[0] / clip[3] * 0.5 + 0.5) * cam.viewportWidth);
  const double py = std::floor((clip[1] / clip[3] * 0.5 + 0.5) * cam.viewportHeight);
  if (!(px >= 0.0 && px < cam.viewportWidth && py >= 0.0 && py < cam.viewportHeight)) return std::nullopt;
  return std::uint32_t(py) * std::uint32_t(cam.viewportWidth) + std::uint32_t(px);
}

BatchPlan plan_batch(const Batch& batch, const Camera& cam, const FrustumPlanes& frustum, const RenderConfig& cfg) {
  BatchPlan plan;
  if (cfg.frustumCulling && frustum_test(batch.box, frustum) == FrustumResult::Outside) {
    plan.verdict = BatchPlan::Verdict::FrustumCulled;
    return plan;
  }
  const ProjectedBox rect = project_aabb(batch.box, cam);
  plan.sizePx = rect.size_px();
  if (batch.lodLevel) {
    const RingTier tier = cfg.peripheralThresholds
                              ? ring_of(rect, cam.viewportWidth, cam.viewportHeight, *cfg.peripheralThresholds)
                              : RingTier::Center;
    if (lod_cull(batch, plan.sizePx, cfg, tier) == LodDecision::Cull) {
      plan.verdict = BatchPlan::Verdict::LodCulled;
      return plan;
    }
  }
  plan.precision = precision_for(plan.sizePx, cfg);
  return plan;
}

BatchProjector::BatchProjector(const Aabb& box, PrecisionLevel level, const Camera& cam)
    : level_(level), width_(cam.viewportWidth), height_(cam.viewportHeight) {
  const double cells = std::ldexp(1.0, bits_per_axis(level));
  const Vec3 size = box.size();
  Vec3 scale, base;
  for (int k = 0; k < 3; ++k) {
    scale[k] = size[k] > 0.0 ? size[k] / cells : 0.0;
    base[k] = box.min[k] + 0.5 * scale[k];
  }
  const Mat4& m = cam.viewProj;
  for (int r = 0; r < 4; ++r) {
    c_[r] = m(r, 0) * base[0] + m(r, 1) * base[1] + m(r, 2) * base[2] + m(r, 3);
    cf_[r] = float(c_[r]);
    for (int k = 0; k < 3; ++k) {
      a_[r][k] = m(r, k) * scale[k];
      af_[r][k] = float(a_[r][k]);
    }
  }
}

std::optional<PointHit> BatchProjector::project(const EncodedPoint& e) const {
  Projected p;
  if (level_ == PrecisionLevel::Low) {
    std::uint32_t x, y, z;
    unpack(e.lowWord, x, y, z);
    p = eval_point<float>(float(x), float(y), float(z), af_, cf_, float(width_), float(height_),
                          std::uint32_t(width_));
  } else {
    const QuantizedCoord v = truncated_value(e, level_);
    p = eval_point<double>(double(v.x30), double(v.y30), double(v.z30), a_, c_, double(width_), double(height_),
                           std::uint32_t(width_));
  }
  if (p.pixel == kOffscreen) return std::nullopt;
  return PointHit{p.pixel, std::bit_cast<float>(p.depthBits)};
}

void BatchProjector::project_block(const EncodedCloud& cloud, std::size_t first, std::size_t count,
                                   std::uint32_t* pixels, std::uint32_t* depthBits) const {
  const std::uint32_t stride = std::uint32_t(width_);
  const std::uint32_t* low = cloud.lowWords.data() + first;
  switch (level_) {
    case PrecisionLevel::Low: {
      const float w = float(width_), h = float(height_);
      for (std::size_t i = 0; i < count; ++i) {
        const std::uint32_t word = low[i];
        const Projected p = eval_point<float>(float(word & kMask10), float((word >> 10) & kMask10),
                                              float((word >> 20) & kMask10), af_, cf_, w, h, stride);
        pixels[i] = p.pixel;
        depthBits[i] = p.depthBits;
      }
      break;
    }
    case PrecisionLevel::Medium: {
      const std::uint32_t* med = cloud.medWords.data() + first;
      const double w = double(width_), h = double(height_);
      for (std::size_t i = 0; i < count; ++i) {
        std::uint32_t lx, ly, lz, mx, my, mz;
        unpack(low[i], lx, ly, lz);
        unpack(med[i], mx, my, mz);
        const Projected p = eval_point<double>(double((lx << 10) | mx), double((ly << 10) | my),
                                               double((lz << 10) | mz), a_, c_, w, h, stride);
        pixels[i] = p.pixel;
        depthBits[i] = p.depthBits;
      }
      break;
    }
    case PrecisionLevel::High: {
      const std::uint32_t* med = cloud.medWords.data() + first;
      const std::uint32_t* high = cloud.highWords.data() + first;
      const double w = double(width_), h = double(height_);
      for (std::size_t i = 0; i < count; ++i) {
        std::uint32_t lx, ly, lz, mx, my, mz, hx, hy, hz;
        unpack(low[i], lx, ly, lz);
        unpack(med[i], mx, my, mz);
        unpack(high[i], hx, hy, hz);
        const Projected p = eval_point<double>(double((lx << 20) | (mx << 10) | hx), double((ly << 20) | (my << 10) | hy),
                                               double((lz << 20) | (mz << 10) | hz), a_, c_, w, h, stride);
        pixels[i] = p.pixel;
        depthBits[i] = p.depthBits;
      }
      break;
    }
  }
}

std::size_t fetch_block_size(const RenderConfig& cfg) {
  const std::size_t group = cfg.pointsPerFetch;
  return std::max<std::size_t>(group, BatchProjector::kMaxBlock / group * group);
}

void check_render_setup(const RenderConfig& cfg, int width, int height, const Camera& cam) {
  cfg.validate();
  if (cfg.pointsPerFetch > BatchProjector::kMaxBlock) throw ConfigError("pointsPerFetch must not exceed 256");
  if (width != cam.viewportWidth || height != cam.viewportHeight) {
    throw ConfigError("render target is " + std::to_string(width) + "x" + std::to_string(height) +
                      " but the camera viewport is " + std::to_string(cam.viewportWidth) + "x" +
                      std::to_string(cam.viewportHeight));
  }
}

RenderStats render(const EncodedCloud& cloud, const Camera& cam, const RenderConfig& cfg, Framebuffer& fb) {
  const auto start = std::chrono::steady_clock::now();
  check_render_setup(cfg, fb.width(), fb.height(), cam);
  const FrustumPlanes frustum = FrustumPlanes::from_view_proj(cam.viewProj);
  const unsigned threads = cfg.resolved_threads();
  const std::size_t block = fetch_block_size(cfg);

  std::vector<RenderStats> perWorker(threads);
  parallel_for(cloud.batches.size(), threads, [&](std::size_t batchIndex, unsigned worker) {
    const Batch& batch = cloud.batches[batchIndex];
    RenderStats& stats = perWorker[worker];
    ++stats.batchesProcessed;
    const BatchPlan plan = plan_batch(batch, cam, frustum, cfg);
    if (plan.verdict != BatchPlan::Verdict::Render) return;
    ++stats.batchesRendered;
    stats.pointsProcessed += batch.numPoints;
    stats.coordinateBytesLoaded += std::uint64_t(batch.numPoints) * 4u * words_per_point(plan.precision);

    const BatchProjector projector(batch.box, plan.precision, cam);
    projector.for_each_hit(cloud, batch, block, [&](std::uint32_t pixel, std::uint32_t depthBits, std::uint32_t index) {
      const FramebufferEntry entry = (FramebufferEntry{depthBits} << 32) | index;
      // Early-depth test against a possibly stale value; entries only
      // shrink, so a stale read can only cost an extra atomic.
      if (entry < fb.peek(pixel)) {
        fb.atomic_min(pixel, entry);
        ++stats.atomicMinCalls;
        ++stats.pointsRendered;
      }
    });
  });

  RenderStats total;
  for (const auto& s : perWorker) total += s;
  total.frameMillis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return total;
}

}  // namespace pcr
