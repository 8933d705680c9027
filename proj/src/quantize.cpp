#include "pcr/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pcr {

std::uint32_t quantize_axis(double x, double boxMin, double boxSize) {
  if (!(boxSize > 0.0)) return 0;
  const double clamped = std::clamp(x, boxMin, boxMin + boxSize);
  const double scaled = std::floor(1073741824.0 * ((clamped - boxMin) / boxSize));
  if (!(scaled >= 0.0)) return 0;
  if (scaled >= double(kMax30)) return kMax30;
  return std::uint32_t(scaled);
}

QuantizedCoord quantize(const Vec3& p, const Aabb& box) {
  const Vec3 size = box.size();
  return {quantize_axis(p[0], box.min[0], size[0]), quantize_axis(p[1], box.min[1], size[1]),
          quantize_axis(p[2], box.min[2], size[2])};
}

EncodedPoint split_and_pack(const QuantizedCoord& q) {
  return {pack_plane(q.x30 >> 20, q.y30 >> 20, q.z30 >> 20),
          pack_plane(q.x30 >> 10, q.y30 >> 10, q.z30 >> 10),
          pack_plane(q.x30, q.y30, q.z30)};
}

QuantizedCoord truncated_value(const EncodedPoint& e, PrecisionLevel level) {
  auto axis = [&](int shift) {
    std::uint32_t v = (e.lowWord >> shift) & kMask10;
    if (level >= PrecisionLevel::Medium) v = (v << 10) | ((e.medWord >> shift) & kMask10);
    if (level >= PrecisionLevel::High) v = (v << 10) | ((e.highWord >> shift) & kMask10);
    return v;
  };
  return {axis(0), axis(10), axis(20)};
}

Vec3 decode(const EncodedPoint& e, PrecisionLevel level, const Aabb& box) {
  const QuantizedCoord v = truncated_value(e, level);
  const double cells = std::ldexp(1.0, bits_per_axis(level));
  const Vec3 size = box.size();
  const std::uint32_t values[3] = {v.x30, v.y30, v.z30};
  Vec3 out = box.min;
  for (int k = 0; k < 3; ++k) {
    if (size[k] > 0.0) out[k] = box.min[k] + (double(values[k]) + 0.5) / cells * size[k];
  }
  return out;
}

double ProjectedBox::size_px() const {
  if (huge) return std::numeric_limits<double>::infinity();
  return std::max(maxX - minX, maxY - minY);
}

ProjectedBox project_aabb(const Aabb& box, const Camera& cam) {
  ProjectedBox r;
  r.minX = r.minY = std::numeric_limits<double>::infinity();
  r.maxX = r.maxY = -std::numeric_limits<double>::infinity();
  for (int corner = 0; corner < 8; ++corner) {
    const Vec3 p{(corner & 1) ? box.max[0] : box.min[0], (corner & 2) ? box.max[1] : box.min[1],
                 (corner & 4) ? box.max[2] : box.min[2]};
    const Vec4 clip = cam.viewProj.transform(p);
    if (!(clip[3] > kBehindCameraEpsilon)) {
      r.huge = true;
      return r;
    }
    const double sx = (clip[0] / clip[3] * 0.5 + 0.5) * cam.viewportWidth;
    const double sy = (clip[1] / clip[3] * 0.5 + 0.5) * cam.viewportHeight;
    r.minX = std::min(r.minX, sx);
    r.maxX = std::max(r.maxX, sx);
    r.minY = std::min(r.minY, sy);
    r.maxY = std::max(r.maxY, sy);
  }
  return r;
}

PrecisionLevel select_precision(double sizePx, const RenderConfig& cfg) {
  if (sizePx < cfg.lowPrecisionThresholdPx) return PrecisionLevel::Low;
  if (sizePx < cfg.lowPrecisionThresholdPx * 1024.0) return PrecisionLevel::Medium;
  return PrecisionLevel::High;
}

PrecisionLevel precision_for(double sizePx, const RenderConfig& cfg) {
  switch (cfg.precisionMode) {
    case PrecisionMode::ForcedLow: return PrecisionLevel::Low;
    case PrecisionMode::ForcedMedium: return PrecisionLevel::Medium;
    case PrecisionMode::ForcedHigh: return PrecisionLevel::High;
    case PrecisionMode::Adaptive: break;
  }
  return select_precision(sizePx, cfg);
}

}  // namespace pcr
