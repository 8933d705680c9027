#pragma once

#include <algorithm>
#include <cmath>

#include "pcr/config.hpp"
#include "pcr/quantize.hpp"

namespace pcr {

enum class RingTier { Center, Mid, Periphery };

/// Ring of a screen position, by distance from the viewport center.
inline RingTier ring_of(double x, double y, int width, int height, const PeripheralTiers& tiers) {
  const double half = 0.5 * std::min(width, height);
  const double d = std::hypot(x - 0.5 * width, y - 0.5 * height);
  if (d <= tiers.centerRadiusFrac * half) return RingTier::Center;
  if (d <= tiers.midRadiusFrac * half) return RingTier::Mid;
  return RingTier::Periphery;
}

/// Ring of a projected box, using the rectangle point closest to the
/// viewport center so that boxes reaching into an inner ring get its
/// (lower) threshold.
inline RingTier ring_of(const ProjectedBox& rect, int width, int height, const PeripheralTiers& tiers) {
  if (rect.huge) return RingTier::Center;
  const double cx = std::clamp(0.5 * width, rect.minX, rect.maxX);
  const double cy = std::clamp(0.5 * height, rect.minY, rect.maxY);
  return ring_of(cx, cy, width, height, tiers);
}

inline double tier_threshold(RingTier tier, const PeripheralTiers& tiers) {
  switch (tier) {
    case RingTier::Center: return tiers.centerPx;
    case RingTier::Mid: return tiers.midPx;
    case RingTier::Periphery: return tiers.peripheryPx;
  }
  return tiers.centerPx;
}

}  // namespace pcr
