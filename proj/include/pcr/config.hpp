#pragma once

#include <cstdint>
#include <optional>

namespace pcr {

enum class PrecisionMode { Adaptive, ForcedLow, ForcedMedium, ForcedHigh };

/// Accumulation layout used by the high-quality shading color pass.
enum class HqsVariant {
  /// One 64-bit add per point (16-bit fields); pixels with more than 255
  /// contributors are redone with the two-word accumulator.
  Fast,
  /// Two 64-bit adds per point into four 32-bit fields.
  Robust,
  /// One 64-bit add per point with 18-bit color fields and a 10-bit count,
  /// valid up to 1023 contributors. No overflow detection.
  Wide,
};

/// Screen rings used for LOD culling and dilation. Radii are fractions of
/// half the smaller viewport dimension, measured from the viewport center.
struct PeripheralTiers {
  double centerPx = 100.0;
  double midPx = 200.0;
  double peripheryPx = 300.0;
  double centerRadiusFrac = 0.4;
  double midRadiusFrac = 0.75;
};

struct DilationKernels {
  int center = 3;
  int periphery = 7;
};

struct RenderConfig {
  std::uint32_t batchSize = 10240;
  std::uint32_t pointsPerFetch = 4;
  PrecisionMode precisionMode = PrecisionMode::Adaptive;
  double lowPrecisionThresholdPx = 500.0;
  double lodCullThresholdPx = 100.0;
  std::optional<PeripheralTiers> peripheralThresholds;
  bool hqsEnabled = false;
  double hqsDepthSlack = 0.01;
  HqsVariant hqsVariant = HqsVariant::Fast;
  DilationKernels dilationKernels;
  bool frustumCulling = true;
  /// 0 selects std::thread::hardware_concurrency().
  unsigned threadCount = 0;

  /// Throws ConfigError when an invariant is violated.
  void validate() const;
  unsigned resolved_threads() const;
};

struct RenderStats {
  std::uint64_t batchesProcessed = 0;
  std::uint64_t batchesRendered = 0;
  std::uint64_t pointsProcessed = 0;
  std::uint64_t pointsRendered = 0;
  std::uint64_t coordinateBytesLoaded = 0;
  std::uint64_t colorBytesLoaded = 0;
  std::uint64_t atomicMinCalls = 0;
  std::uint64_t atomicAddCalls = 0;
  double frameMillis = 0.0;

  RenderStats& operator+=(const RenderStats& o);
};

}  // namespace pcr
