#include "pcr/config.hpp"

#include <algorithm>
#include <string>
#include <thread>

#include "pcr/error.hpp"

namespace pcr {

void RenderConfig::validate() const {
  if (pointsPerFetch == 0) throw ConfigError("pointsPerFetch must be positive");
  if (batchSize == 0 || batchSize % pointsPerFetch != 0) {
    throw ConfigError("batchSize must be a positive multiple of pointsPerFetch");
  }
  auto checkKernel = [](int k, const char* name) {
    if (k < 1 || k > 15 || k % 2 == 0) {
      throw ConfigError(std::string("dilation kernel '") + name + "' must be odd and in [1, 15]");
    }
  };
  checkKernel(dilationKernels.center, "center");
  checkKernel(dilationKernels.periphery, "periphery");
  if (dilationKernels.center > dilationKernels.periphery) {
    throw ConfigError("center dilation kernel must not exceed the periphery kernel");
  }
  if (!(hqsDepthSlack >= 0.0)) throw ConfigError("hqsDepthSlack must be non-negative");
  if (!(lowPrecisionThresholdPx >= 0.0) || !(lodCullThresholdPx >= 0.0)) {
    throw ConfigError("pixel thresholds must be non-negative");
  }
  if (peripheralThresholds) {
    const auto& t = *peripheralThresholds;
    if (!(t.centerRadiusFrac >= 0.0 && t.centerRadiusFrac <= t.midRadiusFrac)) {
      throw ConfigError("peripheral ring radii must satisfy 0 <= center <= mid");
    }
  }
}

unsigned RenderConfig::resolved_threads() const {
  if (threadCount != 0) return threadCount;
  return std::max(1u, std::thread::hardware_concurrency());
}

RenderStats& RenderStats::operator+=(const RenderStats& o) {
  batchesProcessed += o.batchesProcessed;
  batchesRendered += o.batchesRendered;
  pointsProcessed += o.pointsProcessed;
  pointsRendered += o.pointsRendered;
  coordinateBytesLoaded += o.coordinateBytesLoaded;
  colorBytesLoaded += o.colorBytesLoaded;
  atomicMinCalls += o.atomicMinCalls;
  atomicAddCalls += o.atomicAddCalls;
  frameMillis += o.frameMillis;
  return *this;
}

}  // namespace pcr
