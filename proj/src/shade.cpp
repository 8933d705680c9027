#include "pcr/shade.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <limits>

#include "pcr/error.hpp"
#include "pcr/frustum.hpp"
#include "pcr/parallel.hpp"
#include "pcr/raster.hpp"
#include "pcr/rings.hpp"

namespace pcr {

Image resolve_visibility(const Framebuffer& fb, std::span<const Rgba> colors, Rgba background, RenderStats* stats) {
  Image img(fb.width(), fb.height(), background);
  std::uint64_t visible = 0;
  for (std::size_t i = 0; i < fb.size(); ++i) {
    const FramebufferEntry e = fb[i];
    if (e == kClearEntry) continue;
    const std::uint32_t index = entry_index(e);
    if (index >= colors.size()) {
      throw ConsistencyError("framebuffer entry " + std::to_string(i) + " references point " + std::to_string(index) +
                             " but only " + std::to_string(colors.size()) + " colors exist");
    }
    img.pixels[i] = colors[index];
    ++visible;
  }
  if (stats) stats->colorBytesLoaded += 4 * visible;
  return img;
}

std::vector<float> depth_of(const Framebuffer& fb) {
  std::vector<float> depth(fb.size(), std::numeric_limits<float>::infinity());
  for (std::size_t i = 0; i < fb.size(); ++i) {
    if (fb[i] != kClearEntry) depth[i] = entry_depth(fb[i]);
  }
  return depth;
}

Rgba resolve_mean(const ColorSum& s) {
  if (s.count == 0) return make_rgba(0, 0, 0, 0);
  auto mean = [&](std::uint64_t sum) { return std::uint8_t((sum + s.count / 2) / s.count); };
  return make_rgba(mean(s.r), mean(s.g), mean(s.b), 255);
}

HqsTarget::HqsTarget(int w, int h) : width(w), height(h) {
  if (w < 1 || h < 1) throw ConfigError("HQS target must be at least 1x1");
  const std::size_t n = std::size_t(w) * std::size_t(h);
  depthPass.resize(n);
  fastAccum.resize(n);
  robustRg.resize(n);
  robustBc.resize(n);
  overflow.resize(n);
  clear();
}

void HqsTarget::clear() {
  std::fill(depthPass.begin(), depthPass.end(), 0xFFFFFFFFu);
  std::fill(fastAccum.begin(), fastAccum.end(), 0);
  std::fill(robustRg.begin(), robustRg.end(), 0);
  std::fill(robustBc.begin(), robustBc.end(), 0);
  std::fill(overflow.begin(), overflow.end(), 0);
}

float HqsTarget::depth(std::size_t i) const {
  if (depthPass[i] == 0xFFFFFFFFu) return std::numeric_limits<float>::infinity();
  return std::bit_cast<float>(depthPass[i]);
}

ColorSum HqsTarget::sum(std::size_t i, HqsVariant variant) const {
  ColorSum s;
  if (variant == HqsVariant::Robust || (variant == HqsVariant::Fast && overflow[i])) {
    s.r = robustRg[i] >> 32;
    s.g = robustRg[i] & 0xFFFFFFFFu;
    s.b = robustBc[i] >> 32;
    s.count = robustBc[i] & 0xFFFFFFFFu;
  } else if (variant == HqsVariant::Fast) {
    const std::uint64_t w = fastAccum[i];
    s.r = (w >> 48) & 0xFFFF;
    s.g = (w >> 32) & 0xFFFF;
    s.b = (w >> 16) & 0xFFFF;
    s.count = w & 0xFFFF;
  } else {
    const std::uint64_t w = fastAccum[i];
    s.r = (w >> 46) & 0x3FFFF;
    s.g = (w >> 28) & 0x3FFFF;
    s.b = (w >> 10) & 0x3FFFF;
    s.count = w & 0x3FF;
  }
  return s;
}

std::size_t HqsTarget::overflow_count() const {
  return std::size_t(std::count_if(overflow.begin(), overflow.end(), [](std::uint8_t f) { return f != 0; }));
}

namespace {

template <typename T>
void atomic_min_u(T& slot, T value) {
  std::atomic_ref<T> ref(slot);
  T cur = ref.load(std::memory_order_relaxed);
  while (value < cur && !ref.compare_exchange_weak(cur, value, std::memory_order_relaxed)) {
  }
}

template <typename T>
T atomic_add(T& slot, T value) {
  return std::atomic_ref<T>(slot).fetch_add(value, std::memory_order_relaxed);
}

}  // namespace

HqsFrame hqs_render(const EncodedCloud& cloud, const Camera& cam, const RenderConfig& cfg, HqsTarget& target,
                    Rgba background) {
  const auto start = std::chrono::steady_clock::now();
  check_render_setup(cfg, target.width, target.height, cam);
  if (!cfg.hqsEnabled) throw ConfigError("hqs_render requires hqsEnabled");

  const FrustumPlanes frustum = FrustumPlanes::from_view_proj(cam.viewProj);
  const unsigned threads = cfg.resolved_threads();
  const std::size_t block = fetch_block_size(cfg);

  std::vector<BatchPlan> plans(cloud.batches.size());
  std::vector<std::size_t> surviving;
  HqsFrame frame;
  RenderStats& stats = frame.stats;
  for (std::size_t b = 0; b < cloud.batches.size(); ++b) {
    plans[b] = plan_batch(cloud.batches[b], cam, frustum, cfg);
    ++stats.batchesProcessed;
    if (plans[b].verdict != BatchPlan::Verdict::Render) continue;
    surviving.push_back(b);
    ++stats.batchesRendered;
    stats.pointsProcessed += cloud.batches[b].numPoints;
  }

  // Runs one pass over the surviving batches; fn(pixel, depthBits, index, stats).
  std::vector<RenderStats> perWorker(threads);
  auto pass = [&](auto&& fn) {
    parallel_for(surviving.size(), threads, [&](std::size_t k, unsigned worker) {
      const std::size_t b = surviving[k];
      const Batch& batch = cloud.batches[b];
      RenderStats& local = perWorker[worker];
      local.coordinateBytesLoaded += std::uint64_t(batch.numPoints) * 4u * words_per_point(plans[b].precision);
      const BatchProjector projector(batch.box, plans[b].precision, cam);
      projector.for_each_hit(cloud, batch, block, [&](std::uint32_t pixel, std::uint32_t depthBits, std::uint32_t index) {
        fn(pixel, depthBits, index, local);
      });
    });
  };

  // Pass 1: closest depth.
  pass([&](std::uint32_t pixel, std::uint32_t depthBits, std::uint32_t, RenderStats& local) {
    if (depthBits < std::atomic_ref<std::uint32_t>(target.depthPass[pixel]).load(std::memory_order_relaxed)) {
      atomic_min_u(target.depthPass[pixel], depthBits);
      ++local.atomicMinCalls;
    }
  });

  const double slack = 1.0 + cfg.hqsDepthSlack;
  auto inRange = [&](std::uint32_t pixel, std::uint32_t depthBits) {
    return double(std::bit_cast<float>(depthBits)) <= double(std::bit_cast<float>(target.depthPass[pixel])) * slack;
  };

  // Pass 2: sum colors within the depth range.
  pass([&](std::uint32_t pixel, std::uint32_t depthBits, std::uint32_t index, RenderStats& local) {
    if (!inRange(pixel, depthBits)) return;
    const Rgba c = cloud.colors[index];
    local.colorBytesLoaded += 4;
    ++local.pointsRendered;
    switch (cfg.hqsVariant) {
      case HqsVariant::Fast: {
        const std::uint64_t old = atomic_add(target.fastAccum[pixel], fast_contribution(c));
        ++local.atomicAddCalls;
        if ((old & 0xFFFF) >= kFastCountLimit) {
          std::atomic_ref<std::uint8_t>(target.overflow[pixel]).store(1, std::memory_order_relaxed);
        }
        break;
      }
      case HqsVariant::Wide:
        atomic_add(target.fastAccum[pixel], wide_contribution(c));
        ++local.atomicAddCalls;
        break;
      case HqsVariant::Robust:
        atomic_add(target.robustRg[pixel], robust_rg_contribution(c));
        atomic_add(target.robustBc[pixel], robust_bc_contribution(c));
        local.atomicAddCalls += 2;
        break;
    }
  });

  // Pass 3: redo overflowing pixels with the two-word accumulator.
  if (cfg.hqsVariant == HqsVariant::Fast && target.overflow_count() > 0) {
    pass([&](std::uint32_t pixel, std::uint32_t depthBits, std::uint32_t index, RenderStats& local) {
      if (!target.overflow[pixel] || !inRange(pixel, depthBits)) return;
      const Rgba c = cloud.colors[index];
      local.colorBytesLoaded += 4;
      atomic_add(target.robustRg[pixel], robust_rg_contribution(c));
      atomic_add(target.robustBc[pixel], robust_bc_contribution(c));
      local.atomicAddCalls += 2;
    });
  }
  for (const auto& s : perWorker) stats += s;

  frame.image = Image(target.width, target.height, background);
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (target.depthPass[i] == 0xFFFFFFFFu) continue;
    frame.image.pixels[i] = resolve_mean(target.sum(i, cfg.hqsVariant));
  }
  stats.frameMillis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return frame;
}

int dilation_kernel_at(int x, int y, int width, int height, const RenderConfig& cfg) {
  const PeripheralTiers tiers = cfg.peripheralThresholds.value_or(PeripheralTiers{});
  const int center = cfg.dilationKernels.center;
  const int periphery = cfg.dilationKernels.periphery;
  switch (ring_of(x + 0.5, y + 0.5, width, height, tiers)) {
    case RingTier::Center: return center;
    case RingTier::Mid: return (center + periphery) / 2 | 1;
    case RingTier::Periphery: return periphery;
  }
  return center;
}

Image dilate(const Image& img, std::span<const float> depth, const RenderConfig& cfg) {
  if (depth.size() != img.pixels.size()) throw ConfigError("dilate: depth buffer does not match the image");
  cfg.validate();
  Image out = img;
  const int w = img.width, h = img.height;
  parallel_for(std::size_t(h), cfg.resolved_threads(), [&](std::size_t row, unsigned) {
    const int y = int(row);
    for (int x = 0; x < w; ++x) {
      const std::size_t i = std::size_t(y) * w + x;
      if (depth[i] != std::numeric_limits<float>::infinity()) continue;
      const int r = dilation_kernel_at(x, y, w, h, cfg) / 2;
      float best = std::numeric_limits<float>::infinity();
      std::size_t bestIndex = 0;
      for (int ny = std::max(0, y - r); ny <= std::min(h - 1, y + r); ++ny) {
        for (int nx = std::max(0, x - r); nx <= std::min(w - 1, x + r); ++nx) {
          const std::size_t j = std::size_t(ny) * w + nx;
          // Row-major scan: strict < keeps the smallest index on ties.
          if (depth[j] < best) {
            best = depth[j];
            bestIndex = j;
          }
        }
      }
      if (best != std::numeric_limits<float>::infinity()) out.pixels[i] = img.pixels[bestIndex];
    }
  });
  return out;
}

}  // namespace pcr
