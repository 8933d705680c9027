#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pcr/cloud.hpp"
#include "pcr/config.hpp"
#include "pcr/framebuffer.hpp"

namespace pcr {

struct Image {
  int width = 0;
  int height = 0;
  std::vector<Rgba> pixels;

  Image() = default;
  Image(int w, int h, Rgba fill) : width(w), height(h), pixels(std::size_t(w) * std::size_t(h), fill) {}
  Rgba& at(int x, int y) { return pixels[std::size_t(y) * width + x]; }
  Rgba at(int x, int y) const { return pixels[std::size_t(y) * width + x]; }
  friend bool operator==(const Image&, const Image&) = default;
};

/// Looks up the color of every visible point; clear pixels take the
/// background. Adds 4 colorBytesLoaded per visible pixel to `stats`.
/// Throws ConsistencyError if an entry indexes past `colors`.
Image resolve_visibility(const Framebuffer& fb, std::span<const Rgba> colors, Rgba background,
                         RenderStats* stats = nullptr);

/// Per-pixel depth of the winning entry; +inf for clear pixels.
std::vector<float> depth_of(const Framebuffer& fb);

// Fast accumulator word: R:16 | G:16 | B:16 | count:16, count lowest.
inline constexpr std::uint64_t fast_contribution(Rgba c) {
  return (std::uint64_t(red(c)) << 48) | (std::uint64_t(green(c)) << 32) | (std::uint64_t(blue(c)) << 16) | 1u;
}
// Wide accumulator word: R:18 | G:18 | B:18 | count:10.
inline constexpr std::uint64_t wide_contribution(Rgba c) {
  return (std::uint64_t(red(c)) << 46) | (std::uint64_t(green(c)) << 28) | (std::uint64_t(blue(c)) << 10) | 1u;
}
// Robust words: (R:32 | G:32) and (B:32 | count:32).
inline constexpr std::uint64_t robust_rg_contribution(Rgba c) {
  return (std::uint64_t(red(c)) << 32) | std::uint64_t(green(c));
}
inline constexpr std::uint64_t robust_bc_contribution(Rgba c) { return (std::uint64_t(blue(c)) << 32) | 1u; }

inline constexpr std::uint32_t kFastCountLimit = 255;

/// Summed color of one pixel, whatever accumulator it came from.
struct ColorSum {
  std::uint64_t r = 0, g = 0, b = 0, count = 0;
};

/// Rounded mean (sum + count / 2) / count per channel, opaque alpha.
Rgba resolve_mean(const ColorSum& s);

/// Buffers of the two-pass high-quality shading renderer.
struct HqsTarget {
  int width = 0;
  int height = 0;
  /// Float bit patterns of the closest depth; all-ones when empty.
  std::vector<std::uint32_t> depthPass;
  std::vector<std::uint64_t> fastAccum;
  std::vector<std::uint64_t> robustRg;
  std::vector<std::uint64_t> robustBc;
  /// Nonzero where the fast accumulator saw more than 255 contributors.
  std::vector<std::uint8_t> overflow;

  HqsTarget() = default;
  HqsTarget(int w, int h);
  void clear();

  std::size_t size() const { return depthPass.size(); }
  float depth(std::size_t i) const;
  ColorSum sum(std::size_t i, HqsVariant variant) const;
  std::size_t overflow_count() const;
};

struct HqsFrame {
  Image image;
  RenderStats stats;
};

/// Depth pass (closest point per pixel), then a color pass summing every
/// point within closest * (1 + hqsDepthSlack), then a per-pixel mean.
/// With HqsVariant::Fast, overflowing pixels are re-accumulated into the
/// robust buffers in a third pass and resolved from those.
HqsFrame hqs_render(const EncodedCloud& cloud, const Camera& cam, const RenderConfig& cfg, HqsTarget& target,
                    Rgba background);

/// Depth-aware hole filling. Every empty pixel (depth +inf) takes the color
/// of the closest-depth non-empty source pixel inside a k x k window, where
/// k is cfg.dilationKernels.center, the odd midpoint, or .periphery by ring.
/// Depth ties go to the smallest row-major index.
Image dilate(const Image& img, std::span<const float> depth, const RenderConfig& cfg);

/// Kernel edge length used by dilate() at pixel (x, y).
int dilation_kernel_at(int x, int y, int width, int height, const RenderConfig& cfg);

}  // namespace pcr
