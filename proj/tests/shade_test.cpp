#include <gtest/gtest.h>

#include <limits>
#include <random>

#include "pcr/error.hpp"
#include "pcr/raster.hpp"
#include "pcr/shade.hpp"
#include "support/fixtures.hpp"

using namespace pcr;
using pcr::fixtures::look;

namespace {

constexpr float kInf = std::numeric_limits<float>::infinity();
constexpr Rgba kBlack = make_rgba(0, 0, 0, 255);

// Scalar reference: rounded mean over a contributor list.
Rgba oracle_mean(const std::vector<Rgba>& colors) {
  std::uint64_t r = 0, g = 0, b = 0;
  for (Rgba c : colors) {
    r += red(c);
    g += green(c);
    b += blue(c);
  }
  const std::uint64_t n = colors.size();
  return make_rgba(std::uint8_t((r + n / 2) / n), std::uint8_t((g + n / 2) / n), std::uint8_t((b + n / 2) / n), 255);
}

std::vector<Rgba> random_colors(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> c(0, 255);
  std::vector<Rgba> out(n);
  for (auto& v : out) v = make_rgba(std::uint8_t(c(rng)), std::uint8_t(c(rng)), std::uint8_t(c(rng)), 255);
  return out;
}

struct Centre {
  Camera cam = look({0, -5, 0}, {0, 0, 0}, 33, 33);
  std::size_t pixel = 16 * 33 + 16;
};

HqsFrame hqs_of(const RawCloud& c, HqsVariant variant, HqsTarget& target, unsigned threads = 0) {
  RenderConfig cfg;
  cfg.hqsEnabled = true;
  cfg.hqsVariant = variant;
  cfg.threadCount = threads;
  return hqs_render(build_batches(c, 10240), Centre{}.cam, cfg, target, kBlack);
}

}  // namespace

TEST(ResolveVisibility, AllClearIsBackground) {
  Framebuffer fb(4, 3);
  RenderStats s;
  const Image img = resolve_visibility(fb, std::vector<Rgba>{}, make_rgba(1, 2, 3), &s);
  for (Rgba p : img.pixels) EXPECT_EQ(p, make_rgba(1, 2, 3));
  EXPECT_EQ(s.colorBytesLoaded, 0u);
}

TEST(ResolveVisibility, LooksUpIndex) {
  Framebuffer fb(4, 4);
  fb.atomic_min(6, pack_entry(1.0f, 5));
  fb.atomic_min(9, pack_entry(2.0f, 0));
  std::vector<Rgba> colors = random_colors(6, 1);
  RenderStats s;
  const Image img = resolve_visibility(fb, colors, kBlack, &s);
  EXPECT_EQ(img.pixels[6], colors[5]);
  EXPECT_EQ(img.pixels[9], colors[0]);
  EXPECT_EQ(img.pixels[0], kBlack);
  EXPECT_EQ(s.colorBytesLoaded, 8u);
}

TEST(ResolveVisibility, OutOfRangeIndexIsConsistencyError) {
  Framebuffer fb(2, 2);
  fb.atomic_min(1, pack_entry(1.0f, 3));
  EXPECT_THROW(resolve_visibility(fb, random_colors(3, 1), kBlack), ConsistencyError);
}

TEST(HqsAccumulator, WhiteContribution) {
  EXPECT_EQ(fast_contribution(make_rgba(255, 255, 255)), 0x00FF00FF00FF0001ull);
  EXPECT_EQ(robust_rg_contribution(make_rgba(7, 9, 0)), (7ull << 32) | 9);
  EXPECT_EQ(robust_bc_contribution(make_rgba(0, 0, 11)), (11ull << 32) | 1);
}

TEST(HqsRender, SingleWhitePoint) {
  HqsTarget target(33, 33);
  const HqsFrame f =
      hqs_of(fixtures::coincident({0, 0, 0}, {make_rgba(255, 255, 255)}), HqsVariant::Fast, target);
  EXPECT_EQ(target.fastAccum[Centre{}.pixel], 0x00FF00FF00FF0001ull);
  EXPECT_EQ(f.image.pixels[Centre{}.pixel], make_rgba(255, 255, 255, 255));
  EXPECT_EQ(f.image.pixels[0], kBlack);
}

TEST(HqsRender, TwoPointsWithinSlackAverage) {
  RawCloud c;
  c.push_back({0, 0, 0}, make_rgba(100, 0, 0));
  c.push_back({0, 0.04, 0}, make_rgba(200, 0, 0));  // 0.8% behind at depth 5
  HqsTarget target(33, 33);
  const HqsFrame f = hqs_of(c, HqsVariant::Fast, target);
  EXPECT_EQ(f.image.pixels[Centre{}.pixel], make_rgba(150, 0, 0, 255));
}

TEST(HqsRender, PointsBeyondSlackExcluded) {
  RawCloud c;
  c.push_back({0, 0, 0}, make_rgba(100, 0, 0));
  c.push_back({0, 0.1, 0}, make_rgba(200, 0, 0));  // 2% behind
  HqsTarget target(33, 33);
  const HqsFrame f = hqs_of(c, HqsVariant::Fast, target);
  EXPECT_EQ(f.image.pixels[Centre{}.pixel], make_rgba(100, 0, 0, 255));
}

TEST(HqsRender, ContributorCountsMatchOracle) {
  for (std::size_t n : {1u, 2u, 254u, 255u, 300u}) {
    const auto colors = random_colors(n, n);
    for (auto variant : {HqsVariant::Fast, HqsVariant::Robust, HqsVariant::Wide}) {
      HqsTarget target(33, 33);
      const HqsFrame f = hqs_of(fixtures::coincident({0, 0, 0}, colors), variant, target);
      EXPECT_EQ(f.image.pixels[Centre{}.pixel], oracle_mean(colors)) << n << " contributors";
      if (variant == HqsVariant::Fast) EXPECT_EQ(target.overflow_count(), n > 255 ? 1u : 0u) << n;
    }
  }
}

TEST(HqsRender, OverflowFlagAndRobustFallback) {
  const auto colors = std::vector<Rgba>(300, make_rgba(255, 255, 255));
  HqsTarget target(33, 33);
  const HqsFrame f = hqs_of(fixtures::coincident({0, 0, 0}, colors), HqsVariant::Fast, target);
  EXPECT_EQ(target.overflow[Centre{}.pixel], 1u);
  EXPECT_EQ(target.robustBc[Centre{}.pixel] & 0xFFFFFFFFu, 300u);
  EXPECT_EQ(f.image.pixels[Centre{}.pixel], make_rgba(255, 255, 255, 255));
}

TEST(HqsRender, ScheduleIndependent) {
  const RawCloud c = fixtures::uniform_cube(200000, 17, {{-1, -1, -1}, {1, 1, 1}});
  HqsTarget a(33, 33), b(33, 33);
  const HqsFrame fa = hqs_of(c, HqsVariant::Fast, a, 1);
  const HqsFrame fb = hqs_of(c, HqsVariant::Fast, b, 8);
  EXPECT_EQ(fa.image, fb.image);
  EXPECT_EQ(a.fastAccum, b.fastAccum);
  EXPECT_EQ(a.robustRg, b.robustRg);
}

TEST(HqsRender, DepthPassMatchesPlainRender) {
  const RawCloud c = fixtures::sphere_shell(50000, 3);
  const EncodedCloud e = build_batches(c, 10240);
  const Camera cam = look({0.3, -3, 0.2}, {0, 0, 0}, 96, 80);
  RenderConfig cfg;
  Framebuffer fb(96, 80);
  render(e, cam, cfg, fb);
  cfg.hqsEnabled = true;
  HqsTarget target(96, 80);
  hqs_render(e, cam, cfg, target, kBlack);
  for (std::size_t i = 0; i < fb.size(); ++i) {
    if (fb[i] == kClearEntry) {
      EXPECT_EQ(target.depthPass[i], 0xFFFFFFFFu);
    } else {
      EXPECT_EQ(target.depthPass[i], entry_depth_bits(fb[i]));
    }
  }
}

TEST(HqsRender, RequiresFlag) {
  HqsTarget target(33, 33);
  EXPECT_THROW(hqs_render(build_batches(fixtures::uniform_cube(5, 1), 10240), Centre{}.cam, RenderConfig{}, target,
                          kBlack),
               ConfigError);
}

TEST(Dilate, FullImageUnchanged) {
  Image img(5, 5, make_rgba(1, 1, 1));
  std::vector<float> depth(25, 1.0f);
  EXPECT_EQ(dilate(img, depth, RenderConfig{}), img);
}

TEST(Dilate, SinglePixelFillsThreeByThree) {
  Image img(9, 9, kBlack);
  std::vector<float> depth(81, kInf);
  img.at(4, 4) = make_rgba(200, 10, 10);
  depth[4 * 9 + 4] = 1.0f;
  RenderConfig cfg;
  cfg.dilationKernels = {3, 3};
  const Image out = dilate(img, depth, cfg);
  int filled = 0;
  for (int y = 0; y < 9; ++y) {
    for (int x = 0; x < 9; ++x) {
      const bool near = std::abs(x - 4) <= 1 && std::abs(y - 4) <= 1;
      EXPECT_EQ(out.at(x, y), near ? make_rgba(200, 10, 10) : kBlack) << x << "," << y;
      filled += out.at(x, y) != kBlack;
    }
  }
  EXPECT_EQ(filled, 9);
}

TEST(Dilate, ClosestNeighborWins) {
  Image img(9, 9, kBlack);
  std::vector<float> depth(81, kInf);
  img.at(3, 4) = make_rgba(1, 0, 0);
  depth[4 * 9 + 3] = 2.0f;
  img.at(5, 4) = make_rgba(0, 1, 0);
  depth[4 * 9 + 5] = 1.0f;
  const Image out = dilate(img, depth, RenderConfig{});
  EXPECT_EQ(out.at(4, 4), make_rgba(0, 1, 0));
  EXPECT_EQ(out.at(3, 4), make_rgba(1, 0, 0));
}

TEST(Dilate, TiesGoToSmallestIndex) {
  Image img(9, 9, kBlack);
  std::vector<float> depth(81, kInf);
  img.at(4, 3) = make_rgba(1, 0, 0);
  depth[3 * 9 + 4] = 1.0f;
  img.at(4, 5) = make_rgba(0, 1, 0);
  depth[5 * 9 + 4] = 1.0f;
  const Image out = dilate(img, depth, RenderConfig{});
  EXPECT_EQ(out.at(4, 4), make_rgba(1, 0, 0));
}

TEST(Dilate, KernelGrowsTowardsPeriphery) {
  const RenderConfig cfg;
  // 100 x 100: center radius 20 px, mid radius 37.5 px.
  EXPECT_EQ(dilation_kernel_at(50, 50, 100, 100, cfg), 3);
  EXPECT_EQ(dilation_kernel_at(50 + 30, 50, 100, 100, cfg), 5);
  EXPECT_EQ(dilation_kernel_at(0, 0, 100, 100, cfg), 7);

  Image img(100, 100, kBlack);
  std::vector<float> depth(100 * 100, kInf);
  img.at(3, 3) = make_rgba(9, 9, 9);
  depth[3 * 100 + 3] = 1.0f;
  const Image out = dilate(img, depth, cfg);
  EXPECT_EQ(out.at(0, 0), make_rgba(9, 9, 9));  // 7x7 window reaches 3 px
  EXPECT_EQ(out.at(6, 6), make_rgba(9, 9, 9));
  EXPECT_EQ(out.at(7, 7), kBlack);
}

TEST(Dilate, NeverOverwritesCoveredPixels) {
  Image img(16, 16, kBlack);
  std::vector<float> depth(256, kInf);
  std::mt19937 rng(3);
  for (int i = 0; i < 60; ++i) {
    const int p = int(rng() % 256);
    img.pixels[p] = make_rgba(std::uint8_t(i), 7, 7);
    depth[p] = float(1 + rng() % 5);
  }
  const Image out = dilate(img, depth, RenderConfig{});
  for (int p = 0; p < 256; ++p) {
    if (depth[p] != kInf) EXPECT_EQ(out.pixels[p], img.pixels[p]);
  }
}
