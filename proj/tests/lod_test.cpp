#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "pcr/error.hpp"
#include "pcr/lod.hpp"
#include "support/fixtures.hpp"

using namespace pcr;

namespace {

// Points decoded at High precision, keyed by the color tag to map back.
std::vector<Vec3> node_points(const LodTree& t, const LodNode& n) {
  std::vector<Vec3> pts;
  for (std::uint64_t i = n.firstPoint; i < n.firstPoint + n.numPoints; ++i) {
    pts.push_back(decode(t.points.point(i), PrecisionLevel::High, n.box));
  }
  return pts;
}

const LodTree& cube_tree() {
  static const LodTree tree = [] {
    RawCloud c = fixtures::uniform_cube(1'000'000, 42, {{0, 0, 0}, {8, 8, 8}});
    return build_lod(c);
  }();
  return tree;
}

}  // namespace

TEST(BuildLod, RootOccupancyBounded) {
  const LodTree& t = cube_tree();
  ASSERT_FALSE(t.nodes.empty());
  EXPECT_LE(t.nodes[0].numPoints, 128u * 128u * 128u);
  for (const auto& n : t.nodes) {
    EXPECT_LE(n.numPoints, std::max<std::uint32_t>(128u * 128u * 128u, 20000u));
    EXPECT_GE(n.numPoints, 1u);
  }
}

TEST(BuildLod, AdditiveCompleteness) {
  const LodTree& t = cube_tree();
  std::uint64_t total = 0;
  for (const auto& n : t.nodes) total += n.numPoints;
  EXPECT_EQ(total, 1'000'000u);
  EXPECT_EQ(t.points.size(), 1'000'000u);
}

TEST(BuildLod, EveryInputPointAppearsOnce) {
  RawCloud c = fixtures::uniform_cube(60000, 3);
  for (std::size_t i = 0; i < c.size(); ++i) c.colors[i] = make_rgba(0, 0, 0, 0) | std::uint32_t(i);
  const LodTree t = build_lod(c, {128, 2000, 20});
  std::vector<int> seen(c.size(), 0);
  for (const auto& n : t.nodes) {
    for (std::uint64_t i = n.firstPoint; i < n.firstPoint + n.numPoints; ++i) {
      const std::uint32_t id = t.points.colors[i];
      ASSERT_LT(id, c.size());
      ++seen[id];
      const Vec3 p = decode(t.points.point(i), PrecisionLevel::High, n.box);
      for (int k = 0; k < 3; ++k) ASSERT_NEAR(p[k], c.positions[id][k], 1e-8);
    }
  }
  EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; }));
}

TEST(BuildLod, InteriorNodesRespectSpacing) {
  const LodTree& t = cube_tree();
  int checked = 0;
  for (const auto& n : t.nodes) {
    if (t.is_leaf(n)) continue;
    const auto pts = node_points(t, n);
    const double bound = n.spacing / std::sqrt(3.0);
    // The High-precision decode moves each point by at most one 2^-30 cell.
    const double slack = 2.0 * std::sqrt(3.0) * (n.box.max[0] - n.box.min[0]) / 1073741824.0;
    // Brute force over a coarse hash so the check stays quadratic only locally.
    std::map<std::array<long, 3>, std::vector<std::size_t>> buckets;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      std::array<long, 3> key;
      for (int k = 0; k < 3; ++k) key[k] = long(std::floor(pts[i][k] / bound));
      buckets[key].push_back(i);
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
      std::array<long, 3> key;
      for (int k = 0; k < 3; ++k) key[k] = long(std::floor(pts[i][k] / bound));
      for (long dz = -1; dz <= 1; ++dz)
        for (long dy = -1; dy <= 1; ++dy)
          for (long dx = -1; dx <= 1; ++dx) {
            auto it = buckets.find({key[0] + dx, key[1] + dy, key[2] + dz});
            if (it == buckets.end()) continue;
            for (std::size_t j : it->second) {
              if (j <= i) continue;
              ASSERT_GE(length(pts[i] - pts[j]), bound - slack) << "node " << n.nodeId;
            }
          }
    }
    if (++checked == 3) break;
  }
  EXPECT_GT(checked, 0);
}

TEST(BuildLod, DeterministicAcrossRuns) {
  const RawCloud c = fixtures::sphere_shell(80000, 12);
  const LodTree a = build_lod(c, {128, 5000, 20});
  const LodTree b = build_lod(c, {128, 5000, 20});
  ASSERT_EQ(a.nodes.size(), b.nodes.size());
  EXPECT_EQ(a.points, b.points);
}

TEST(BuildLod, ChildBoxesAreOctants) {
  const LodTree& t = cube_tree();
  EXPECT_EQ(t.rootBox.max[0] - t.rootBox.min[0], t.rootBox.max[2] - t.rootBox.min[2]);
  for (const auto& n : t.nodes) {
    for (int o = 0; o < 8; ++o) {
      if (n.children[o] < 0) continue;
      const LodNode& c = t.nodes[n.children[o]];
      EXPECT_EQ(c.level, n.level + 1);
      EXPECT_EQ(c.parent, std::int32_t(n.nodeId));
      const Vec3 mid = n.box.center();
      for (int k = 0; k < 3; ++k) {
        EXPECT_EQ(c.box.min[k], ((o >> k) & 1) ? mid[k] : n.box.min[k]);
        EXPECT_EQ(c.box.max[k], ((o >> k) & 1) ? n.box.max[k] : mid[k]);
      }
    }
  }
}

TEST(BuildLod, EmptyInputRejected) { EXPECT_THROW(build_lod(RawCloud{}), ConfigError); }

TEST(BuildLod, SinglePointIsSingleNode) {
  RawCloud c;
  c.push_back({1, 1, 1}, make_rgba(1, 2, 3));
  const LodTree t = build_lod(c);
  ASSERT_EQ(t.nodes.size(), 1u);
  EXPECT_EQ(t.nodes[0].numPoints, 1u);
}

TEST(BuildLod, DuplicatesTerminate) {
  const RawCloud c = fixtures::coincident({2, 2, 2}, std::vector<Rgba>(30000, make_rgba(5, 5, 5)));
  const LodTree t = build_lod(c);
  std::uint64_t total = 0;
  for (const auto& n : t.nodes) total += n.numPoints;
  EXPECT_EQ(total, 30000u);
}

TEST(FlattenToBatches, SingleNode) {
  const LodTree t = build_lod(fixtures::uniform_cube(500, 1));
  const auto batches = flatten_to_batches(t);
  ASSERT_EQ(batches.size(), 1u);
  EXPECT_EQ(batches[0].numPoints, 500u);
  EXPECT_EQ(batches[0].lodLevel, 0);
}

TEST(FlattenToBatches, TilesAndCarriesSpacing) {
  const LodTree& t = cube_tree();
  const auto batches = flatten_to_batches(t);
  EXPECT_EQ(batches, t.points.batches);
  std::uint64_t next = 0;
  for (const auto& b : batches) {
    EXPECT_EQ(b.firstPoint, next);
    next += b.numPoints;
    ASSERT_TRUE(b.lodLevel && b.spacing);
    EXPECT_DOUBLE_EQ(*b.spacing, t.root_edge() / 128.0 / std::ldexp(1.0, *b.lodLevel));
  }
  EXPECT_EQ(next, t.points.size());
}

TEST(LodCull, SingleTier) {
  RenderConfig cfg;
  Batch node;
  node.lodLevel = 3;
  EXPECT_EQ(lod_cull(node, 99.0, cfg, RingTier::Center), LodDecision::Cull);
  EXPECT_EQ(lod_cull(node, 100.0, cfg, RingTier::Periphery), LodDecision::Keep);
  cfg.lodCullThresholdPx = 0.0;
  EXPECT_EQ(lod_cull(node, 0.0, cfg, RingTier::Center), LodDecision::Keep);
}

TEST(LodCull, UnstructuredBatchNeverCulled) {
  const RenderConfig cfg;
  EXPECT_EQ(lod_cull(Batch{}, 10.0, cfg, RingTier::Center), LodDecision::Keep);
}

TEST(LodCull, PeripheralTiers) {
  RenderConfig cfg;
  cfg.peripheralThresholds = PeripheralTiers{};
  Batch node;
  node.lodLevel = 1;
  EXPECT_EQ(lod_cull(node, 250.0, cfg, RingTier::Periphery), LodDecision::Cull);
  EXPECT_EQ(lod_cull(node, 250.0, cfg, RingTier::Mid), LodDecision::Keep);
  EXPECT_EQ(lod_cull(node, 150.0, cfg, RingTier::Mid), LodDecision::Cull);
  EXPECT_EQ(lod_cull(node, 150.0, cfg, RingTier::Center), LodDecision::Keep);
}

TEST(Rings, Geometry) {
  const PeripheralTiers tiers;
  // 200 x 100 viewport: half of the smaller side is 50 px.
  EXPECT_EQ(ring_of(100, 50, 200, 100, tiers), RingTier::Center);
  EXPECT_EQ(ring_of(100 + 20, 50, 200, 100, tiers), RingTier::Center);
  EXPECT_EQ(ring_of(100 + 30, 50, 200, 100, tiers), RingTier::Mid);
  EXPECT_EQ(ring_of(100 + 37.5, 50, 200, 100, tiers), RingTier::Mid);
  EXPECT_EQ(ring_of(100 + 38, 50, 200, 100, tiers), RingTier::Periphery);
  ProjectedBox covering{false, 0, 0, 200, 100};
  EXPECT_EQ(ring_of(covering, 200, 100, tiers), RingTier::Center);
}
