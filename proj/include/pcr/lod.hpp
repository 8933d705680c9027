#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "pcr/cloud.hpp"
#include "pcr/config.hpp"
#include "pcr/rings.hpp"

namespace pcr {

struct LodNode {
  std::uint32_t nodeId = 0;
  std::int32_t level = 0;
  std::int32_t parent = -1;
  Aabb box;
  std::uint64_t firstPoint = 0;
  std::uint32_t numPoints = 0;
  double spacing = 0.0;
  /// Indexed by octant (bit 0 = +x, bit 1 = +y, bit 2 = +z); -1 if absent.
  std::array<std::int32_t, 8> children{-1, -1, -1, -1, -1, -1, -1, -1};
};

/// Additive octree: every input point lives in exactly one node, and the
/// points of a node form one contiguous range of `points` (depth-first
/// node order). `points.batches` holds one batch per node.
struct LodTree {
  Aabb rootBox;
  std::uint32_t gridResolution = 128;
  std::vector<LodNode> nodes;
  EncodedCloud points;

  double root_edge() const { return rootBox.max[0] - rootBox.min[0]; }
  /// rootEdge / gridResolution / 2^level.
  double spacing_at(int level) const;
  bool is_leaf(const LodNode& n) const;
};

struct LodOptions {
  std::uint32_t gridResolution = 128;
  std::uint32_t leafCapacity = 20000;
  /// Nodes at this level keep all their points, bounding recursion on
  /// heavily duplicated inputs.
  std::int32_t maxLevel = 20;
};

/// Top-down construction. Each node overlays a gridResolution^3 grid on its
/// cube; a point stays in the node if its cell is free and no accepted
/// point in the neighboring cells is closer than spacing / sqrt(3),
/// otherwise it moves to the child octant containing it. A node that
/// receives at most leafCapacity points, or rejects none, keeps them all.
LodTree build_lod(const RawCloud& cloud, const LodOptions& options = {});

/// One batch per non-empty node, depth-first, carrying level and spacing.
std::vector<Batch> flatten_to_batches(const LodTree& tree);

enum class LodDecision { Keep, Cull };

/// Culls LOD batches that project smaller than the threshold of their ring
/// (or the single lodCullThresholdPx without tiers). Batches without a
/// level are never culled.
LodDecision lod_cull(const Batch& batch, double sizePx, const RenderConfig& cfg, RingTier tier);

}  // namespace pcr
