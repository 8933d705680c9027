#include "pcr/lod.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pcr/error.hpp"

namespace pcr {

double LodTree::spacing_at(int level) const {
  return root_edge() / double(gridResolution) / std::ldexp(1.0, level);
}

bool LodTree::is_leaf(const LodNode& n) const {
  for (const auto c : n.children) {
    if (c >= 0) return false;
  }
  return true;
}

namespace {

constexpr std::uint32_t kFree = std::numeric_limits<std::uint32_t>::max();

class Builder {
 public:
  Builder(const RawCloud& cloud, const LodOptions& options, LodTree& tree)
      : cloud_(cloud), opt_(options), tree_(tree) {
    const std::size_t res = options.gridResolution;
    grid_.assign(res * res * res, kFree);
  }

  std::int32_t build(const Aabb& cube, std::int32_t level, std::int32_t parent,
                     std::vector<std::uint32_t> indices) {
    const double edge = cube.max[0] - cube.min[0];
    const double spacing = edge / double(opt_.gridResolution);

    std::vector<std::uint32_t> accepted;
    std::array<std::vector<std::uint32_t>, 8> routed;
    const bool keepAll = indices.size() <= opt_.leafCapacity || level >= opt_.maxLevel || !(edge > 0.0);
    if (keepAll) {
      accepted = std::move(indices);
    } else {
      subsample(cube, spacing, indices, accepted, routed);
      bool rejectedAny = false;
      for (const auto& r : routed) rejectedAny |= !r.empty();
      if (!rejectedAny) accepted = std::move(indices);
    }

    const auto nodeIndex = std::int32_t(tree_.nodes.size());
    LodNode node;
    node.nodeId = std::uint32_t(nodeIndex);
    node.level = level;
    node.parent = parent;
    node.box = cube;
    node.firstPoint = tree_.points.size();
    node.numPoints = std::uint32_t(accepted.size());
    node.spacing = spacing;
    tree_.nodes.push_back(node);
    tree_.points.append_batch(cloud_, accepted, cube, level, spacing);
    accepted = {};

    const Vec3 center = cube.center();
    for (int octant = 0; octant < 8; ++octant) {
      if (routed[octant].empty()) continue;
      Aabb child;
      for (int k = 0; k < 3; ++k) {
        const bool upper = (octant >> k) & 1;
        child.min[k] = upper ? center[k] : cube.min[k];
        child.max[k] = upper ? cube.max[k] : center[k];
      }
      const std::int32_t childIndex = build(child, level + 1, nodeIndex, std::move(routed[octant]));
      tree_.nodes[nodeIndex].children[octant] = childIndex;
    }
    return nodeIndex;
  }

 private:
  void subsample(const Aabb& cube, double spacing, const std::vector<std::uint32_t>& indices,
                 std::vector<std::uint32_t>& accepted, std::array<std::vector<std::uint32_t>, 8>& routed) {
    const int res = int(opt_.gridResolution);
    const double edge = cube.max[0] - cube.min[0];
    const double minDist2 = spacing * spacing / 3.0;
    const Vec3 center = cube.center();
    touched_.clear();

    auto cellOf = [&](double x, int k) {
      const int c = int(std::floor((x - cube.min[k]) / edge * res));
      return std::clamp(c, 0, res - 1);
    };
    auto slot = [res](int x, int y, int z) { return (std::size_t(z) * res + y) * res + x; };

    for (const std::uint32_t idx : indices) {
      const Vec3& p = cloud_.positions[idx];
      const int cx = cellOf(p[0], 0), cy = cellOf(p[1], 1), cz = cellOf(p[2], 2);
      bool free = grid_[slot(cx, cy, cz)] == kFree;
      for (int dz = -1; free && dz <= 1; ++dz) {
        for (int dy = -1; free && dy <= 1; ++dy) {
          for (int dx = -1; free && dx <= 1; ++dx) {
            const int nx = cx + dx, ny = cy + dy, nz = cz + dz;
            if (nx < 0 || ny < 0 || nz < 0 || nx >= res || ny >= res || nz >= res) continue;
            const std::uint32_t other = grid_[slot(nx, ny, nz)];
            if (other == kFree) continue;
            const Vec3 d = cloud_.positions[other] - p;
            if (dot(d, d) < minDist2) free = false;
          }
        }
      }
      if (free) {
        const std::size_t s = slot(cx, cy, cz);
        grid_[s] = idx;
        touched_.push_back(s);
        accepted.push_back(idx);
      } else {
        const int octant = (p[0] >= center[0] ? 1 : 0) | (p[1] >= center[1] ? 2 : 0) | (p[2] >= center[2] ? 4 : 0);
        routed[octant].push_back(idx);
      }
    }
    for (const std::size_t s : touched_) grid_[s] = kFree;
  }

  const RawCloud& cloud_;
  const LodOptions& opt_;
  LodTree& tree_;
  std::vector<std::uint32_t> grid_;
  std::vector<std::size_t> touched_;
};

}  // namespace

LodTree build_lod(const RawCloud& cloud, const LodOptions& options) {
  if (cloud.empty()) throw ConfigError("build_lod: input cloud is empty");
  if (options.gridResolution == 0 || options.gridResolution > 1024) {
    throw ConfigError("build_lod: grid resolution must lie in [1, 1024]");
  }
  if (cloud.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw ConfigError("build_lod: more than 2^32 - 1 points");
  }
  LodTree tree;
  tree.rootBox = Aabb::of(cloud.positions).cubed();
  tree.gridResolution = options.gridResolution;
  tree.points.bounds = cloud.bounds;
  tree.points.lowWords.reserve(cloud.size());
  tree.points.medWords.reserve(cloud.size());
  tree.points.highWords.reserve(cloud.size());
  tree.points.colors.reserve(cloud.size());

  std::vector<std::uint32_t> all(cloud.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = std::uint32_t(i);
  Builder builder(cloud, options, tree);
  builder.build(tree.rootBox, 0, -1, std::move(all));
  return tree;
}

std::vector<Batch> flatten_to_batches(const LodTree& tree) {
  std::vector<Batch> batches;
  batches.reserve(tree.nodes.size());
  for (const auto& n : tree.nodes) {
    if (n.numPoints == 0) continue;
    Batch b;
    b.firstPoint = n.firstPoint;
    b.numPoints = n.numPoints;
    b.box = n.box;
    b.lodLevel = n.level;
    b.spacing = n.spacing;
    batches.push_back(b);
  }
  return batches;
}

LodDecision lod_cull(const Batch& batch, double sizePx, const RenderConfig& cfg, RingTier tier) {
  if (!batch.lodLevel) return LodDecision::Keep;
  const double threshold =
      cfg.peripheralThresholds ? tier_threshold(tier, *cfg.peripheralThresholds) : cfg.lodCullThresholdPx;
  return sizePx < threshold ? LodDecision::Cull : LodDecision::Keep;
}

}  // namespace pcr
