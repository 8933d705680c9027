#include "pcr/cloud.hpp"

#include <numeric>

#include "pcr/error.hpp"

namespace pcr {

void EncodedCloud::append_batch(const RawCloud& src, std::span<const std::uint32_t> indices,
                                const Aabb& box, std::optional<std::int32_t> lodLevel,
                                std::optional<double> spacing) {
  if (indices.empty()) throw ConfigError("a batch needs at least one point");
  Batch b;
  b.firstPoint = colors.size();
  b.numPoints = std::uint32_t(indices.size());
  b.box = box;
  b.lodLevel = lodLevel;
  b.spacing = spacing;
  for (const std::uint32_t i : indices) {
    const EncodedPoint e = split_and_pack(quantize(src.positions[i], box));
    lowWords.push_back(e.lowWord);
    medWords.push_back(e.medWord);
    highWords.push_back(e.highWord);
    colors.push_back(src.colors[i]);
  }
  batches.push_back(b);
}

EncodedCloud build_batches(const RawCloud& cloud, std::uint32_t batchSize) {
  if (batchSize == 0) throw ConfigError("batchSize must be at least 1");
  EncodedCloud out;
  out.batchSize = batchSize;
  out.bounds = cloud.bounds;
  const std::size_t n = cloud.size();
  out.lowWords.reserve(n);
  out.medWords.reserve(n);
  out.highWords.reserve(n);
  out.colors.reserve(n);
  out.batches.reserve((n + batchSize - 1) / batchSize);

  std::vector<std::uint32_t> indices;
  for (std::size_t first = 0; first < n; first += batchSize) {
    const std::size_t count = std::min<std::size_t>(batchSize, n - first);
    indices.resize(count);
    std::iota(indices.begin(), indices.end(), std::uint32_t(first));
    const Aabb box = Aabb::of(std::span(cloud.positions).subspan(first, count));
    out.append_batch(cloud, indices, box);
  }
  return out;
}

double total_batch_surface_area(const EncodedCloud& cloud) {
  double sum = 0.0;
  for (const auto& b : cloud.batches) sum += b.box.surface_area();
  return sum;
}

}  // namespace pcr
