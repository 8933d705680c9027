#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "pcr/cloud.hpp"

namespace pcr {

inline constexpr char kBpcMagic[4] = {'B', 'P', 'C', '1'};
inline constexpr std::uint32_t kBpcVersion = 1;

/// Little-endian layout:
///   header  magic "BPC1", version u32, pointCount u64, bounds 6 x f64,
///           batchSize u32, batchCount u64
///   batches firstPoint u64, numPoints u32, box 6 x f64, lodLevel i32
///           (-1 = none), spacing f64 (NaN = none)
///   buffers lowWords, medWords, highWords, colors; pointCount u32 each
std::vector<std::byte> write_bpc(const EncodedCloud& cloud);
void write_bpc_file(const EncodedCloud& cloud, const std::filesystem::path& path);

/// Throws ParseError on bad magic, version mismatch, truncation (naming the
/// section) or inconsistent batch tiling.
EncodedCloud read_bpc(std::span<const std::byte> bytes);
EncodedCloud read_bpc_file(const std::filesystem::path& path);

}  // namespace pcr
