#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "pcr/cloud.hpp"
#include "pcr/io.hpp"

namespace pcr {

enum class PlyFormat { Ascii, BinaryLittleEndian };

/// Parses the vertex element of an ascii or binary_little_endian PLY file.
/// x, y, z may be float or double; red, green, blue and optional alpha must
/// be uchar. Missing colors default to opaque white. Other scalar vertex
/// properties and other elements are skipped. Throws ParseError naming the
/// byte offset of the problem.
RawCloud read_ply(std::span<const std::byte> bytes);
RawCloud read_ply_file(const std::filesystem::path& path);

/// Writes x, y, z as double plus red, green, blue, alpha as uchar.
std::vector<std::byte> write_ply(const RawCloud& cloud, PlyFormat format);
void write_ply_file(const RawCloud& cloud, PlyFormat format, const std::filesystem::path& path);

}  // namespace pcr
