#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "pcr/shade.hpp"

namespace pcr::app {

/// 8-bit RGBA PNG, no gamma chunk; pixel values pass through unchanged.
std::vector<std::byte> encode_png(const Image& img);
void write_png(const Image& img, const std::filesystem::path& path);

/// Decodes a PNG written by encode_png (8-bit RGBA).
Image decode_png(const std::vector<std::byte>& bytes);

}  // namespace pcr::app
