#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace pcr {

/// Throws ParseError when the file cannot be opened or read.
std::vector<std::byte> read_file_bytes(const std::filesystem::path& path);
/// Throws Error when the file cannot be written.
void write_file_bytes(const std::filesystem::path& path, std::span<const std::byte> bytes);

}  // namespace pcr
