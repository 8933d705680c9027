#include "pcr/framebuffer.hpp"

#include <algorithm>

#include "pcr/error.hpp"

namespace pcr {

FramebufferEntry pack_entry(float depth, std::uint32_t index) {
  if (!(depth > 0.0f) || !std::isfinite(depth)) {
    throw ConfigError("pack_entry: depth must be positive and finite");
  }
  return pack_entry_unchecked(depth, index);
}

Framebuffer::Framebuffer(int width, int height) : width_(width), height_(height) {
  if (width < 1 || height < 1) throw ConfigError("framebuffer must be at least 1x1");
  entries_.assign(std::size_t(width) * std::size_t(height), kClearEntry);
}

void Framebuffer::clear() { std::fill(entries_.begin(), entries_.end(), kClearEntry); }

}  // namespace pcr
