#pragma once

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace pcr {

/// Packed visibility entry: (depth bits << 32) | point index.
using FramebufferEntry = std::uint64_t;

inline constexpr FramebufferEntry kClearEntry = ~FramebufferEntry{0};

/// Throws ConfigError for non-positive or non-finite depths.
FramebufferEntry pack_entry(float depth, std::uint32_t index);

/// Unchecked variant for the render loop, whose callers have already
/// rejected invalid depths.
inline FramebufferEntry pack_entry_unchecked(float depth, std::uint32_t index) {
  return (FramebufferEntry{std::bit_cast<std::uint32_t>(depth)} << 32) | index;
}

inline std::uint32_t entry_depth_bits(FramebufferEntry e) { return std::uint32_t(e >> 32); }
inline std::uint32_t entry_index(FramebufferEntry e) { return std::uint32_t(e); }
inline float entry_depth(FramebufferEntry e) { return std::bit_cast<float>(entry_depth_bits(e)); }

class Framebuffer {
 public:
  Framebuffer() = default;
  Framebuffer(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return entries_.size(); }

  void clear();

  /// Non-atomic snapshot read; only meaningful once rendering has joined.
  FramebufferEntry operator[](std::size_t i) const { return entries_[i]; }
  std::span<const FramebufferEntry> entries() const { return entries_; }

  /// Stale-tolerant read used by the early-depth test while other threads
  /// may be writing the same entry.
  FramebufferEntry peek(std::size_t i) const {
    return std::atomic_ref<FramebufferEntry>(entries_[i]).load(std::memory_order_relaxed);
  }

  /// entries[i] = min(entries[i], value), atomically.
  void atomic_min(std::size_t i, FramebufferEntry value) {
    std::atomic_ref<FramebufferEntry> slot(entries_[i]);
    FramebufferEntry cur = slot.load(std::memory_order_relaxed);
    while (value < cur && !slot.compare_exchange_weak(cur, value, std::memory_order_relaxed)) {
    }
  }

 private:
  int width_ = 0;
  int height_ = 0;
  mutable std::vector<FramebufferEntry> entries_;
};

}  // namespace pcr
