#include "pcr/bpc.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <string>

#include "pcr/error.hpp"
#include "pcr/io.hpp"

namespace pcr {

static_assert(std::endian::native == std::endian::little, "BPC I/O assumes a little-endian host");

namespace {

class Writer {
 public:
  template <typename T>
  void put(const T& v) {
    const auto* p = reinterpret_cast<const std::byte*>(&v);
    out.insert(out.end(), p, p + sizeof(T));
  }
  void put_box(const Aabb& b) {
    for (double v : b.min) put(v);
    for (double v : b.max) put(v);
  }
  void put_words(const std::vector<std::uint32_t>& words) {
    const auto* p = reinterpret_cast<const std::byte*>(words.data());
    out.insert(out.end(), p, p + words.size() * sizeof(std::uint32_t));
  }
  std::vector<std::byte> out;
};

class Reader {
 public:
  explicit Reader(std::span<const std::byte> bytes) : bytes_(bytes) {}

  template <typename T>
  T get(const char* section) {
    need(sizeof(T), section);
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  Aabb get_box(const char* section) {
    Aabb b;
    for (double& v : b.min) v = get<double>(section);
    for (double& v : b.max) v = get<double>(section);
    return b;
  }
  std::vector<std::uint32_t> get_words(std::uint64_t count, const char* section) {
    const std::uint64_t bytes = count > remaining() / sizeof(std::uint32_t)
                                    ? std::numeric_limits<std::uint64_t>::max()
                                    : count * sizeof(std::uint32_t);
    need(bytes, section);
    std::vector<std::uint32_t> words(count);
    std::memcpy(words.data(), bytes_.data() + pos_, bytes);
    pos_ += bytes;
    return words;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  std::size_t offset() const { return pos_; }

 private:
  void need(std::uint64_t n, const char* section) {
    if (n > remaining()) {
      throw ParseError(std::string("BPC length error: truncated in ") + section + " at byte " +
                       std::to_string(pos_) + " (need " + std::to_string(n) + " bytes, have " +
                       std::to_string(remaining()) + ")");
    }
  }
  std::span<const std::byte> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::byte> write_bpc(const EncodedCloud& cloud) {
  const std::uint64_t n = cloud.size();
  if (cloud.lowWords.size() != n || cloud.medWords.size() != n || cloud.highWords.size() != n) {
    throw ConsistencyError("write_bpc: attribute buffers differ in length");
  }
  Writer w;
  w.out.reserve(64 + cloud.batches.size() * 76 + n * 16);
  for (char c : kBpcMagic) w.put(c);
  w.put(kBpcVersion);
  w.put(n);
  w.put_box(cloud.bounds);
  w.put(cloud.batchSize);
  w.put(std::uint64_t(cloud.batches.size()));
  for (const auto& b : cloud.batches) {
    w.put(b.firstPoint);
    w.put(b.numPoints);
    w.put_box(b.box);
    w.put(std::int32_t(b.lodLevel.value_or(-1)));
    w.put(b.spacing.value_or(std::numeric_limits<double>::quiet_NaN()));
  }
  w.put_words(cloud.lowWords);
  w.put_words(cloud.medWords);
  w.put_words(cloud.highWords);
  w.put_words(cloud.colors);
  return std::move(w.out);
}

void write_bpc_file(const EncodedCloud& cloud, const std::filesystem::path& path) {
  write_file_bytes(path, write_bpc(cloud));
}

EncodedCloud read_bpc(std::span<const std::byte> bytes) {
  Reader r(bytes);
  char magic[4];
  for (char& c : magic) c = r.get<char>("header");
  if (std::memcmp(magic, kBpcMagic, 4) != 0) {
    throw ParseError("BPC magic error: expected 'BPC1', found '" + std::string(magic, 4) + "'");
  }
  const auto version = r.get<std::uint32_t>("header");
  if (version != kBpcVersion) {
    throw ParseError("BPC version mismatch: file has version " + std::to_string(version) + ", reader supports " +
                     std::to_string(kBpcVersion));
  }
  EncodedCloud cloud;
  const auto pointCount = r.get<std::uint64_t>("header");
  cloud.bounds = r.get_box("header");
  cloud.batchSize = r.get<std::uint32_t>("header");
  const auto batchCount = r.get<std::uint64_t>("header");

  constexpr std::uint64_t kBatchRecordBytes = 8 + 4 + 48 + 4 + 8;
  if (batchCount > r.remaining() / kBatchRecordBytes) {
    throw ParseError("BPC length error: batch table of " + std::to_string(batchCount) +
                     " entries exceeds the file size");
  }
  cloud.batches.reserve(batchCount);
  std::uint64_t expectedFirst = 0;
  for (std::uint64_t i = 0; i < batchCount; ++i) {
    Batch b;
    b.firstPoint = r.get<std::uint64_t>("batch table");
    b.numPoints = r.get<std::uint32_t>("batch table");
    b.box = r.get_box("batch table");
    const auto level = r.get<std::int32_t>("batch table");
    const auto spacing = r.get<double>("batch table");
    if (level >= 0) b.lodLevel = level;
    if (!std::isnan(spacing)) b.spacing = spacing;
    if (b.firstPoint != expectedFirst || b.numPoints == 0) {
      throw ParseError("BPC length error: batch " + std::to_string(i) + " does not continue the point range at " +
                       std::to_string(expectedFirst));
    }
    expectedFirst += b.numPoints;
    cloud.batches.push_back(b);
  }
  if (expectedFirst != pointCount) {
    throw ParseError("BPC length error: batches cover " + std::to_string(expectedFirst) + " points, header says " +
                     std::to_string(pointCount));
  }
  cloud.lowWords = r.get_words(pointCount, "buffer 'lowWords'");
  cloud.medWords = r.get_words(pointCount, "buffer 'medWords'");
  cloud.highWords = r.get_words(pointCount, "buffer 'highWords'");
  cloud.colors = r.get_words(pointCount, "buffer 'colors'");
  if (r.remaining() != 0) {
    throw ParseError("BPC length error: " + std::to_string(r.remaining()) + " trailing bytes after buffer 'colors'");
  }
  return cloud;
}

EncodedCloud read_bpc_file(const std::filesystem::path& path) { return read_bpc(read_file_bytes(path)); }

}  // namespace pcr
