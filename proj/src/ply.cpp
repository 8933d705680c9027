#include "pcr/ply.hpp"

#include <bit>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <optional>
#include <string>
#include <string_view>

#include "pcr/error.hpp"

namespace pcr {

static_assert(std::endian::native == std::endian::little, "binary PLY I/O assumes a little-endian host");

namespace {

enum class ScalarType { Int8, UInt8, Int16, UInt16, Int32, UInt32, Float32, Float64 };

std::optional<ScalarType> parse_scalar_type(std::string_view name) {
  if (name == "char" || name == "int8") return ScalarType::Int8;
  if (name == "uchar" || name == "uint8") return ScalarType::UInt8;
  if (name == "short" || name == "int16") return ScalarType::Int16;
  if (name == "ushort" || name == "uint16") return ScalarType::UInt16;
  if (name == "int" || name == "int32") return ScalarType::Int32;
  if (name == "uint" || name == "uint32") return ScalarType::UInt32;
  if (name == "float" || name == "float32") return ScalarType::Float32;
  if (name == "double" || name == "float64") return ScalarType::Float64;
  return std::nullopt;
}

std::size_t scalar_size(ScalarType t) {
  switch (t) {
    case ScalarType::Int8:
    case ScalarType::UInt8: return 1;
    case ScalarType::Int16:
    case ScalarType::UInt16: return 2;
    case ScalarType::Int32:
    case ScalarType::UInt32:
    case ScalarType::Float32: return 4;
    case ScalarType::Float64: return 8;
  }
  return 0;
}

bool is_float(ScalarType t) { return t == ScalarType::Float32 || t == ScalarType::Float64; }

struct Property {
  std::string name;
  ScalarType type = ScalarType::Float32;
  bool isList = false;
  ScalarType countType = ScalarType::UInt8;
};

struct Element {
  std::string name;
  std::uint64_t count = 0;
  std::vector<Property> properties;
};

struct Header {
  PlyFormat format = PlyFormat::Ascii;
  std::vector<Element> elements;
  std::size_t bodyOffset = 0;
};

[[noreturn]] void fail(std::size_t offset, const std::string& what) {
  throw ParseError("PLY parse error at byte " + std::to_string(offset) + ": " + what);
}

std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) words.push_back(line.substr(start, i - start));
  }
  return words;
}

Header parse_header(std::string_view text) {
  Header h;
  std::size_t pos = 0;
  bool sawFormat = false;
  bool first = true;
  while (true) {
    const std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) fail(pos, "header is not terminated by 'end_header'");
    const std::size_t lineStart = pos;
    const auto words = split_words(text.substr(pos, eol - pos));
    pos = eol + 1;
    if (first) {
      if (words.size() != 1 || words[0] != "ply") fail(lineStart, "missing 'ply' magic line");
      first = false;
      continue;
    }
    if (words.empty()) continue;
    const auto& kw = words[0];
    if (kw == "end_header") break;
    if (kw == "comment" || kw == "obj_info") continue;
    if (kw == "format") {
      if (words.size() != 3) fail(lineStart, "malformed format line");
      if (words[1] == "ascii") {
        h.format = PlyFormat::Ascii;
      } else if (words[1] == "binary_little_endian") {
        h.format = PlyFormat::BinaryLittleEndian;
      } else {
        fail(lineStart, "unsupported format '" + std::string(words[1]) + "'");
      }
      sawFormat = true;
    } else if (kw == "element") {
      if (words.size() != 3) fail(lineStart, "malformed element line");
      Element e;
      e.name = words[1];
      const auto [ptr, ec] = std::from_chars(words[2].data(), words[2].data() + words[2].size(), e.count);
      if (ec != std::errc() || ptr != words[2].data() + words[2].size()) {
        fail(lineStart, "invalid element count '" + std::string(words[2]) + "'");
      }
      h.elements.push_back(std::move(e));
    } else if (kw == "property") {
      if (h.elements.empty()) fail(lineStart, "property declared before any element");
      Property p;
      if (words.size() == 5 && words[1] == "list") {
        const auto ct = parse_scalar_type(words[2]);
        const auto it = parse_scalar_type(words[3]);
        if (!ct || !it || is_float(*ct)) fail(lineStart, "unsupported list property types");
        p.isList = true;
        p.countType = *ct;
        p.type = *it;
        p.name = words[4];
      } else if (words.size() == 3) {
        const auto t = parse_scalar_type(words[1]);
        if (!t) fail(lineStart, "unsupported property type '" + std::string(words[1]) + "'");
        p.type = *t;
        p.name = words[2];
      } else {
        fail(lineStart, "malformed property line");
      }
      h.elements.back().properties.push_back(std::move(p));
    } else {
      fail(lineStart, "unknown header keyword '" + std::string(kw) + "'");
    }
  }
  if (!sawFormat) fail(0, "header has no format line");
  h.bodyOffset = pos;
  return h;
}

/// Reads body values one at a time from either encoding.
class BodyReader {
 public:
  BodyReader(std::span<const std::byte> bytes, std::size_t offset, PlyFormat format)
      : bytes_(bytes), pos_(offset), format_(format) {}

  std::size_t offset() const { return pos_; }

  bool at_end() {
    if (format_ == PlyFormat::Ascii) skip_space();
    return pos_ >= bytes_.size();
  }

  double read(ScalarType t, const std::string& what) {
    return format_ == PlyFormat::Ascii ? read_ascii(what) : read_binary(t, what);
  }

 private:
  double read_binary(ScalarType t, const std::string& what) {
    const std::size_t n = scalar_size(t);
    if (pos_ + n > bytes_.size()) fail(pos_, "unexpected end of data while reading " + what);
    const std::byte* p = bytes_.data() + pos_;
    pos_ += n;
    auto load = [p]<typename T>(T) {
      T v;
      std::memcpy(&v, p, sizeof(T));
      return double(v);
    };
    switch (t) {
      case ScalarType::Int8: return load(std::int8_t{});
      case ScalarType::UInt8: return load(std::uint8_t{});
      case ScalarType::Int16: return load(std::int16_t{});
      case ScalarType::UInt16: return load(std::uint16_t{});
      case ScalarType::Int32: return load(std::int32_t{});
      case ScalarType::UInt32: return load(std::uint32_t{});
      case ScalarType::Float32: return load(float{});
      case ScalarType::Float64: return load(double{});
    }
    return 0.0;
  }

  double read_ascii(const std::string& what) {
    skip_space();
    const char* base = reinterpret_cast<const char*>(bytes_.data());
    if (pos_ >= bytes_.size()) fail(pos_, "unexpected end of data while reading " + what);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(base + pos_, base + bytes_.size(), v);
    if (ec != std::errc()) fail(pos_, "invalid number while reading " + what);
    pos_ = std::size_t(ptr - base);
    return v;
  }

  void skip_space() {
    const char* base = reinterpret_cast<const char*>(bytes_.data());
    while (pos_ < bytes_.size() && std::isspace(static_cast<unsigned char>(base[pos_]))) ++pos_;
  }

  std::span<const std::byte> bytes_;
  std::size_t pos_;
  PlyFormat format_;
};

void skip_element_instance(BodyReader& r, const Element& e) {
  for (const auto& p : e.properties) {
    if (p.isList) {
      const double n = r.read(p.countType, "list count of " + e.name + "." + p.name);
      if (n < 0) fail(r.offset(), "negative list length in " + e.name + "." + p.name);
      for (std::uint64_t k = 0; k < std::uint64_t(n); ++k) r.read(p.type, e.name + "." + p.name);
    } else {
      r.read(p.type, e.name + "." + p.name);
    }
  }
}

std::uint8_t to_channel(double v, std::size_t offset) {
  if (v < 0.0 || v > 255.0) fail(offset, "color channel out of range");
  return std::uint8_t(v);
}

}  // namespace

RawCloud read_ply(std::span<const std::byte> bytes) {
  const std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  const Header h = parse_header(text);

  BodyReader reader(bytes, h.bodyOffset, h.format);
  for (const auto& e : h.elements) {
    if (e.name != "vertex") {
      for (std::uint64_t i = 0; i < e.count; ++i) skip_element_instance(reader, e);
      continue;
    }

    enum Role { X, Y, Z, R, G, B, A, Skip };
    std::vector<Role> roles;
    bool haveXyz[3] = {false, false, false};
    for (const auto& p : e.properties) {
      Role role = Skip;
      if (p.name == "x") role = X;
      else if (p.name == "y") role = Y;
      else if (p.name == "z") role = Z;
      else if (p.name == "red") role = R;
      else if (p.name == "green") role = G;
      else if (p.name == "blue") role = B;
      else if (p.name == "alpha") role = A;
      if (role <= Z) {
        if (p.isList || !is_float(p.type)) {
          fail(0, "unsupported type for vertex property '" + p.name + "' (expected float or double)");
        }
        haveXyz[role] = true;
      } else if (role != Skip && (p.isList || p.type != ScalarType::UInt8)) {
        fail(0, "unsupported type for vertex property '" + p.name + "' (expected uchar)");
      } else if (role == Skip && p.isList) {
        fail(0, "unsupported list property '" + p.name + "' in vertex element");
      }
      roles.push_back(role);
    }
    if (!haveXyz[0] || !haveXyz[1] || !haveXyz[2]) fail(0, "vertex element lacks x, y or z");

    RawCloud cloud;
    cloud.positions.reserve(e.count);
    cloud.colors.reserve(e.count);
    for (std::uint64_t i = 0; i < e.count; ++i) {
      if (reader.at_end()) {
        fail(reader.offset(), "header declares " + std::to_string(e.count) + " vertices but body ends after " +
                                  std::to_string(i));
      }
      Vec3 p{0, 0, 0};
      std::uint8_t rgba[4] = {255, 255, 255, 255};
      for (std::size_t k = 0; k < e.properties.size(); ++k) {
        const auto& prop = e.properties[k];
        const std::size_t at = reader.offset();
        const double v = reader.read(prop.type, "vertex " + std::to_string(i) + " of " + std::to_string(e.count) +
                                                    " property '" + prop.name + "'");
        switch (roles[k]) {
          case X: p[0] = v; break;
          case Y: p[1] = v; break;
          case Z: p[2] = v; break;
          case R: rgba[0] = to_channel(v, at); break;
          case G: rgba[1] = to_channel(v, at); break;
          case B: rgba[2] = to_channel(v, at); break;
          case A: rgba[3] = to_channel(v, at); break;
          case Skip: break;
        }
      }
      cloud.push_back(p, make_rgba(rgba[0], rgba[1], rgba[2], rgba[3]));
    }
    return cloud;
  }
  fail(h.bodyOffset, "file has no vertex element");
}

RawCloud read_ply_file(const std::filesystem::path& path) { return read_ply(read_file_bytes(path)); }

std::vector<std::byte> write_ply(const RawCloud& cloud, PlyFormat format) {
  std::string header = "ply\nformat ";
  header += format == PlyFormat::Ascii ? "ascii" : "binary_little_endian";
  header += " 1.0\nelement vertex " + std::to_string(cloud.size()) +
            "\nproperty double x\nproperty double y\nproperty double z\n"
            "property uchar red\nproperty uchar green\nproperty uchar blue\nproperty uchar alpha\n"
            "end_header\n";
  std::vector<std::byte> out(header.size());
  std::memcpy(out.data(), header.data(), header.size());

  auto append = [&out](const void* p, std::size_t n) {
    const auto* b = static_cast<const std::byte*>(p);
    out.insert(out.end(), b, b + n);
  };
  char line[160];
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec3& p = cloud.positions[i];
    const Rgba c = cloud.colors[i];
    if (format == PlyFormat::Ascii) {
      const int n = std::snprintf(line, sizeof line, "%.17g %.17g %.17g %u %u %u %u\n", p[0], p[1], p[2],
                                  unsigned(red(c)), unsigned(green(c)), unsigned(blue(c)), unsigned(alpha(c)));
      append(line, std::size_t(n));
    } else {
      append(p.data(), sizeof(double) * 3);
      const std::uint8_t rgba[4] = {red(c), green(c), blue(c), alpha(c)};
      append(rgba, 4);
    }
  }
  return out;
}

void write_ply_file(const RawCloud& cloud, PlyFormat format, const std::filesystem::path& path) {
  write_file_bytes(path, write_ply(cloud, format));
}

}  // namespace pcr
