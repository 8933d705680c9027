#include "app/png.hpp"

#include <png.h>

#include <cstring>

#include "pcr/error.hpp"
#include "pcr/io.hpp"

namespace pcr::app {

namespace {

std::vector<std::uint8_t> to_bytes(const Image& img) {
  std::vector<std::uint8_t> raw(img.pixels.size() * 4);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    const Rgba c = img.pixels[i];
    raw[4 * i + 0] = red(c);
    raw[4 * i + 1] = green(c);
    raw[4 * i + 2] = blue(c);
    raw[4 * i + 3] = alpha(c);
  }
  return raw;
}

}  // namespace

std::vector<std::byte> encode_png(const Image& img) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = png_uint_32(img.width);
  image.height = png_uint_32(img.height);
  image.format = PNG_FORMAT_RGBA;
  const auto raw = to_bytes(img);

  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, raw.data(), 0, nullptr)) {
    throw Error(std::string("PNG encode failed: ") + image.message);
  }
  std::vector<std::byte> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, raw.data(), 0, nullptr)) {
    throw Error(std::string("PNG encode failed: ") + image.message);
  }
  out.resize(size);
  return out;
}

void write_png(const Image& img, const std::filesystem::path& path) { write_file_bytes(path, encode_png(img)); }

Image decode_png(const std::vector<std::byte>& bytes) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw ParseError(std::string("PNG decode failed: ") + image.message);
  }
  image.format = PNG_FORMAT_RGBA;
  std::vector<std::uint8_t> raw(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, raw.data(), 0, nullptr)) {
    throw ParseError(std::string("PNG decode failed: ") + image.message);
  }
  Image img(int(image.width), int(image.height), 0);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    img.pixels[i] = make_rgba(raw[4 * i], raw[4 * i + 1], raw[4 * i + 2], raw[4 * i + 3]);
  }
  return img;
}

}  // namespace pcr::app
