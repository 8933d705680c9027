#include "app/camera_path.hpp"

#include <json.hpp>

#include "pcr/error.hpp"
#include "pcr/io.hpp"

namespace pcr::app {

namespace {

Vec3 read_vec3(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 3) throw ParseError(std::string("camera path: '") + key + "' must be [x, y, z]");
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

}  // namespace

CameraPath CameraPath::parse(std::string_view text) {
  CameraPath path;
  try {
    const auto j = nlohmann::json::parse(text);
    path.framesPerSegment = j.value("framesPerSegment", 1);
    path.nearPlane = j.value("near", 0.1);
    path.farPlane = j.value("far", 1e4);
    for (const auto& k : j.at("keyframes")) {
      Keyframe kf;
      kf.position = read_vec3(k, "position");
      kf.target = read_vec3(k, "target");
      kf.up = k.contains("up") ? read_vec3(k, "up") : Vec3{0, 0, 1};
      kf.fovYDegrees = k.value("fovY", 60.0);
      path.keyframes.push_back(kf);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("camera path: ") + e.what());
  }
  if (path.keyframes.empty()) throw ParseError("camera path: at least one keyframe is required");
  if (path.framesPerSegment < 1) throw ParseError("camera path: framesPerSegment must be >= 1");
  if (!(path.nearPlane > 0.0) || !(path.farPlane > path.nearPlane)) {
    throw ParseError("camera path: require 0 < near < far");
  }
  for (const auto& k : path.keyframes) {
    if (!(k.fovYDegrees > 0.0 && k.fovYDegrees < 180.0)) throw ParseError("camera path: fovY must lie in (0, 180)");
  }
  return path;
}

CameraPath CameraPath::load(const std::filesystem::path& file) {
  const auto bytes = read_file_bytes(file);
  return parse(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

std::size_t CameraPath::frame_count() const {
  return (keyframes.size() - 1) * std::size_t(framesPerSegment) + 1;
}

Camera CameraPath::frame(std::size_t f, int width, int height) const {
  const std::size_t segment = std::min(f / framesPerSegment, keyframes.size() - 1);
  const Keyframe& a = keyframes[segment];
  const Keyframe& b = keyframes[std::min(segment + 1, keyframes.size() - 1)];
  const double t = segment + 1 < keyframes.size() ? double(f - segment * framesPerSegment) / framesPerSegment : 0.0;
  auto lerp = [t](const Vec3& p, const Vec3& q) { return p + (q - p) * t; };
  return Camera::look_at(lerp(a.position, b.position), lerp(a.target, b.target), normalize(lerp(a.up, b.up)),
                         a.fovYDegrees + (b.fovYDegrees - a.fovYDegrees) * t, nearPlane, farPlane, width, height);
}

}  // namespace pcr::app
