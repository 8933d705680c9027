#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include "pcr/geometry.hpp"

namespace pcr::app {

struct Keyframe {
  Vec3 position{0, 0, 0};
  Vec3 target{0, 0, -1};
  Vec3 up{0, 1, 0};
  double fovYDegrees = 60.0;
};

/// Fly-through of linearly interpolated keyframes.
///
/// JSON form:
///   {"framesPerSegment": 30, "near": 0.1, "far": 1000,
///    "keyframes": [{"position": [x,y,z], "target": [x,y,z],
///                   "up": [x,y,z], "fovY": 60}, ...]}
/// "up" defaults to +z, "fovY" to 60, "near"/"far" to 0.1/1e4 and
/// "framesPerSegment" to 1.
struct CameraPath {
  std::vector<Keyframe> keyframes;
  int framesPerSegment = 1;
  double nearPlane = 0.1;
  double farPlane = 1e4;

  /// Throws ParseError on malformed JSON or violated invariants.
  static CameraPath parse(std::string_view json);
  static CameraPath load(const std::filesystem::path& path);

  std::size_t frame_count() const;
  /// Interpolated camera for frame f in [0, frame_count()).
  Camera frame(std::size_t f, int width, int height) const;
};

}  // namespace pcr::app
