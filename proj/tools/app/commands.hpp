#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcr/cloud.hpp"
#include "pcr/config.hpp"
#include "pcr/shade.hpp"

namespace pcr::app {

inline constexpr int kStatsSchemaVersion = 1;

struct ConvertOptions {
  std::filesystem::path input;
  std::filesystem::path output;
  bool morton = true;
  std::uint32_t batchSize = 10240;
};

struct ConvertReport {
  std::size_t points = 0;
  std::size_t batches = 0;
  Aabb bounds;
  double batchSurfaceArea = 0.0;
};

ConvertReport cmd_convert(const ConvertOptions& opt, std::ostream& out);

struct BuildLodOptions {
  std::filesystem::path input;
  std::filesystem::path output;
};

struct BuildLodReport {
  std::size_t points = 0;
  std::size_t nodes = 0;
  std::vector<std::size_t> levelHistogram;
  std::uint32_t minNodePoints = 0;
  std::uint32_t maxNodePoints = 0;
};

/// Accepts .ply or .bpc input; BPC input is decoded at High precision.
BuildLodReport cmd_build_lod(const BuildLodOptions& opt, std::ostream& out);

enum class ShadingMode { Plain, Hqs };

/// Flags shared by render and bench frames.
struct FrameSettings {
  int width = 1280;
  int height = 720;
  ShadingMode mode = ShadingMode::Plain;
  bool lod = true;
  bool peripheral = false;
  PrecisionMode precision = PrecisionMode::Adaptive;
  bool culling = true;
  bool dilate = false;
  unsigned threads = 0;
  Rgba background = make_rgba(0, 0, 0, 255);

  RenderConfig to_config() const;
  nlohmann::json echo() const;
};

struct FrameOutput {
  Image image;
  RenderStats stats;
};

/// Renders, resolves and optionally dilates one frame. frameMillis covers
/// the whole frame.
FrameOutput render_frame(const EncodedCloud& cloud, const Camera& cam, const FrameSettings& settings);

nlohmann::json frame_stats_json(std::size_t frame, const FrameSettings& settings, const RenderStats& stats);

struct RenderOptions {
  std::filesystem::path input;
  std::filesystem::path cameraPath;
  std::filesystem::path outDir;
  FrameSettings settings;
  std::optional<std::filesystem::path> statsPath;
};

/// Writes frame_NNNN.png per frame into outDir; returns per-frame stats.
std::vector<RenderStats> cmd_render(const RenderOptions& opt, std::ostream& out);

struct BenchOptions {
  std::filesystem::path input;
  std::filesystem::path cameraPath;
  int repeat = 5;
  /// "key=v1,v2;key=v1" over keys precision, culling, lod, hqs, dilate.
  std::string matrix;
  FrameSettings base;
  std::optional<std::filesystem::path> jsonPath;
};

struct BenchRow {
  FrameSettings settings;
  double meanFrameMillis = 0.0;
  double meanPointsProcessed = 0.0;
  double pointsPerSecond = 0.0;
  double coordinateBytesPerPoint = 0.0;
};

/// Expands the matrix into the cross product of settings.
std::vector<FrameSettings> expand_matrix(const std::string& matrix, const FrameSettings& base);

/// Times every configuration over `repeat` passes of the path, discarding
/// the first pass. Throws ConfigError when repeat < 2.
std::vector<BenchRow> cmd_bench(const BenchOptions& opt, std::ostream& out);

/// Entry point of the `pcr` tool. Returns the process exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pcr::app
