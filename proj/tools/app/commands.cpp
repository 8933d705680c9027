#include "app/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "app/camera_path.hpp"
#include "app/png.hpp"
#include "pcr/bpc.hpp"
#include "pcr/error.hpp"
#include "pcr/lod.hpp"
#include "pcr/morton.hpp"
#include "pcr/ply.hpp"
#include "pcr/raster.hpp"

namespace pcr::app {

namespace {

using Clock = std::chrono::steady_clock;

const char* precision_name(PrecisionMode m) {
  switch (m) {
    case PrecisionMode::Adaptive: return "adaptive";
    case PrecisionMode::ForcedLow: return "low";
    case PrecisionMode::ForcedMedium: return "medium";
    case PrecisionMode::ForcedHigh: return "high";
  }
  return "adaptive";
}

PrecisionMode parse_precision(const std::string& s) {
  if (s == "adaptive") return PrecisionMode::Adaptive;
  if (s == "low") return PrecisionMode::ForcedLow;
  if (s == "medium") return PrecisionMode::ForcedMedium;
  if (s == "high") return PrecisionMode::ForcedHigh;
  throw ConfigError("unknown precision '" + s + "' (expected adaptive|low|medium|high)");
}

bool parse_switch(const std::string& key, const std::string& s) {
  if (s == "on") return true;
  if (s == "off") return false;
  throw ConfigError(key + ": expected on|off, got '" + s + "'");
}

std::string format_bounds(const Aabb& b) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "[%.6g, %.6g, %.6g] - [%.6g, %.6g, %.6g]", b.min[0], b.min[1], b.min[2], b.max[0],
                b.max[1], b.max[2]);
  return buf;
}

bool has_extension(const std::filesystem::path& p, const char* ext) {
  auto e = p.extension().string();
  std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return char(std::tolower(c)); });
  return e == ext;
}

RawCloud decode_all(const EncodedCloud& cloud) {
  RawCloud raw;
  raw.positions.reserve(cloud.colors.size());
  raw.colors.reserve(cloud.colors.size());
  for (const auto& b : cloud.batches) {
    for (std::uint64_t i = b.firstPoint; i < b.firstPoint + b.numPoints; ++i) {
      raw.positions.push_back(decode(cloud.point(i), PrecisionLevel::High, b.box));
      raw.colors.push_back(cloud.colors[i]);
    }
  }
  raw.recompute_bounds();
  return raw;
}

void write_json(const nlohmann::json& j, const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot open '" + path.string() + "' for writing");
  f << j.dump(2) << '\n';
  if (!f) throw Error("failed writing '" + path.string() + "'");
}

nlohmann::json stats_fields(const RenderStats& s) {
  return {{"batchesProcessed", s.batchesProcessed},
          {"batchesRendered", s.batchesRendered},
          {"pointsProcessed", s.pointsProcessed},
          {"pointsRendered", s.pointsRendered},
          {"coordinateBytesLoaded", s.coordinateBytesLoaded},
          {"colorBytesLoaded", s.colorBytesLoaded},
          {"atomicMinCalls", s.atomicMinCalls},
          {"atomicAddCalls", s.atomicAddCalls},
          {"frameMillis", s.frameMillis}};
}

}  // namespace

ConvertReport cmd_convert(const ConvertOptions& opt, std::ostream& out) {
  if (opt.batchSize == 0) throw ConfigError("--batch-size must be positive");
  RawCloud cloud = read_ply_file(opt.input);
  if (opt.morton) cloud = morton_sort(cloud);
  const EncodedCloud enc = build_batches(cloud, opt.batchSize);
  write_bpc_file(enc, opt.output);

  ConvertReport r;
  r.points = enc.colors.size();
  r.batches = enc.batches.size();
  r.bounds = enc.bounds;
  r.batchSurfaceArea = total_batch_surface_area(enc);
  out << "points: " << r.points << '\n'
      << "batches: " << r.batches << '\n'
      << "bounds: " << format_bounds(r.bounds) << '\n'
      << "batch AABB surface area: " << r.batchSurfaceArea << '\n';
  return r;
}

BuildLodReport cmd_build_lod(const BuildLodOptions& opt, std::ostream& out) {
  RawCloud cloud = has_extension(opt.input, ".bpc") ? decode_all(read_bpc_file(opt.input)) : read_ply_file(opt.input);
  if (cloud.positions.empty()) throw ConfigError("build-lod: input has no points");
  const LodTree tree = build_lod(cloud);
  write_bpc_file(tree.points, opt.output);

  BuildLodReport r;
  r.points = cloud.positions.size();
  r.nodes = tree.nodes.size();
  r.minNodePoints = ~0u;
  for (const auto& n : tree.nodes) {
    if (std::size_t(n.level) >= r.levelHistogram.size()) r.levelHistogram.resize(n.level + 1, 0);
    ++r.levelHistogram[n.level];
    r.minNodePoints = std::min(r.minNodePoints, n.numPoints);
    r.maxNodePoints = std::max(r.maxNodePoints, n.numPoints);
  }
  out << "points: " << r.points << '\n' << "nodes: " << r.nodes << '\n';
  for (std::size_t l = 0; l < r.levelHistogram.size(); ++l) {
    out << "  level " << l << ": " << r.levelHistogram[l] << '\n';
  }
  out << "node size: min " << r.minNodePoints << ", max " << r.maxNodePoints << '\n';
  return r;
}

RenderConfig FrameSettings::to_config() const {
  RenderConfig cfg;
  cfg.precisionMode = precision;
  cfg.frustumCulling = culling;
  cfg.threadCount = threads;
  cfg.hqsEnabled = mode == ShadingMode::Hqs;
  if (!lod) {
    cfg.lodCullThresholdPx = 0.0;
  } else if (peripheral) {
    cfg.peripheralThresholds = PeripheralTiers{};
  }
  cfg.validate();
  return cfg;
}

nlohmann::json FrameSettings::echo() const {
  return {{"statsSchemaVersion", kStatsSchemaVersion},
          {"width", width},
          {"height", height},
          {"mode", mode == ShadingMode::Hqs ? "hqs" : "plain"},
          {"lod", lod},
          {"peripheral", peripheral},
          {"precision", precision_name(precision)},
          {"culling", culling},
          {"dilate", dilate},
          {"threads", threads}};
}

FrameOutput render_frame(const EncodedCloud& cloud, const Camera& cam, const FrameSettings& settings) {
  const RenderConfig cfg = settings.to_config();
  const auto t0 = Clock::now();
  FrameOutput out;
  std::vector<float> depth;
  if (settings.mode == ShadingMode::Hqs) {
    HqsTarget target(settings.width, settings.height);
    HqsFrame frame = hqs_render(cloud, cam, cfg, target, settings.background);
    out.image = std::move(frame.image);
    out.stats = frame.stats;
    if (settings.dilate) {
      depth.resize(target.size());
      for (std::size_t i = 0; i < depth.size(); ++i) depth[i] = target.depth(i);
    }
  } else {
    Framebuffer fb(settings.width, settings.height);
    out.stats = render(cloud, cam, cfg, fb);
    out.image = resolve_visibility(fb, cloud.colors, settings.background, &out.stats);
    if (settings.dilate) depth = depth_of(fb);
  }
  if (settings.dilate) out.image = dilate(out.image, depth, cfg);
  out.stats.frameMillis = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  return out;
}

nlohmann::json frame_stats_json(std::size_t frame, const FrameSettings& settings, const RenderStats& stats) {
  nlohmann::json j = {{"frame", frame}, {"config", settings.echo()}};
  j.update(stats_fields(stats));
  return j;
}

std::vector<RenderStats> cmd_render(const RenderOptions& opt, std::ostream& out) {
  const RenderConfig cfg = opt.settings.to_config();
  const CameraPath path = CameraPath::load(opt.cameraPath);
  check_render_setup(cfg, opt.settings.width, opt.settings.height,
                     path.frame(0, opt.settings.width, opt.settings.height));
  const EncodedCloud cloud = read_bpc_file(opt.input);
  std::filesystem::create_directories(opt.outDir);

  std::vector<RenderStats> all;
  nlohmann::json statsJson = nlohmann::json::array();
  const std::size_t frames = path.frame_count();
  for (std::size_t f = 0; f < frames; ++f) {
    const Camera cam = path.frame(f, opt.settings.width, opt.settings.height);
    const FrameOutput frame = render_frame(cloud, cam, opt.settings);
    char name[32];
    std::snprintf(name, sizeof name, "frame_%04zu.png", f);
    write_png(frame.image, opt.outDir / name);
    statsJson.push_back(frame_stats_json(f, opt.settings, frame.stats));
    all.push_back(frame.stats);
  }
  if (opt.statsPath) write_json(statsJson, *opt.statsPath);
  out << "rendered " << frames << " frame(s) to " << opt.outDir.string() << '\n';
  return all;
}

std::vector<FrameSettings> expand_matrix(const std::string& matrix, const FrameSettings& base) {
  std::vector<FrameSettings> grid{base};
  std::stringstream axes(matrix);
  std::string axis;
  while (std::getline(axes, axis, ';')) {
    if (axis.empty()) continue;
    const auto eq = axis.find('=');
    if (eq == std::string::npos) throw ConfigError("--matrix: expected key=v1,v2 in '" + axis + "'");
    const std::string key = axis.substr(0, eq);
    std::vector<std::string> values;
    std::stringstream vs(axis.substr(eq + 1));
    for (std::string v; std::getline(vs, v, ',');) values.push_back(v);
    if (values.empty()) throw ConfigError("--matrix: no values for '" + key + "'");

    std::vector<FrameSettings> next;
    for (const auto& s : grid) {
      for (const auto& v : values) {
        FrameSettings t = s;
        if (key == "precision") {
          t.precision = parse_precision(v);
        } else if (key == "culling") {
          t.culling = parse_switch(key, v);
        } else if (key == "lod") {
          t.lod = parse_switch(key, v);
        } else if (key == "hqs") {
          t.mode = parse_switch(key, v) ? ShadingMode::Hqs : ShadingMode::Plain;
        } else if (key == "dilate") {
          t.dilate = parse_switch(key, v);
        } else if (key == "peripheral") {
          t.peripheral = parse_switch(key, v);
        } else {
          throw ConfigError("--matrix: unknown key '" + key + "'");
        }
        next.push_back(t);
      }
    }
    grid = std::move(next);
  }
  return grid;
}

std::vector<BenchRow> cmd_bench(const BenchOptions& opt, std::ostream& out) {
  if (opt.repeat < 2) throw ConfigError("--repeat must be >= 2 (the first repeat is a discarded warm-up)");
  const auto grid = expand_matrix(opt.matrix, opt.base);
  for (const auto& s : grid) s.to_config();
  const CameraPath path = CameraPath::load(opt.cameraPath);
  const EncodedCloud cloud = read_bpc_file(opt.input);
  const std::size_t frames = path.frame_count();

  std::vector<BenchRow> rows;
  for (const auto& s : grid) {
    check_render_setup(s.to_config(), s.width, s.height, path.frame(0, s.width, s.height));
    double millis = 0.0, processed = 0.0, coordBytes = 0.0;
    std::size_t samples = 0;
    for (int r = 0; r < opt.repeat; ++r) {
      for (std::size_t f = 0; f < frames; ++f) {
        const FrameOutput frame = render_frame(cloud, path.frame(f, s.width, s.height), s);
        if (r == 0) continue;
        millis += frame.stats.frameMillis;
        processed += double(frame.stats.pointsProcessed);
        coordBytes += double(frame.stats.coordinateBytesLoaded);
        ++samples;
      }
    }
    BenchRow row;
    row.settings = s;
    row.meanFrameMillis = millis / double(samples);
    row.meanPointsProcessed = processed / double(samples);
    row.pointsPerSecond = row.meanFrameMillis > 0.0 ? row.meanPointsProcessed / row.meanFrameMillis * 1000.0 : 0.0;
    row.coordinateBytesPerPoint = processed > 0.0 ? coordBytes / processed : 0.0;
    rows.push_back(row);
  }

  char line[256];
  std::snprintf(line, sizeof line, "%-9s %-7s %-4s %-5s %-6s %12s %16s %12s\n", "precision", "culling", "lod", "mode",
                "dilate", "frame ms", "points/s", "coordB/pt");
  out << line;
  nlohmann::json j = nlohmann::json::array();
  for (const auto& row : rows) {
    const auto& s = row.settings;
    std::snprintf(line, sizeof line, "%-9s %-7s %-4s %-5s %-6s %12.3f %16.0f %12.3f\n", precision_name(s.precision),
                  s.culling ? "on" : "off", s.lod ? "on" : "off", s.mode == ShadingMode::Hqs ? "hqs" : "plain",
                  s.dilate ? "on" : "off", row.meanFrameMillis, row.pointsPerSecond, row.coordinateBytesPerPoint);
    out << line;
    j.push_back({{"config", s.echo()},
                 {"repeats", opt.repeat - 1},
                 {"frames", frames},
                 {"meanFrameMillis", row.meanFrameMillis},
                 {"meanPointsProcessed", row.meanPointsProcessed},
                 {"pointsPerSecond", row.pointsPerSecond},
                 {"coordinateBytesPerPoint", row.coordinateBytesPerPoint}});
  }
  if (opt.jsonPath) write_json(j, *opt.jsonPath);
  return rows;
}

namespace {

void add_frame_flags(CLI::App& cmd, FrameSettings& s, std::string& precision, std::string& mode, std::string& lod,
                     std::string& culling, std::string& dilate, std::string& peripheral) {
  cmd.add_option("--width", s.width, "viewport width in pixels")->check(CLI::PositiveNumber);
  cmd.add_option("--height", s.height, "viewport height in pixels")->check(CLI::PositiveNumber);
  cmd.add_option("--mode", mode, "plain|hqs")->check(CLI::IsMember({"plain", "hqs"}));
  cmd.add_option("--lod", lod, "on|off (off renders every point)")->check(CLI::IsMember({"on", "off"}));
  cmd.add_option("--peripheral", peripheral, "on|off ring-dependent LOD thresholds")
      ->check(CLI::IsMember({"on", "off"}));
  cmd.add_option("--precision", precision, "adaptive|low|medium|high")
      ->check(CLI::IsMember({"adaptive", "low", "medium", "high"}));
  cmd.add_option("--culling", culling, "on|off frustum culling")->check(CLI::IsMember({"on", "off"}));
  cmd.add_option("--dilate", dilate, "on|off hole filling")->check(CLI::IsMember({"on", "off"}));
  cmd.add_option("--threads", s.threads, "worker threads (0 = all cores)");
}

void apply_frame_flags(FrameSettings& s, const std::string& precision, const std::string& mode,
                       const std::string& lod, const std::string& culling, const std::string& dilate,
                       const std::string& peripheral) {
  s.precision = parse_precision(precision);
  s.mode = mode == "hqs" ? ShadingMode::Hqs : ShadingMode::Plain;
  s.lod = lod == "on";
  s.culling = culling == "on";
  s.dilate = dilate == "on";
  s.peripheral = peripheral == "on";
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"CPU point-cloud rasterizer"};
  app.require_subcommand(1);

  ConvertOptions conv;
  std::string morton = "on";
  auto* convert = app.add_subcommand("convert", "PLY to batched BPC");
  convert->add_option("input", conv.input, "input .ply")->required();
  convert->add_option("output", conv.output, "output .bpc")->required();
  convert->add_option("--morton", morton, "on|off Morton sort")->check(CLI::IsMember({"on", "off"}));
  convert->add_option("--batch-size", conv.batchSize, "points per batch")->check(CLI::PositiveNumber);

  BuildLodOptions lodOpt;
  auto* buildLod = app.add_subcommand("build-lod", "build the LOD octree");
  buildLod->add_option("input", lodOpt.input, "input .bpc or .ply")->required();
  buildLod->add_option("output", lodOpt.output, "output .bpc")->required();

  RenderOptions ren;
  std::string rPrecision = "adaptive", rMode = "plain", rLod = "on", rCulling = "on", rDilate = "off",
              rPeripheral = "off", rStats;
  auto* renderCmd = app.add_subcommand("render", "render a camera path to PNG frames");
  renderCmd->add_option("input", ren.input, "input .bpc")->required();
  renderCmd->add_option("path", ren.cameraPath, "camera path .json")->required();
  renderCmd->add_option("outdir", ren.outDir, "output directory")->required();
  add_frame_flags(*renderCmd, ren.settings, rPrecision, rMode, rLod, rCulling, rDilate, rPeripheral);
  renderCmd->add_option("--stats", rStats, "per-frame stats JSON");

  BenchOptions bench;
  std::string bPrecision = "adaptive", bMode = "plain", bLod = "on", bCulling = "on", bDilate = "off",
              bPeripheral = "off", bJson;
  auto* benchCmd = app.add_subcommand("bench", "time a grid of configurations");
  benchCmd->add_option("input", bench.input, "input .bpc")->required();
  benchCmd->add_option("path", bench.cameraPath, "camera path .json")->required();
  benchCmd->add_option("--repeat", bench.repeat, "passes over the path; the first is discarded");
  benchCmd->add_option("--matrix", bench.matrix, "grid, e.g. precision=adaptive,high;culling=on,off");
  add_frame_flags(*benchCmd, bench.base, bPrecision, bMode, bLod, bCulling, bDilate, bPeripheral);
  benchCmd->add_option("--json", bJson, "result JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "pcr: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*convert) {
      conv.morton = morton == "on";
      cmd_convert(conv, out);
    } else if (*buildLod) {
      cmd_build_lod(lodOpt, out);
    } else if (*renderCmd) {
      apply_frame_flags(ren.settings, rPrecision, rMode, rLod, rCulling, rDilate, rPeripheral);
      if (!rStats.empty()) ren.statsPath = rStats;
      cmd_render(ren, out);
    } else if (*benchCmd) {
      apply_frame_flags(bench.base, bPrecision, bMode, bLod, bCulling, bDilate, bPeripheral);
      if (!bJson.empty()) bench.jsonPath = bJson;
      cmd_bench(bench, out);
    }
  } catch (const std::exception& e) {
    err << "pcr: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace pcr::app
