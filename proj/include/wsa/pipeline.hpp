#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wsa/classify.hpp"
#include "wsa/error.hpp"
#include "wsa/floor_extract.hpp"
#include "wsa/labels.hpp"
#include "wsa/mesh.hpp"
#include "wsa/walkspace.hpp"
#include "wsa/waterfall.hpp"

namespace wsa {

enum class Preset { Osha, Ada, Custom };

inline constexpr double kOshaSafeRadius = 0.46;
inline constexpr double kAdaSafeRadius = 0.91;

std::string_view preset_name(Preset p);
std::optional<Preset> parse_preset(std::string_view name);

struct RouteRequest {
  std::string name;
  Vec2 start{0, 0};
  Vec2 goal{0, 0};
};

struct PipelineConfig {
  Preset preset = Preset::Osha;
  ExtractionParams extraction;
  ClassifyParams classify;
  ClearanceParams clearance;
  SurfaceParams surface;
  double droplet_pitch = 0.05;
  /// How far from floor_z (or a band mean) a droplet hit may land and still count (m).
  double floor_tolerance = 0.03;
  double weld_tolerance = 0.001;
  double index_cell_size = 0.25;
  std::vector<RouteRequest> routes;

  /// Switches preset; osha and ada also pin safe_radius.
  void use_preset(Preset p);
  /// Throws ConfigError.
  void validate() const;
};

/// `key = value` text. Keys: preset, ceiling_cutoff, min_theta, max_theta,
/// band_width, droplet_pitch, floor_tolerance, weld_tolerance,
/// index_cell_size, surface_min_height, surface_max_height, surface_min_area,
/// sample_pitch, safe_radius, red_radius, and `route = name sx sy gx gy`
/// (repeatable). A safe_radius that contradicts the preset is an error, as is
/// preset custom without one. Throws ParseError or ConfigError.
PipelineConfig parse_config(std::string_view text);
PipelineConfig read_config_file(const std::filesystem::path& path);
std::string format_config(const PipelineConfig& config);

struct StageTiming {
  std::string stage;
  double seconds = 0;
};

struct RouteOutcome {
  RouteRequest request;
  std::optional<RouteResult> result;
  /// Set instead of result when an endpoint was rejected.
  std::string error;
};

struct PipelineResult {
  FaceLabelMap labels;
  /// Absent when no floor was found.
  std::optional<FloorEstimate> floor;
  SegmentationResult segmentation;
  ClearanceGrid grid;
  std::vector<Polyline> edges;
  std::vector<RouteOutcome> routes;
  std::size_t degenerate_faces = 0;
  std::vector<std::string> warnings;
  /// Wall-clock per stage; never written to deterministic outputs.
  std::vector<StageTiming> timings;
};

/// Stage names used in timings and error messages, in execution order.
inline constexpr std::string_view kStageNames[] = {"cull",     "extract",  "index",     "segment",
                                                   "surfaces", "classify", "clearance", "routes"};

/// Error raised inside a stage, with the stage name prefixed to the message.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& cause)
      : Error(stage + ": " + cause), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

/// cull -> extract -> index -> segment -> surfaces -> classify -> clearance -> routes.
/// A scene without a usable floor yields a result with a `no-floor-found`
/// warning, no floor labels and an all-off grid. Output is identical for any
/// thread count.
PipelineResult run_pipeline(const TriangleMesh& mesh, const PipelineConfig& config, int threads = 1);

}  // namespace wsa
