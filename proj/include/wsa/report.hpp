#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wsa/labels.hpp"
#include "wsa/mesh.hpp"
#include "wsa/pipeline.hpp"
#include "wsa/walkspace.hpp"

namespace wsa {

inline constexpr std::string_view kToolName = "wsa";
inline constexpr std::string_view kToolVersion = "1.0.0";

/// Color groups of the rendered mesh, in a fixed order.
inline constexpr std::string_view kColorGroups[] = {
    "floor_green",        "floor_yellow",           "floor_red",     "floor_obstructed",
    "noise",              "work_surface_green",     "surface_clutter_purple",
    "clutter_orange",     "other_purple",           "furniture_gray", "ceiling_culled"};

/// Color of a clear-floor face: the majority color of the grid cells whose
/// centers it covers, ties going to the more restrictive color. A face that
/// covers no center takes the color of the cell holding its centroid.
CellColor face_color(const TriangleMesh& mesh, FaceId f, const ClearanceGrid& grid);

/// Same vertices and faces, regrouped by render color.
TriangleMesh colorize(const TriangleMesh& mesh, const FaceLabelMap& labels, const ClearanceGrid& grid);

struct SurfaceSummary {
  double mean_z = 0;
  double area = 0;
  std::size_t faces = 0;
  std::size_t clear_faces = 0;
  std::size_t obstructions = 0;
  bool operator==(const SurfaceSummary&) const = default;
};

struct BandSummary {
  double mean_z = 0;
  std::size_t faces = 0;
  bool operator==(const BandSummary&) const = default;
};

struct RouteSummary {
  std::string name;
  Vec2 start{0, 0};
  Vec2 goal{0, 0};
  /// "ok" or "invalid-endpoint".
  std::string status;
  bool exists = false;
  double length = 0;
  double limiting_clearance = 0;
  std::size_t cells = 0;
  bool operator==(const RouteSummary&) const = default;
};

struct WalkspaceReport {
  std::string tool{kToolName};
  std::string version{kToolVersion};
  PipelineConfig parameters;
  /// "ok" or "no-floor-found".
  std::string status = "ok";
  std::optional<double> floor_z;

  std::size_t vertices = 0;
  std::size_t faces = 0;
  std::size_t degenerate_faces = 0;
  std::map<std::string, std::size_t> face_counts;  // by label name
  std::map<std::string, double> face_areas;        // m^2 by label name

  GridFrame grid;
  std::size_t green_cells = 0;
  std::size_t yellow_cells = 0;
  std::size_t red_cells = 0;
  double green_area = 0;
  double yellow_area = 0;
  double red_area = 0;
  double floor_area = 0;  // rasterized walkable floor
  /// green_area / floor_area, 0 without floor.
  double compliance_ratio = 0;

  std::size_t droplet_sites = 0;
  std::size_t coverage_gaps = 0;
  std::size_t obstructing_faces = 0;
  /// Floor faces no droplet reached (under furniture and tables); still labeled floor.
  std::size_t unreached_floor_faces = 0;
  std::size_t reached_noise_faces = 0;

  std::vector<SurfaceSummary> work_surfaces;
  std::vector<BandSummary> bands;
  std::size_t edge_loops = 0;
  double edge_length = 0;
  std::vector<RouteSummary> routes;
  std::vector<std::string> warnings;
};

WalkspaceReport build_report(const TriangleMesh& mesh, const PipelineConfig& config,
                             const PipelineResult& result);
/// Pretty-printed JSON; identical reports give identical bytes.
std::string report_to_json(const WalkspaceReport& report);
/// Throws Error on malformed input.
WalkspaceReport report_from_json(std::string_view text);
bool operator==(const WalkspaceReport& a, const WalkspaceReport& b);

/// Writes labeled.obj, colored.obj, floor.obj, walkspace.obj, clutter.obj,
/// work_surfaces.obj, other.obj, furniture.obj, edges.obj, grid.csv and
/// report.json into `dir`, creating it when missing.
void write_outputs(const std::filesystem::path& dir, const TriangleMesh& mesh,
                   const PipelineConfig& config, const PipelineResult& result);

/// Reads the frame and clearance parameters from report.json and the grid from grid.csv.
ClearanceGrid load_grid(const std::filesystem::path& dir);

}  // namespace wsa
