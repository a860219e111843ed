#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wsa/labels.hpp"
#include "wsa/mesh.hpp"
#include "wsa/walkspace.hpp"

namespace wsa {

struct Rect {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  double width() const { return x1 - x0; }
  double depth() const { return y1 - y0; }
  double area() const { return width() * depth(); }
  Vec2 center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
  /// Closed containment.
  bool contains(const Vec2& p) const { return p.x() >= x0 && p.x() <= x1 && p.y() >= y0 && p.y() <= y1; }
  bool interiors_overlap(const Rect& o) const {
    return x0 < o.x1 && o.x0 < x1 && y0 < o.y1 && o.y0 < y1;
  }
  /// Euclidean distance from p to the closed rectangle (0 inside).
  double distance(const Vec2& p) const;
};

struct FurnitureBox {
  Rect footprint;
  double height = 0;
};

/// A mound whose four faces rise from the footprint edges at `tilt_deg` until
/// they meet or reach `height`, whichever comes first.
struct ClutterPile {
  Rect footprint;
  double height = 0;
  double tilt_deg = 30;
};

/// Table top with a short apron and no underside.
struct Table {
  Rect footprint;
  double top_height = 0.75;
};

/// Box resting on whichever table contains its footprint.
struct TableItem {
  Rect footprint;
  double height = 0.1;
};

struct NoiseModel {
  double jitter_sigma = 0.005;
  double hole_probability = 0.02;
  /// Hole probability for floor faces; falls back to hole_probability.
  std::optional<double> floor_hole_probability;
  /// Every face whose XY centroid falls inside one of these is removed.
  std::vector<Rect> dark_dropouts;
};

struct SceneSpec {
  /// Simple rectilinear polygon (axis-aligned edges), either winding.
  std::vector<Vec2> room;
  double wall_height = 2.5;
  std::vector<FurnitureBox> furniture;
  std::vector<ClutterPile> clutter;
  std::vector<Table> tables;
  std::vector<TableItem> table_items;
  NoiseModel noise;
  /// Longest edge allowed along the floor lattice and wall strips (m).
  double resolution = 0.25;

  std::vector<std::string> violations() const;
  /// Throws SpecValidationError listing every violation.
  void validate() const;
};

inline constexpr double kTableApron = 0.05;
inline constexpr double kMaxClutterHeight = 0.35;

/// `key = values` lines: room, wall_height, resolution, furniture, clutter,
/// table, table_item, jitter, hole_probability, floor_hole_probability, dropout.
SceneSpec parse_scene_spec(std::string_view text);
std::string format_scene_spec(const SceneSpec& spec);

/// Exact description of what a generated scene contains.
struct GroundTruth {
  /// Label of every face in the generated (post-noise) mesh.
  std::vector<Label> labels;
  double floor_z = 0;
  std::vector<Vec2> room;
  /// Footprints that keep droplets from reaching the floor.
  std::vector<Rect> obstacles;

  /// Distance from p to the nearest point that is not clear floor; 0 when p itself is not clear.
  double clear_distance(const Vec2& p) const;
  bool green(const Vec2& p, double radius) const;
};

std::string truth_to_json(const GroundTruth& truth);
GroundTruth truth_from_json(std::string_view text);

struct GeneratedScene {
  TriangleMesh mesh;
  GroundTruth truth;
};

/// Labels in the ground truth assume the default extraction and surface parameters.
GeneratedScene generate_scene(const SceneSpec& spec, std::uint64_t seed);

bool point_in_polygon(const std::vector<Vec2>& polygon, const Vec2& p);
/// Distance from p to the polygon outline.
double distance_to_outline(const std::vector<Vec2>& polygon, const Vec2& p);

struct ClassMetrics {
  std::size_t true_positive = 0;
  std::size_t false_positive = 0;
  std::size_t false_negative = 0;
  double precision = 0;
  double recall = 0;
  /// Set when nothing was predicted (precision) or nothing was true (recall); the value is 0.
  bool precision_undefined = false;
  bool recall_undefined = false;
};

struct Evaluation {
  std::map<std::string, ClassMetrics> classes;
  /// Intersection over union of predicted and analytic green cells, when a grid is given.
  std::optional<double> green_iou;
  std::size_t green_predicted = 0;
  std::size_t green_truth = 0;
};

/// Per-class scores over faces. The `floor` class pools floor, clear_floor and
/// noise; the others compare single labels. Classes absent from both sides
/// score 1. Throws InputMismatchError when face counts differ.
Evaluation evaluate_labels(const FaceLabelMap& predicted, const GroundTruth& truth,
                           const ClearanceGrid* grid = nullptr);

/// Multi-room synthetic home used for timing runs.
SceneSpec benchmark_home(double resolution);
/// benchmark_home with the resolution tuned so the mesh has about `target_faces` faces.
SceneSpec benchmark_home_for_faces(std::size_t target_faces);

}  // namespace wsa
