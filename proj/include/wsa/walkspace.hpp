#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

#include "wsa/labels.hpp"
#include "wsa/mesh.hpp"

namespace wsa {

struct ClearanceParams {
  /// Spacing of the sample lattice (m). Each sample is the center of a clearance disc.
  double sample_pitch = 0.15;
  /// Disc radius that must fit for a sample to be green (0.46 OSHA, 0.91 ADA).
  double safe_radius = 0.46;
  /// At or below this clearance a sample is red (m).
  double red_radius = 0.10;

  void validate() const;
};

enum class CellColor : std::uint8_t { Off, Green, Yellow, Red };

std::string_view color_name(CellColor c);
std::optional<CellColor> parse_color(std::string_view name);

struct GridCell {
  int col = 0;
  int row = 0;
  bool operator==(const GridCell&) const = default;
};

/// Cell (i, j) is centered at origin + (i + 1/2, j + 1/2) * pitch.
struct GridFrame {
  Vec2 origin{0, 0};
  double pitch = 0.15;
  int cols = 0;
  int rows = 0;

  std::size_t size() const { return std::size_t(cols) * std::size_t(rows); }
  std::size_t index(GridCell c) const { return std::size_t(c.row) * cols + c.col; }
  GridCell cell(std::size_t k) const { return {int(k % cols), int(k / cols)}; }
  Vec2 center(GridCell c) const { return origin + pitch * Vec2(c.col + 0.5, c.row + 0.5); }
  bool contains(GridCell c) const { return c.col >= 0 && c.row >= 0 && c.col < cols && c.row < rows; }
  /// Cell holding point p, or nullopt outside the frame.
  std::optional<GridCell> locate(const Vec2& p) const;

  static GridFrame covering(const Vec2& lo, const Vec2& hi, double pitch);
  bool operator==(const GridFrame&) const = default;
};

struct OccupancyRaster {
  GridFrame frame;
  std::vector<std::uint8_t> on_floor;
};

struct ClearanceGrid {
  GridFrame frame;
  ClearanceParams params;
  /// Radius of the largest disc around the cell center that stays on floor
  /// cells, capped at safe_radius. Zero for off cells.
  std::vector<double> clearance;
  std::vector<CellColor> colors;

  bool on_floor(std::size_t k) const { return colors[k] != CellColor::Off; }
  std::size_t count(CellColor c) const;
  double cell_area() const { return frame.pitch * frame.pitch; }
};

/// Green at or above safe_radius, red at or below red_radius, yellow between.
CellColor color_for(bool on_floor, double clearance, const ClearanceParams& params);

/// Inside-test for the XY projection of a triangle; edges and corners count as inside.
bool point_in_triangle_xy(const Vec3& a, const Vec3& b, const Vec3& c, const Vec2& p);

/// Marks cells whose center lies over a ClearFloor face. The frame covers the
/// mesh's XY bounds unless one is given.
OccupancyRaster rasterize_floor(const TriangleMesh& mesh, const FaceLabelMap& labels,
                                const ClearanceParams& params);
OccupancyRaster rasterize_floor(const TriangleMesh& mesh, const FaceLabelMap& labels,
                                const GridFrame& frame);

/// Exact distance from every cell center to the nearest off cell (everything
/// outside the frame is off), capped at safe_radius, then colored.
ClearanceGrid clearance_map(const OccupancyRaster& raster, const ClearanceParams& params);

using Polyline = std::vector<Vec2>;

/// Closed outlines of the green region (implicitly closed, last point != first).
/// Outer boundaries run counter-clockwise, holes clockwise. Diagonal-only
/// contact does not connect green cells.
std::vector<Polyline> compliant_edges(const ClearanceGrid& grid);

struct RouteResult {
  bool exists = false;
  std::vector<GridCell> path;
  double length = 0;              // (cells - 1) * pitch
  double limiting_clearance = 0;  // smallest clearance along the path
};

/// Shortest 4-connected path over green cells. Throws InvalidEndpointError when
/// an endpoint is outside the frame or off the floor.
RouteResult check_route(const ClearanceGrid& grid, const Vec2& start, const Vec2& goal);

/// CSV with header `x,y,clearance,color`, one row per cell, row-major.
void write_grid_csv(const ClearanceGrid& grid, std::ostream& out);
ClearanceGrid read_grid_csv(std::istream& in, const GridFrame& frame, const ClearanceParams& params);

}  // namespace wsa
