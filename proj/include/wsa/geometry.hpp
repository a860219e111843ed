#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wsa/mesh.hpp"

namespace wsa {

/// Faces with less area than this are degenerate (m^2).
inline constexpr double kDegenerateArea = 1e-12;

/// Unit face normal with a non-negative Z component.
struct UnitNormal {
  Vec3 direction;
};

/// Normalized (b-a)x(c-a), flipped so that z >= 0. Throws DegenerateFaceError.
UnitNormal face_normal(const Vec3& a, const Vec3& b, const Vec3& c);

/// Angle between the normal and +Z in degrees, within [0, 90].
double tilt_degrees(const UnitNormal& n);

bool is_degenerate(const Vec3& a, const Vec3& b, const Vec3& c);

/// Tilt of every face; NaN for degenerate faces.
std::vector<double> face_tilts(const TriangleMesh& mesh);

/// Edge adjacency in compressed-row form. Symmetric, never self-adjacent.
class FaceAdjacency {
 public:
  FaceAdjacency() = default;
  FaceAdjacency(std::vector<std::uint32_t> offsets, std::vector<FaceId> neighbors)
      : offsets_(std::move(offsets)), neighbors_(std::move(neighbors)) {}

  std::size_t face_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::span<const FaceId> neighbors(FaceId f) const {
    return {neighbors_.data() + offsets_[f], neighbors_.data() + offsets_[f + 1]};
  }
  bool adjacent(FaceId a, FaceId b) const;

 private:
  std::vector<std::uint32_t> offsets_;
  std::vector<FaceId> neighbors_;
};

/// Welds vertices closer than `weld_tolerance` (transitively) for topology only,
/// then links faces that share a welded edge. When `active` is non-empty only
/// faces with active[f] != 0 take part.
FaceAdjacency weld_and_adjacency(const TriangleMesh& mesh, double weld_tolerance,
                                 std::span<const std::uint8_t> active = {});

/// Welded vertex representative for each vertex (smallest index in its cluster).
std::vector<VertexId> weld_vertices(const TriangleMesh& mesh, double weld_tolerance);

/// Height of a vertical ray at (x, y) through triangle abc, or nullopt when the
/// ray misses. Edges and corners count as hits; faces with no XY extent never hit.
std::optional<double> vertical_hit(const Vec3& a, const Vec3& b, const Vec3& c, double x, double y);

/// Uniform XY hash grid. A face is listed in every cell its XY bounding box touches.
class SpatialIndexXY {
 public:
  SpatialIndexXY(const TriangleMesh& mesh, double cell_size);
  SpatialIndexXY(const TriangleMesh& mesh, double cell_size, std::span<const FaceId> faces);

  double cell_size() const { return cell_size_; }
  bool empty() const { return face_count_ == 0; }
  std::size_t face_count() const { return face_count_; }
  /// Highest vertex z among indexed faces.
  double z_max() const { return z_max_; }
  const Vec2& origin() const { return origin_; }
  int cols() const { return cols_; }
  int rows() const { return rows_; }

  /// Faces whose bounding box covers the cell holding (x, y); empty outside the grid.
  std::span<const FaceId> candidates(double x, double y) const;
  std::span<const FaceId> cell(int col, int row) const;

 private:
  void build(const TriangleMesh& mesh, std::span<const FaceId> faces);
  int col_of(double x) const;
  int row_of(double y) const;

  double cell_size_;
  Vec2 origin_{0, 0};
  int cols_ = 0;
  int rows_ = 0;
  std::size_t face_count_ = 0;
  double z_max_ = 0;
  std::vector<std::uint32_t> offsets_;
  std::vector<FaceId> items_;
};

struct RayHit {
  FaceId face;
  double z;

  bool operator==(const RayHit&) const = default;
};

/// Highest intersection below z_start of the downward ray at (x, y). Equal
/// heights resolve to the lowest face id. With a non-empty `accept` mask only
/// faces with accept[f] != 0 are considered.
std::optional<RayHit> raycast_down(const SpatialIndexXY& index, const TriangleMesh& mesh,
                                   double x, double y, double z_start,
                                   std::span<const std::uint8_t> accept = {});

}  // namespace wsa
