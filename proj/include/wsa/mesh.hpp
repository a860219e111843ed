#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace wsa {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using FaceId = std::uint32_t;
using VertexId = std::uint32_t;
using Triangle = std::array<VertexId, 3>;

/// Indexed triangle soup with named face groups. Z is up, units are meters.
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<Triangle> faces;
  /// Group name to ascending face ids. A face belongs to at most one group.
  std::map<std::string, std::vector<FaceId>> groups;

  std::size_t face_count() const { return faces.size(); }

  const Vec3& corner(FaceId f, int k) const { return vertices[faces[f][k]]; }
  Vec3 centroid(FaceId f) const;
  double area(FaceId f) const;
  double min_z(FaceId f) const;

  /// Per-face group name, or nullopt for ungrouped faces.
  std::vector<std::optional<std::string>> face_groups() const;

  /// Throws wsa::Error if any structural invariant is broken.
  void validate() const;
};

/// Sub-mesh made of `faces`, with unreferenced vertices dropped. No groups.
TriangleMesh extract_faces(const TriangleMesh& mesh, std::span<const FaceId> faces);

struct BoundsXY {
  Vec2 min;
  Vec2 max;
};

/// XY bounding box of all vertices. Mesh must have at least one vertex.
BoundsXY bounds_xy(const TriangleMesh& mesh);

}  // namespace wsa
