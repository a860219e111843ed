#include "wsa/mesh.hpp"

#include <algorithm>
#include <cmath>

#include "wsa/error.hpp"

namespace wsa {

Vec3 TriangleMesh::centroid(FaceId f) const {
  return (corner(f, 0) + corner(f, 1) + corner(f, 2)) / 3.0;
}

double TriangleMesh::area(FaceId f) const {
  return 0.5 * (corner(f, 1) - corner(f, 0)).cross(corner(f, 2) - corner(f, 0)).norm();
}

double TriangleMesh::min_z(FaceId f) const {
  return std::min({corner(f, 0).z(), corner(f, 1).z(), corner(f, 2).z()});
}

std::vector<std::optional<std::string>> TriangleMesh::face_groups() const {
  std::vector<std::optional<std::string>> out(faces.size());
  for (const auto& [name, ids] : groups) {
    for (FaceId f : ids) {
      if (f < out.size()) out[f] = name;
    }
  }
  return out;
}

void TriangleMesh::validate() const {
  for (const auto& v : vertices) {
    if (!v.allFinite()) throw Error("mesh has a non-finite vertex coordinate");
  }
  for (const auto& t : faces) {
    for (VertexId v : t) {
      if (v >= vertices.size()) throw Error("face index out of range");
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      throw Error("face repeats a vertex index");
    }
  }
  std::vector<char> seen(faces.size(), 0);
  for (const auto& [name, ids] : groups) {
    for (FaceId f : ids) {
      if (f >= faces.size()) throw Error("group '" + name + "' references a missing face");
      if (seen[f]) throw Error("face belongs to more than one group");
      seen[f] = 1;
    }
  }
}

TriangleMesh extract_faces(const TriangleMesh& mesh, std::span<const FaceId> faces) {
  TriangleMesh out;
  std::vector<VertexId> remap(mesh.vertices.size(), VertexId(-1));
  out.faces.reserve(faces.size());
  for (FaceId f : faces) {
    Triangle t{};
    for (int k = 0; k < 3; ++k) {
      VertexId v = mesh.faces[f][k];
      if (remap[v] == VertexId(-1)) {
        remap[v] = static_cast<VertexId>(out.vertices.size());
        out.vertices.push_back(mesh.vertices[v]);
      }
      t[k] = remap[v];
    }
    out.faces.push_back(t);
  }
  return out;
}

BoundsXY bounds_xy(const TriangleMesh& mesh) {
  BoundsXY b{Vec2::Constant(INFINITY), Vec2::Constant(-INFINITY)};
  for (const auto& v : mesh.vertices) {
    b.min = b.min.cwiseMin(v.head<2>());
    b.max = b.max.cwiseMax(v.head<2>());
  }
  return b;
}

}  // namespace wsa
