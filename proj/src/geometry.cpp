#include "wsa/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>
#include <numeric>
#include <unordered_map>

#include "wsa/error.hpp"

namespace wsa {

UnitNormal face_normal(const Vec3& a, const Vec3& b, const Vec3& c) {
  Vec3 n = (b - a).cross(c - a);
  double len = n.norm();
  if (!(0.5 * len >= kDegenerateArea)) throw DegenerateFaceError();
  n /= len;
  if (n.z() < 0) n = -n;
  return {n};
}

double tilt_degrees(const UnitNormal& n) {
  const Vec3& d = n.direction;
  return std::atan2(std::hypot(d.x(), d.y()), std::abs(d.z())) * 180.0 / std::numbers::pi;
}

bool is_degenerate(const Vec3& a, const Vec3& b, const Vec3& c) {
  return !(0.5 * (b - a).cross(c - a).norm() >= kDegenerateArea);
}

std::vector<double> face_tilts(const TriangleMesh& mesh) {
  std::vector<double> tilts(mesh.faces.size(), std::numeric_limits<double>::quiet_NaN());
  for (FaceId f = 0; f < mesh.faces.size(); ++f) {
    const Vec3 &a = mesh.corner(f, 0), &b = mesh.corner(f, 1), &c = mesh.corner(f, 2);
    if (!is_degenerate(a, b, c)) tilts[f] = tilt_degrees(face_normal(a, b, c));
  }
  return tilts;
}

bool FaceAdjacency::adjacent(FaceId a, FaceId b) const {
  auto n = neighbors(a);
  return std::binary_search(n.begin(), n.end(), b);
}

namespace {

struct CellKey {
  std::int64_t x, y, z;
  bool operator==(const CellKey&) const = default;
};

struct CellKeyHash {
  std::size_t operator()(const CellKey& k) const {
    std::uint64_t h = static_cast<std::uint64_t>(k.x) * 0x9E3779B97F4A7C15ull;
    h ^= static_cast<std::uint64_t>(k.y) * 0xC2B2AE3D27D4EB4Full + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(k.z) * 0x165667B19E3779F9ull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0u); }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // The smaller index always becomes the root.
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::uint32_t> parent_;
};

}  // namespace

std::vector<VertexId> weld_vertices(const TriangleMesh& mesh, double weld_tolerance) {
  const std::size_t n = mesh.vertices.size();
  DisjointSets sets(n);

  if (weld_tolerance <= 0) {
    std::unordered_map<CellKey, VertexId, CellKeyHash> exact;
    exact.reserve(n);
    for (VertexId v = 0; v < n; ++v) {
      const Vec3& p = mesh.vertices[v];
      CellKey key{};
      // +0.0 folds negative zero onto positive zero before taking the bits.
      double c[3] = {p.x() + 0.0, p.y() + 0.0, p.z() + 0.0};
      std::memcpy(&key.x, &c[0], 8);
      std::memcpy(&key.y, &c[1], 8);
      std::memcpy(&key.z, &c[2], 8);
      auto [it, inserted] = exact.try_emplace(key, v);
      if (!inserted) sets.unite(it->second, v);
    }
  } else {
    const double tol2 = weld_tolerance * weld_tolerance;
    std::unordered_map<CellKey, std::vector<VertexId>, CellKeyHash> grid;
    grid.reserve(n);
    for (VertexId v = 0; v < n; ++v) {
      const Vec3& p = mesh.vertices[v];
      CellKey key{static_cast<std::int64_t>(std::floor(p.x() / weld_tolerance)),
                  static_cast<std::int64_t>(std::floor(p.y() / weld_tolerance)),
                  static_cast<std::int64_t>(std::floor(p.z() / weld_tolerance))};
      for (std::int64_t dx = -1; dx <= 1; ++dx) {
        for (std::int64_t dy = -1; dy <= 1; ++dy) {
          for (std::int64_t dz = -1; dz <= 1; ++dz) {
            auto it = grid.find({key.x + dx, key.y + dy, key.z + dz});
            if (it == grid.end()) continue;
            for (VertexId u : it->second) {
              if ((mesh.vertices[u] - p).squaredNorm() <= tol2) sets.unite(u, v);
            }
          }
        }
      }
      grid[key].push_back(v);
    }
  }

  std::vector<VertexId> rep(n);
  for (VertexId v = 0; v < n; ++v) rep[v] = sets.find(v);
  return rep;
}

FaceAdjacency weld_and_adjacency(const TriangleMesh& mesh, double weld_tolerance,
                                 std::span<const std::uint8_t> active) {
  const std::size_t nf = mesh.faces.size();
  const std::vector<VertexId> rep = weld_vertices(mesh, weld_tolerance);

  struct EdgeRef {
    std::uint64_t key;
    FaceId face;
    bool operator<(const EdgeRef& o) const { return key != o.key ? key < o.key : face < o.face; }
  };
  std::vector<EdgeRef> edges;
  edges.reserve(nf * 3);
  for (FaceId f = 0; f < nf; ++f) {
    if (!active.empty() && !active[f]) continue;
    for (int k = 0; k < 3; ++k) {
      VertexId a = rep[mesh.faces[f][k]];
      VertexId b = rep[mesh.faces[f][(k + 1) % 3]];
      if (a == b) continue;
      if (b < a) std::swap(a, b);
      edges.push_back({(std::uint64_t(a) << 32) | b, f});
    }
  }
  std::sort(edges.begin(), edges.end());

  std::vector<std::pair<FaceId, FaceId>> pairs;
  for (std::size_t i = 0; i < edges.size();) {
    std::size_t j = i;
    while (j < edges.size() && edges[j].key == edges[i].key) ++j;
    for (std::size_t p = i; p < j; ++p) {
      for (std::size_t q = p + 1; q < j; ++q) {
        if (edges[p].face == edges[q].face) continue;
        pairs.emplace_back(edges[p].face, edges[q].face);
        pairs.emplace_back(edges[q].face, edges[p].face);
      }
    }
    i = j;
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  std::vector<std::uint32_t> offsets(nf + 1, 0);
  for (const auto& [a, b] : pairs) ++offsets[a + 1];
  for (std::size_t f = 0; f < nf; ++f) offsets[f + 1] += offsets[f];
  std::vector<FaceId> neighbors(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) neighbors[i] = pairs[i].second;
  return FaceAdjacency(std::move(offsets), std::move(neighbors));
}

std::optional<double> vertical_hit(const Vec3& a, const Vec3& b, const Vec3& c, double x,
                                   double y) {
  const double det = (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
  if (std::abs(det) <= 1e-15) return std::nullopt;
  const double w0 = (b.x() - x) * (c.y() - y) - (b.y() - y) * (c.x() - x);
  const double w1 = (c.x() - x) * (a.y() - y) - (c.y() - y) * (a.x() - x);
  const double w2 = (a.x() - x) * (b.y() - y) - (a.y() - y) * (b.x() - x);
  if (det > 0) {
    if (w0 < 0 || w1 < 0 || w2 < 0) return std::nullopt;
  } else {
    if (w0 > 0 || w1 > 0 || w2 > 0) return std::nullopt;
  }
  const double sum = w0 + w1 + w2;
  return (w0 * a.z() + w1 * b.z() + w2 * c.z()) / sum;
}

SpatialIndexXY::SpatialIndexXY(const TriangleMesh& mesh, double cell_size)
    : cell_size_(cell_size) {
  std::vector<FaceId> all(mesh.faces.size());
  std::iota(all.begin(), all.end(), FaceId{0});
  build(mesh, all);
}

SpatialIndexXY::SpatialIndexXY(const TriangleMesh& mesh, double cell_size,
                               std::span<const FaceId> faces)
    : cell_size_(cell_size) {
  build(mesh, faces);
}

int SpatialIndexXY::col_of(double x) const {
  return static_cast<int>(std::floor((x - origin_.x()) / cell_size_));
}

int SpatialIndexXY::row_of(double y) const {
  return static_cast<int>(std::floor((y - origin_.y()) / cell_size_));
}

void SpatialIndexXY::build(const TriangleMesh& mesh, std::span<const FaceId> faces) {
  if (!(cell_size_ > 0)) throw Error("spatial index cell size must be positive");
  std::vector<FaceId> sorted(faces.begin(), faces.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  face_count_ = sorted.size();
  if (sorted.empty()) {
    offsets_.assign(1, 0);
    return;
  }

  Vec2 lo = Vec2::Constant(INFINITY), hi = Vec2::Constant(-INFINITY);
  z_max_ = -INFINITY;
  for (FaceId f : sorted) {
    for (int k = 0; k < 3; ++k) {
      const Vec3& p = mesh.corner(f, k);
      lo = lo.cwiseMin(p.head<2>());
      hi = hi.cwiseMax(p.head<2>());
      z_max_ = std::max(z_max_, p.z());
    }
  }
  origin_ = lo;
  cols_ = col_of(hi.x()) + 1;
  rows_ = row_of(hi.y()) + 1;

  struct Span {
    int c0, c1, r0, r1;
  };
  std::vector<Span> spans(sorted.size());
  offsets_.assign(std::size_t(cols_) * rows_ + 1, 0);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    FaceId f = sorted[i];
    const Vec3 &a = mesh.corner(f, 0), &b = mesh.corner(f, 1), &c = mesh.corner(f, 2);
    Span s{col_of(std::min({a.x(), b.x(), c.x()})), col_of(std::max({a.x(), b.x(), c.x()})),
           row_of(std::min({a.y(), b.y(), c.y()})), row_of(std::max({a.y(), b.y(), c.y()}))};
    spans[i] = s;
    for (int r = s.r0; r <= s.r1; ++r) {
      for (int cc = s.c0; cc <= s.c1; ++cc) ++offsets_[std::size_t(r) * cols_ + cc + 1];
    }
  }
  for (std::size_t k = 1; k < offsets_.size(); ++k) offsets_[k] += offsets_[k - 1];
  items_.resize(offsets_.back());
  std::vector<std::uint32_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const Span& s = spans[i];
    for (int r = s.r0; r <= s.r1; ++r) {
      for (int cc = s.c0; cc <= s.c1; ++cc) items_[cursor[std::size_t(r) * cols_ + cc]++] = sorted[i];
    }
  }
}

std::span<const FaceId> SpatialIndexXY::cell(int col, int row) const {
  if (col < 0 || row < 0 || col >= cols_ || row >= rows_) return {};
  std::size_t k = std::size_t(row) * cols_ + col;
  return {items_.data() + offsets_[k], items_.data() + offsets_[k + 1]};
}

std::span<const FaceId> SpatialIndexXY::candidates(double x, double y) const {
  if (face_count_ == 0) return {};
  return cell(col_of(x), row_of(y));
}

std::optional<RayHit> raycast_down(const SpatialIndexXY& index, const TriangleMesh& mesh,
                                   double x, double y, double z_start,
                                   std::span<const std::uint8_t> accept) {
  std::optional<RayHit> best;
  for (FaceId f : index.candidates(x, y)) {
    if (!accept.empty() && !accept[f]) continue;
    auto z = vertical_hit(mesh.corner(f, 0), mesh.corner(f, 1), mesh.corner(f, 2), x, y);
    if (!z || !(*z < z_start)) continue;
    if (!best || *z > best->z || (*z == best->z && f < best->face)) best = RayHit{f, *z};
  }
  return best;
}

}  // namespace wsa
