#pragma once

// Scene builders and brute-force oracles shared by the tests. The oracles
// deliberately avoid the library's acceleration structures.

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "wsa/geometry.hpp"
#include "wsa/mesh.hpp"
#include "wsa/scenegen.hpp"
#include "wsa/walkspace.hpp"

namespace wsa::test {

/// Axis-aligned grid of n x m quads at height z, two triangles each, wound upward.
inline void add_grid(TriangleMesh& mesh, double x0, double y0, double x1, double y1, double z, int nx, int ny) {
  const auto base = VertexId(mesh.vertices.size());
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      mesh.vertices.emplace_back(x0 + (x1 - x0) * i / nx, y0 + (y1 - y0) * j / ny, z);
    }
  }
  auto id = [&](int i, int j) { return VertexId(base + j * (nx + 1) + i); };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      mesh.faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      mesh.faces.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
}

inline TriangleMesh flat_floor(double w, double d, double z = 0.0, double cell = 0.25) {
  TriangleMesh m;
  add_grid(m, 0, 0, w, d, z, std::max(1, int(std::lround(w / cell))), std::max(1, int(std::lround(d / cell))));
  return m;
}

inline TriangleMesh single_triangle(const Vec3& a, const Vec3& b, const Vec3& c) {
  TriangleMesh m;
  m.vertices = {a, b, c};
  m.faces = {{0, 1, 2}};
  return m;
}

/// Highest hit below z_start over every face, ties to the lowest id.
inline std::optional<RayHit> brute_raycast(const TriangleMesh& mesh, double x, double y, double z_start) {
  std::optional<RayHit> best;
  for (FaceId f = 0; f < mesh.faces.size(); ++f) {
    auto z = vertical_hit(mesh.corner(f, 0), mesh.corner(f, 1), mesh.corner(f, 2), x, y);
    if (!z || !(*z < z_start)) continue;
    if (!best || *z > best->z) best = RayHit{f, *z};
  }
  return best;
}

inline TriangleMesh random_soup(std::mt19937_64& rng, int faces, double extent) {
  std::uniform_real_distribution<double> xy(0, extent), zz(0, 3), size(0.05, 1.5);
  TriangleMesh m;
  for (int f = 0; f < faces; ++f) {
    const Vec3 c(xy(rng), xy(rng), zz(rng));
    const double s = size(rng);
    std::uniform_real_distribution<double> off(-s, s);
    const auto base = VertexId(m.vertices.size());
    for (int k = 0; k < 3; ++k) m.vertices.push_back(c + Vec3(off(rng), off(rng), 0.3 * off(rng)));
    m.faces.push_back({base, base + 1, base + 2});
  }
  return m;
}

/// Random occupancy: an on-floor field with rectangular holes and a few blobs.
inline OccupancyRaster random_raster(std::mt19937_64& rng, int cols, int rows, double pitch = 0.15) {
  OccupancyRaster r;
  r.frame.origin = Vec2(-1.3, 0.7);
  r.frame.pitch = pitch;
  r.frame.cols = cols;
  r.frame.rows = rows;
  r.on_floor.assign(r.frame.size(), 1);
  std::uniform_int_distribution<int> ci(0, cols - 1), rj(0, rows - 1), span(1, 8), count(3, 14);
  const int holes = count(rng);
  for (int h = 0; h < holes; ++h) {
    const int i0 = ci(rng), j0 = rj(rng), w = span(rng), d = span(rng);
    for (int j = j0; j < std::min(rows, j0 + d); ++j) {
      for (int i = i0; i < std::min(cols, i0 + w); ++i) r.on_floor[r.frame.index({i, j})] = 0;
    }
  }
  std::bernoulli_distribution speck(0.01);
  for (auto& v : r.on_floor) {
    if (speck(rng)) v = 0;
  }
  return r;
}

/// Distance from p to the closed square of cell (i, j); cells may lie outside the frame.
inline double distance_to_cell(const GridFrame& f, int i, int j, const Vec2& p) {
  const double x0 = f.origin.x() + i * f.pitch, y0 = f.origin.y() + j * f.pitch;
  const double dx = std::max({x0 - p.x(), 0.0, p.x() - (x0 + f.pitch)});
  const double dy = std::max({y0 - p.y(), 0.0, p.y() - (y0 + f.pitch)});
  return std::hypot(dx, dy);
}

/// O(n^2) disc oracle: a cell's clearance is its distance to the nearest off
/// square, including the ring of off squares just outside the frame.
inline std::vector<CellColor> disc_oracle_colors(const OccupancyRaster& r, const ClearanceParams& params) {
  const GridFrame& f = r.frame;
  std::vector<std::pair<int, int>> off;
  for (int j = -1; j <= f.rows; ++j) {
    for (int i = -1; i <= f.cols; ++i) {
      const bool outside = i < 0 || j < 0 || i >= f.cols || j >= f.rows;
      if (outside || !r.on_floor[f.index({i, j})]) off.emplace_back(i, j);
    }
  }
  std::vector<CellColor> colors(f.size(), CellColor::Off);
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (!r.on_floor[k]) continue;
    const Vec2 c = f.center(f.cell(k));
    double best = std::numeric_limits<double>::infinity();
    for (auto [i, j] : off) best = std::min(best, distance_to_cell(f, i, j, c));
    const bool fits = best >= params.safe_radius - 1e-12;
    const bool tight = best <= params.red_radius + 1e-12;
    colors[k] = fits ? CellColor::Green : tight ? CellColor::Red : CellColor::Yellow;
  }
  return colors;
}

/// Breadth-first shortest path length (in steps) over green cells, or -1.
inline int bfs_steps(const ClearanceGrid& g, GridCell a, GridCell b) {
  const GridFrame& f = g.frame;
  if (g.colors[f.index(a)] != CellColor::Green || g.colors[f.index(b)] != CellColor::Green) return -1;
  std::vector<int> dist(f.size(), -1);
  std::deque<GridCell> q{a};
  dist[f.index(a)] = 0;
  while (!q.empty()) {
    GridCell c = q.front();
    q.pop_front();
    if (c == b) return dist[f.index(c)];
    for (auto [di, dj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
      GridCell n{c.col + di, c.row + dj};
      if (!f.contains(n) || dist[f.index(n)] >= 0 || g.colors[f.index(n)] != CellColor::Green) continue;
      dist[f.index(n)] = dist[f.index(c)] + 1;
      q.push_back(n);
    }
  }
  return -1;
}

/// Green connected components by recursive-free flood fill; -1 for non-green cells.
inline std::vector<int> green_components(const ClearanceGrid& g) {
  const GridFrame& f = g.frame;
  std::vector<int> comp(f.size(), -1);
  int next = 0;
  for (std::size_t s = 0; s < f.size(); ++s) {
    if (comp[s] >= 0 || g.colors[s] != CellColor::Green) continue;
    std::vector<std::size_t> stack{s};
    comp[s] = next;
    while (!stack.empty()) {
      const GridCell c = f.cell(stack.back());
      stack.pop_back();
      for (auto [di, dj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
        GridCell n{c.col + di, c.row + dj};
        if (!f.contains(n)) continue;
        const std::size_t k = f.index(n);
        if (comp[k] >= 0 || g.colors[k] != CellColor::Green) continue;
        comp[k] = next;
        stack.push_back(k);
      }
    }
    ++next;
  }
  return comp;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Snaps v to the nearest multiple of step.
inline double snap(double v, double step) { return std::round(v / step) * step; }

/// Room with 2-4 furniture boxes, one table (with an optional item) and 2-3
/// clutter piles, no noise. With `aligned`, every footprint edge sits on the
/// 0.15 m clearance lattice of a room whose corner is at the origin.
inline SceneSpec random_room(std::mt19937_64& rng, bool aligned = true) {
  const double step = aligned ? 0.15 : 0.01;
  SceneSpec s;
  const double w = snap(uniform(rng, 5.0, 7.5), 0.15), d = snap(uniform(rng, 4.0, 6.0), 0.15);
  s.room = {{0, 0}, {w, 0}, {w, d}, {0, d}};
  s.wall_height = 2.5;
  s.resolution = 0.3;
  s.noise = NoiseModel{0.0, 0.0, std::nullopt, {}};

  std::vector<Rect> placed;
  auto place = [&](double min_w, double max_w, double min_d, double max_d) -> std::optional<Rect> {
    for (int attempt = 0; attempt < 200; ++attempt) {
      const double rw = snap(uniform(rng, min_w, max_w), step), rd = snap(uniform(rng, min_d, max_d), step);
      const double x = snap(uniform(rng, 0.0, w - rw), step), y = snap(uniform(rng, 0.0, d - rd), step);
      Rect r{x, y, x + rw, y + rd};
      if (r.x1 > w || r.y1 > d || rw <= 0 || rd <= 0) continue;
      Rect grown{r.x0 - 0.3, r.y0 - 0.3, r.x1 + 0.3, r.y1 + 0.3};
      if (std::any_of(placed.begin(), placed.end(), [&](const Rect& o) { return grown.interiors_overlap(o); })) {
        continue;
      }
      placed.push_back(r);
      return r;
    }
    return std::nullopt;
  };

  std::uniform_int_distribution<int> n_furniture(2, 4), n_clutter(2, 3);
  const int nf = n_furniture(rng);
  for (int k = 0; k < nf; ++k) {
    if (auto r = place(0.45, 1.8, 0.45, 1.2)) s.furniture.push_back({*r, snap(uniform(rng, 0.4, 2.0), 0.01)});
  }
  if (auto r = place(0.9, 1.5, 0.6, 1.05)) {
    s.tables.push_back({*r, snap(uniform(rng, 0.6, 0.9), 0.01)});
    if (std::bernoulli_distribution(0.5)(rng)) {
      const double x = snap(r->x0 + 0.15, step), y = snap(r->y0 + 0.15, step);
      s.table_items.push_back({{x, y, x + 0.3, y + 0.3}, 0.12});
    }
  }
  const int nc = n_clutter(rng);
  for (int k = 0; k < nc; ++k) {
    // Peaks stay below the height cap, so every facet keeps the pile's tilt.
    if (auto r = place(0.3, 0.6, 0.3, 0.6)) {
      const double tilt = snap(uniform(rng, 15.0, 45.0), 1.0);
      const double half = 0.5 * std::min(r->width(), r->depth());
      const double peak = half * std::tan(tilt * 3.14159265358979323846 / 180.0);
      s.clutter.push_back({*r, std::min(kMaxClutterHeight, peak + 0.05), tilt});
    }
  }
  return s;
}

}  // namespace wsa::test
