#include "wsa/walkspace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <unordered_map>

#include "wsa/error.hpp"
#include "wsa/obj_io.hpp"

namespace wsa {

void ClearanceParams::validate() const {
  if (!(sample_pitch > 0)) throw ConfigError("sample_pitch must be positive");
  if (!(red_radius > 0 && red_radius < safe_radius)) {
    throw ConfigError("radii need 0 < red_radius < safe_radius");
  }
}

std::string_view color_name(CellColor c) {
  switch (c) {
    case CellColor::Off: return "off";
    case CellColor::Green: return "green";
    case CellColor::Yellow: return "yellow";
    case CellColor::Red: return "red";
  }
  return "off";
}

std::optional<CellColor> parse_color(std::string_view name) {
  for (CellColor c : {CellColor::Off, CellColor::Green, CellColor::Yellow, CellColor::Red}) {
    if (color_name(c) == name) return c;
  }
  return std::nullopt;
}

std::optional<GridCell> GridFrame::locate(const Vec2& p) const {
  GridCell c{int(std::floor((p.x() - origin.x()) / pitch)), int(std::floor((p.y() - origin.y()) / pitch))};
  if (!contains(c)) return std::nullopt;
  return c;
}

GridFrame GridFrame::covering(const Vec2& lo, const Vec2& hi, double pitch) {
  if (!(pitch > 0)) throw ConfigError("sample pitch must be positive");
  GridFrame f;
  f.origin = lo;
  f.pitch = pitch;
  f.cols = std::max(1, int(std::ceil((hi.x() - lo.x()) / pitch - 1e-9)));
  f.rows = std::max(1, int(std::ceil((hi.y() - lo.y()) / pitch - 1e-9)));
  return f;
}

std::size_t ClearanceGrid::count(CellColor c) const {
  return std::size_t(std::count(colors.begin(), colors.end(), c));
}

CellColor color_for(bool on_floor, double clearance, const ClearanceParams& params) {
  constexpr double kSlack = 1e-12;
  if (!on_floor) return CellColor::Off;
  if (clearance >= params.safe_radius - kSlack) return CellColor::Green;
  if (clearance <= params.red_radius + kSlack) return CellColor::Red;
  return CellColor::Yellow;
}

bool point_in_triangle_xy(const Vec3& a, const Vec3& b, const Vec3& c, const Vec2& p) {
  constexpr double kEdgeSlack = 1e-9;  // meters
  const double det = (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
  if (std::abs(det) <= 1e-15) return false;
  const double sign = det > 0 ? 1.0 : -1.0;
  auto side = [&](const Vec3& u, const Vec3& v) {
    const double ex = v.x() - u.x(), ey = v.y() - u.y();
    const double len = std::hypot(ex, ey);
    const double cross = ex * (p.y() - u.y()) - ey * (p.x() - u.x());
    return sign * cross >= -kEdgeSlack * len;
  };
  return side(a, b) && side(b, c) && side(c, a);
}

OccupancyRaster rasterize_floor(const TriangleMesh& mesh, const FaceLabelMap& labels,
                                const ClearanceParams& params) {
  BoundsXY b = bounds_xy(mesh);
  return rasterize_floor(mesh, labels, GridFrame::covering(b.min, b.max, params.sample_pitch));
}

OccupancyRaster rasterize_floor(const TriangleMesh& mesh, const FaceLabelMap& labels,
                                const GridFrame& frame) {
  OccupancyRaster raster{frame, std::vector<std::uint8_t>(frame.size(), 0)};
  const double p = frame.pitch;
  for (FaceId f = 0; f < mesh.faces.size(); ++f) {
    if (labels[f] != Label::ClearFloor) continue;
    const Vec3 &a = mesh.corner(f, 0), &b = mesh.corner(f, 1), &c = mesh.corner(f, 2);
    const double x0 = std::min({a.x(), b.x(), c.x()}), x1 = std::max({a.x(), b.x(), c.x()});
    const double y0 = std::min({a.y(), b.y(), c.y()}), y1 = std::max({a.y(), b.y(), c.y()});
    const int i0 = std::max(0, int(std::ceil((x0 - frame.origin.x()) / p - 0.5 - 1e-7)));
    const int i1 = std::min(frame.cols - 1, int(std::floor((x1 - frame.origin.x()) / p - 0.5 + 1e-7)));
    const int j0 = std::max(0, int(std::ceil((y0 - frame.origin.y()) / p - 0.5 - 1e-7)));
    const int j1 = std::min(frame.rows - 1, int(std::floor((y1 - frame.origin.y()) / p - 0.5 + 1e-7)));
    for (int j = j0; j <= j1; ++j) {
      for (int i = i0; i <= i1; ++i) {
        const std::size_t k = frame.index({i, j});
        if (raster.on_floor[k]) continue;
        if (point_in_triangle_xy(a, b, c, frame.center({i, j}))) raster.on_floor[k] = 1;
      }
    }
  }
  return raster;
}

namespace {

constexpr double kFar = 1e20;

// Squared 1-D distance transform of a sampled function (Felzenszwalb and
// Huttenlocher lower envelope of parabolas).
void distance_transform_1d(const std::vector<double>& f, std::vector<double>& d,
                           std::vector<int>& v, std::vector<double>& z) {
  const int n = int(f.size());
  int k = 0;
  v[0] = 0;
  z[0] = -INFINITY;
  z[1] = INFINITY;
  for (int q = 1; q < n; ++q) {
    auto intersect = [&](int r) {
      return ((f[q] + double(q) * q) - (f[r] + double(r) * r)) / (2.0 * q - 2.0 * r);
    };
    double s = intersect(v[k]);
    while (s <= z[k]) {
      --k;
      s = intersect(v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = INFINITY;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = double(q - v[k]);
    d[q] = dq * dq + f[v[k]];
  }
}

}  // namespace

ClearanceGrid clearance_map(const OccupancyRaster& raster, const ClearanceParams& params) {
  const GridFrame& frame = raster.frame;
  ClearanceGrid grid{frame, params, std::vector<double>(frame.size(), 0.0),
                     std::vector<CellColor>(frame.size(), CellColor::Off)};

  // Distances are measured on a half-pitch lattice over the frame padded by one
  // off cell per side. Padded cell (pi, pj) spans lattice nodes [2pi, 2pi+2] x [2pj, 2pj+2];
  // the closest point of an off square to a lattice-aligned cell center is
  // always one of its corners or edge midpoints, so those nodes are the sites.
  const int pw = frame.cols + 2, ph = frame.rows + 2;
  const int lw = 2 * pw + 1, lh = 2 * ph + 1;
  std::vector<double> field(std::size_t(lw) * lh, kFar);
  auto is_off = [&](int pi, int pj) {
    const int i = pi - 1, j = pj - 1;
    if (i < 0 || j < 0 || i >= frame.cols || j >= frame.rows) return true;
    return raster.on_floor[frame.index({i, j})] == 0;
  };
  for (int pj = 0; pj < ph; ++pj) {
    for (int pi = 0; pi < pw; ++pi) {
      if (!is_off(pi, pj)) continue;
      for (int b = 0; b <= 2; ++b) {
        for (int a = 0; a <= 2; ++a) {
          if (a == 1 && b == 1) continue;
          field[std::size_t(2 * pj + b) * lw + (2 * pi + a)] = 0.0;
        }
      }
    }
  }

  const int longest = std::max(lw, lh);
  std::vector<double> f, d(longest);
  std::vector<int> v(longest);
  std::vector<double> z(longest + 1);
  f.reserve(longest);
  for (int x = 0; x < lw; ++x) {
    f.assign(lh, 0);
    for (int y = 0; y < lh; ++y) f[y] = field[std::size_t(y) * lw + x];
    d.resize(lh);
    distance_transform_1d(f, d, v, z);
    for (int y = 0; y < lh; ++y) field[std::size_t(y) * lw + x] = d[y];
  }
  for (int y = 0; y < lh; ++y) {
    f.assign(field.begin() + std::ptrdiff_t(y) * lw, field.begin() + std::ptrdiff_t(y + 1) * lw);
    d.resize(lw);
    distance_transform_1d(f, d, v, z);
    std::copy(d.begin(), d.end(), field.begin() + std::ptrdiff_t(y) * lw);
  }

  const double half = frame.pitch / 2.0;
  for (int j = 0; j < frame.rows; ++j) {
    for (int i = 0; i < frame.cols; ++i) {
      const std::size_t k = frame.index({i, j});
      if (!raster.on_floor[k]) continue;
      const double d2 = field[std::size_t(2 * (j + 1) + 1) * lw + (2 * (i + 1) + 1)];
      const double dist = std::sqrt(d2) * half;
      grid.clearance[k] = std::min(dist, params.safe_radius);
      grid.colors[k] = color_for(true, grid.clearance[k], params);
    }
  }
  return grid;
}

std::vector<Polyline> compliant_edges(const ClearanceGrid& grid) {
  const GridFrame& fr = grid.frame;
  auto green = [&](int i, int j) {
    if (i < 0 || j < 0 || i >= fr.cols || j >= fr.rows) return false;
    return grid.colors[fr.index({i, j})] == CellColor::Green;
  };

  // Points live on a half-pitch integer lattice: the center of cell (i, j) is
  // (2i+1, 2j+1), so the midpoint between two neighboring centers is integral.
  struct Pt {
    int x, y;
    bool operator==(const Pt&) const = default;
  };
  struct Segment {
    Pt from, to;
  };
  std::vector<Segment> segments;

  enum Mid { B, R, T, L };
  // Oriented so the green side is on the left; saddles keep diagonal cells apart.
  static const std::vector<std::pair<Mid, Mid>> kCases[16] = {
      {},                {{B, L}},          {{R, B}},           {{R, L}},
      {{T, R}},          {{B, L}, {T, R}},  {{T, B}},           {{T, L}},
      {{L, T}},          {{B, T}},          {{R, B}, {L, T}},   {{R, T}},
      {{L, R}},          {{B, R}},          {{L, B}},           {}};

  for (int j = -1; j < fr.rows; ++j) {
    for (int i = -1; i < fr.cols; ++i) {
      const int code = (green(i, j) ? 1 : 0) | (green(i + 1, j) ? 2 : 0) |
                       (green(i + 1, j + 1) ? 4 : 0) | (green(i, j + 1) ? 8 : 0);
      if (code == 0 || code == 15) continue;
      const int cx = 2 * i + 1, cy = 2 * j + 1;  // bottom-left center of this square
      auto mid = [&](Mid m) -> Pt {
        switch (m) {
          case B: return {cx + 1, cy};
          case R: return {cx + 2, cy + 1};
          case T: return {cx + 1, cy + 2};
          case L: return {cx, cy + 1};
        }
        return {cx, cy};
      };
      for (const auto& [a, b] : kCases[code]) segments.push_back({mid(a), mid(b)});
    }
  }

  auto key = [](Pt p) { return (std::uint64_t(std::uint32_t(p.x)) << 32) | std::uint32_t(p.y); };
  std::unordered_map<std::uint64_t, std::size_t> starting_at;
  starting_at.reserve(segments.size());
  for (std::size_t s = 0; s < segments.size(); ++s) starting_at.emplace(key(segments[s].from), s);

  std::vector<char> used(segments.size(), 0);
  std::vector<Polyline> loops;
  for (std::size_t s0 = 0; s0 < segments.size(); ++s0) {
    if (used[s0]) continue;
    std::vector<Pt> pts;
    std::size_t s = s0;
    while (!used[s]) {
      used[s] = 1;
      pts.push_back(segments[s].from);
      auto it = starting_at.find(key(segments[s].to));
      if (it == starting_at.end()) break;
      s = it->second;
    }
    // Drop vertices that sit on a straight run.
    std::vector<Pt> simplified;
    const std::size_t n = pts.size();
    for (std::size_t k = 0; k < n; ++k) {
      const Pt& prev = pts[(k + n - 1) % n];
      const Pt& cur = pts[k];
      const Pt& next = pts[(k + 1) % n];
      const long cross = long(cur.x - prev.x) * (next.y - cur.y) - long(cur.y - prev.y) * (next.x - cur.x);
      if (cross != 0) simplified.push_back(cur);
    }
    Polyline loop;
    loop.reserve(simplified.size());
    for (const Pt& p : simplified) loop.push_back(fr.origin + Vec2(p.x, p.y) * (fr.pitch / 2.0));
    loops.push_back(std::move(loop));
  }
  return loops;
}

RouteResult check_route(const ClearanceGrid& grid, const Vec2& start, const Vec2& goal) {
  const GridFrame& fr = grid.frame;
  auto endpoint = [&](const Vec2& p, const char* which) {
    auto c = fr.locate(p);
    if (!c || !grid.on_floor(fr.index(*c))) {
      throw InvalidEndpointError(std::string(which) + " point is not on the floor");
    }
    return *c;
  };
  const GridCell s = endpoint(start, "start");
  const GridCell g = endpoint(goal, "goal");

  RouteResult result;
  const std::size_t si = fr.index(s), gi = fr.index(g);
  if (grid.colors[si] != CellColor::Green || grid.colors[gi] != CellColor::Green) return result;

  auto heuristic = [&](GridCell c) { return std::hypot(double(c.col - g.col), double(c.row - g.row)); };
  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> dist(fr.size(), kNone);
  std::vector<std::uint32_t> parent(fr.size(), kNone);
  std::vector<char> closed(fr.size(), 0);

  // (f, g, index); ties go to the deeper node, then the lower index.
  using Entry = std::tuple<double, std::int64_t, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  dist[si] = 0;
  open.emplace(heuristic(s), 0, si);
  constexpr int kDx[4] = {1, -1, 0, 0};
  constexpr int kDy[4] = {0, 0, 1, -1};
  while (!open.empty()) {
    auto [fscore, neg_g, k] = open.top();
    open.pop();
    if (closed[k]) continue;
    closed[k] = 1;
    if (k == gi) break;
    const GridCell c = fr.cell(k);
    for (int n = 0; n < 4; ++n) {
      const GridCell nc{c.col + kDx[n], c.row + kDy[n]};
      if (!fr.contains(nc)) continue;
      const std::size_t nk = fr.index(nc);
      if (closed[nk] || grid.colors[nk] != CellColor::Green) continue;
      const std::uint32_t nd = dist[k] + 1;
      if (nd < dist[nk]) {
        dist[nk] = nd;
        parent[nk] = std::uint32_t(k);
        open.emplace(nd + heuristic(nc), -std::int64_t(nd), nk);
      }
    }
  }
  if (dist[gi] == kNone) return result;

  result.exists = true;
  for (std::size_t k = gi;; k = parent[k]) {
    result.path.push_back(fr.cell(k));
    if (k == si) break;
  }
  std::reverse(result.path.begin(), result.path.end());
  result.length = double(result.path.size() - 1) * fr.pitch;
  result.limiting_clearance = INFINITY;
  for (const GridCell& c : result.path) {
    result.limiting_clearance = std::min(result.limiting_clearance, grid.clearance[fr.index(c)]);
  }
  return result;
}

void write_grid_csv(const ClearanceGrid& grid, std::ostream& out) {
  std::string buf = "x,y,clearance,color\n";
  for (std::size_t k = 0; k < grid.frame.size(); ++k) {
    const Vec2 c = grid.frame.center(grid.frame.cell(k));
    buf += format_fixed6(c.x());
    buf += ',';
    buf += format_fixed6(c.y());
    buf += ',';
    buf += format_fixed6(grid.clearance[k]);
    buf += ',';
    buf += color_name(grid.colors[k]);
    buf += '\n';
  }
  out.write(buf.data(), std::streamsize(buf.size()));
}

ClearanceGrid read_grid_csv(std::istream& in, const GridFrame& frame, const ClearanceParams& params) {
  ClearanceGrid grid{frame, params, std::vector<double>(frame.size(), 0.0),
                     std::vector<CellColor>(frame.size(), CellColor::Off)};
  std::string line;
  std::size_t line_no = 0;
  std::vector<char> seen(frame.size(), 0);
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line_no == 1) continue;
    double vals[3];
    std::size_t pos = 0;
    for (double& v : vals) {
      std::size_t comma = line.find(',', pos);
      if (comma == std::string::npos) throw ParseError(line_no, "expected x,y,clearance,color");
      auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + comma, v);
      if (ec != std::errc() || ptr != line.data() + comma) throw ParseError(line_no, "bad number");
      pos = comma + 1;
    }
    auto color = parse_color(std::string_view(line).substr(pos));
    if (!color) throw ParseError(line_no, "bad color");
    auto cell = frame.locate({vals[0], vals[1]});
    if (!cell) throw ParseError(line_no, "cell outside the grid frame");
    const std::size_t k = frame.index(*cell);
    grid.clearance[k] = vals[2];
    grid.colors[k] = *color;
    seen[k] = 1;
  }
  if (std::count(seen.begin(), seen.end(), 0) != 0) throw Error("grid CSV does not cover every cell");
  return grid;
}

}  // namespace wsa
