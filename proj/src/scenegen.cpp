#include "wsa/scenegen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

#include "keyvalue.hpp"
#include "wsa/error.hpp"
#include "wsa/floor_extract.hpp"
#include "wsa/geometry.hpp"
#include "wsa/obj_io.hpp"
#include "wsa/waterfall.hpp"

namespace wsa {

double Rect::distance(const Vec2& p) const {
  const double dx = std::max({x0 - p.x(), 0.0, p.x() - x1});
  const double dy = std::max({y0 - p.y(), 0.0, p.y() - y1});
  return std::hypot(dx, dy);
}

bool point_in_polygon(const std::vector<Vec2>& polygon, const Vec2& p) {
  bool inside = false;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = polygon[i];
    const Vec2& b = polygon[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x) inside = !inside;
    }
  }
  return inside;
}

double distance_to_outline(const std::vector<Vec2>& polygon, const Vec2& p) {
  double best = INFINITY;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = polygon[i];
    const Vec2& b = polygon[(i + 1) % n];
    const Vec2 ab = b - a;
    const double len2 = ab.squaredNorm();
    const double t = len2 > 0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
    best = std::min(best, (a + t * ab - p).norm());
  }
  return best;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

bool axis_aligned(const Vec2& a, const Vec2& b) { return a.x() == b.x() || a.y() == b.y(); }

bool segments_touch(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  // Axis-aligned segments only: compare their closed bounding boxes.
  return std::max(std::min(a.x(), b.x()), std::min(c.x(), d.x())) <=
             std::min(std::max(a.x(), b.x()), std::max(c.x(), d.x())) &&
         std::max(std::min(a.y(), b.y()), std::min(c.y(), d.y())) <=
             std::min(std::max(a.y(), b.y()), std::max(c.y(), d.y()));
}

bool rect_inside_polygon(const std::vector<Vec2>& poly, const Rect& r) {
  if (!point_in_polygon(poly, r.center())) return false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    if (a.y() == b.y()) {
      if (a.y() > r.y0 && a.y() < r.y1 && std::max(std::min(a.x(), b.x()), r.x0) < std::min(std::max(a.x(), b.x()), r.x1)) return false;
    } else {
      if (a.x() > r.x0 && a.x() < r.x1 && std::max(std::min(a.y(), b.y()), r.y0) < std::min(std::max(a.y(), b.y()), r.y1)) return false;
    }
  }
  return true;
}

std::string rect_text(const Rect& r) {
  std::ostringstream ss;
  ss << "[" << r.x0 << ", " << r.y0 << "]-[" << r.x1 << ", " << r.y1 << "]";
  return ss.str();
}

}  // namespace

std::vector<std::string> SceneSpec::violations() const {
  std::vector<std::string> v;
  const std::size_t n = room.size();
  bool room_ok = n >= 4;
  if (n < 4) v.push_back("room polygon needs at least 4 vertices");
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = room[i];
    const Vec2& b = room[(i + 1) % n];
    if (!a.allFinite()) {
      v.push_back("room vertex " + std::to_string(i) + " is not finite");
      room_ok = false;
    } else if (a == b) {
      v.push_back("room edge " + std::to_string(i) + " has zero length");
      room_ok = false;
    } else if (!axis_aligned(a, b)) {
      v.push_back("room edge " + std::to_string(i) + " is not axis-aligned");
      room_ok = false;
    }
  }
  if (room_ok) {
    for (std::size_t i = 0; i < n && room_ok; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (j == i + 1 || (i == 0 && j == n - 1)) continue;
        if (segments_touch(room[i], room[(i + 1) % n], room[j], room[(j + 1) % n])) {
          v.push_back("room polygon intersects itself (edges " + std::to_string(i) + " and " +
                      std::to_string(j) + ")");
          room_ok = false;
          break;
        }
      }
    }
  }
  if (!(wall_height > 0)) v.push_back("wall_height must be positive");
  if (!(resolution > 0)) v.push_back("resolution must be positive");

  auto check_rect = [&](const Rect& r, const std::string& what) {
    if (!(r.x0 < r.x1 && r.y0 < r.y1)) {
      v.push_back(what + " footprint " + rect_text(r) + " is empty");
      return false;
    }
    if (room_ok && !rect_inside_polygon(room, r)) {
      v.push_back(what + " footprint " + rect_text(r) + " is not inside the room");
      return false;
    }
    return true;
  };

  std::vector<std::pair<Rect, std::string>> standing;
  for (std::size_t i = 0; i < furniture.size(); ++i) {
    const auto& f = furniture[i];
    std::string what = "furniture " + std::to_string(i);
    if (check_rect(f.footprint, what)) standing.emplace_back(f.footprint, what);
    if (!(f.height > 0)) v.push_back(what + " height must be positive");
    if (f.height > wall_height) v.push_back(what + " is taller than the walls");
  }
  for (std::size_t i = 0; i < clutter.size(); ++i) {
    const auto& c = clutter[i];
    std::string what = "clutter " + std::to_string(i);
    if (check_rect(c.footprint, what)) standing.emplace_back(c.footprint, what);
    if (!(c.height > 0 && c.height <= kMaxClutterHeight)) {
      v.push_back(what + " height must lie in (0, 0.35] m");
    }
    if (!(c.tilt_deg > 0 && c.tilt_deg < 90)) v.push_back(what + " tilt must lie in (0, 90) degrees");
  }
  for (std::size_t i = 0; i < tables.size(); ++i) {
    const auto& t = tables[i];
    std::string what = "table " + std::to_string(i);
    if (check_rect(t.footprint, what)) standing.emplace_back(t.footprint, what);
    if (!(t.top_height > kTableApron && t.top_height < wall_height)) {
      v.push_back(what + " top height must lie between the apron depth and the wall height");
    }
  }
  for (std::size_t a = 0; a < standing.size(); ++a) {
    for (std::size_t b = a + 1; b < standing.size(); ++b) {
      if (standing[a].first.interiors_overlap(standing[b].first)) {
        v.push_back(standing[a].second + " overlaps " + standing[b].second);
      }
    }
  }
  for (std::size_t i = 0; i < table_items.size(); ++i) {
    const auto& it = table_items[i];
    std::string what = "table item " + std::to_string(i);
    if (!(it.footprint.x0 < it.footprint.x1 && it.footprint.y0 < it.footprint.y1)) {
      v.push_back(what + " footprint is empty");
      continue;
    }
    const Table* host = nullptr;
    for (const auto& t : tables) {
      if (t.footprint.contains({it.footprint.x0, it.footprint.y0}) &&
          t.footprint.contains({it.footprint.x1, it.footprint.y1})) {
        host = &t;
      }
    }
    if (!host) v.push_back(what + " does not rest on a table");
    if (!(it.height > 0)) v.push_back(what + " height must be positive");
    if (host && host->top_height + it.height >= wall_height) v.push_back(what + " reaches the ceiling");
    for (std::size_t j = i + 1; j < table_items.size(); ++j) {
      if (it.footprint.interiors_overlap(table_items[j].footprint)) {
        v.push_back(what + " overlaps table item " + std::to_string(j));
      }
    }
  }

  const auto& nm = noise;
  if (!(nm.jitter_sigma >= 0)) v.push_back("jitter must be non-negative");
  auto prob_ok = [](double p) { return p >= 0 && p <= 1; };
  if (!prob_ok(nm.hole_probability)) v.push_back("hole_probability must lie in [0, 1]");
  if (nm.floor_hole_probability && !prob_ok(*nm.floor_hole_probability)) {
    v.push_back("floor_hole_probability must lie in [0, 1]");
  }
  for (const auto& r : nm.dark_dropouts) {
    if (!(r.x0 < r.x1 && r.y0 < r.y1)) v.push_back("dropout " + rect_text(r) + " is empty");
  }
  return v;
}

void SceneSpec::validate() const {
  auto v = violations();
  if (!v.empty()) throw SpecValidationError(std::move(v));
}

// ---------------------------------------------------------------------------
// Text format

SceneSpec parse_scene_spec(std::string_view text) {
  using detail::expect_count;
  using detail::number_at;
  SceneSpec spec;
  spec.room.clear();
  bool have_room = false;
  auto rect_at = [](const detail::KeyValueLine& kv) {
    return Rect{number_at(kv, 0), number_at(kv, 1), number_at(kv, 2), number_at(kv, 3)};
  };
  for (const auto& kv : detail::parse_key_values(text)) {
    if (kv.key == "room") {
      if (have_room) throw ParseError(kv.line, "room given twice");
      if (kv.values.size() % 2 != 0) throw ParseError(kv.line, "room needs x y pairs");
      for (std::size_t i = 0; i < kv.values.size(); i += 2) {
        spec.room.emplace_back(number_at(kv, i), number_at(kv, i + 1));
      }
      have_room = true;
    } else if (kv.key == "wall_height") {
      expect_count(kv, 1);
      spec.wall_height = number_at(kv, 0);
    } else if (kv.key == "resolution") {
      expect_count(kv, 1);
      spec.resolution = number_at(kv, 0);
    } else if (kv.key == "furniture") {
      expect_count(kv, 5);
      spec.furniture.push_back({rect_at(kv), number_at(kv, 4)});
    } else if (kv.key == "clutter") {
      expect_count(kv, 6);
      spec.clutter.push_back({rect_at(kv), number_at(kv, 4), number_at(kv, 5)});
    } else if (kv.key == "table") {
      expect_count(kv, 5);
      spec.tables.push_back({rect_at(kv), number_at(kv, 4)});
    } else if (kv.key == "table_item") {
      expect_count(kv, 5);
      spec.table_items.push_back({rect_at(kv), number_at(kv, 4)});
    } else if (kv.key == "jitter") {
      expect_count(kv, 1);
      spec.noise.jitter_sigma = number_at(kv, 0);
    } else if (kv.key == "hole_probability") {
      expect_count(kv, 1);
      spec.noise.hole_probability = number_at(kv, 0);
    } else if (kv.key == "floor_hole_probability") {
      expect_count(kv, 1);
      spec.noise.floor_hole_probability = number_at(kv, 0);
    } else if (kv.key == "dropout") {
      expect_count(kv, 4);
      spec.noise.dark_dropouts.push_back(rect_at(kv));
    } else {
      throw ParseError(kv.line, "unknown scene key '" + kv.key + "'");
    }
  }
  if (!have_room) throw SpecValidationError({"room polygon missing"});
  return spec;
}

std::string format_scene_spec(const SceneSpec& spec) {
  const auto num = [](double v) { return detail::Shortest{v}; };
  std::ostringstream out;
  auto rect = [&](const Rect& r) { out << num(r.x0) << ' ' << num(r.y0) << ' ' << num(r.x1) << ' ' << num(r.y1); };
  out << "room =";
  for (const auto& p : spec.room) out << ' ' << num(p.x()) << ' ' << num(p.y());
  out << "\nwall_height = " << num(spec.wall_height) << "\nresolution = " << num(spec.resolution)
      << '\n';
  for (const auto& f : spec.furniture) {
    out << "furniture = ";
    rect(f.footprint);
    out << ' ' << num(f.height) << '\n';
  }
  for (const auto& c : spec.clutter) {
    out << "clutter = ";
    rect(c.footprint);
    out << ' ' << num(c.height) << ' ' << num(c.tilt_deg) << '\n';
  }
  for (const auto& t : spec.tables) {
    out << "table = ";
    rect(t.footprint);
    out << ' ' << num(t.top_height) << '\n';
  }
  for (const auto& it : spec.table_items) {
    out << "table_item = ";
    rect(it.footprint);
    out << ' ' << num(it.height) << '\n';
  }
  out << "jitter = " << num(spec.noise.jitter_sigma) << '\n';
  out << "hole_probability = " << num(spec.noise.hole_probability) << '\n';
  if (spec.noise.floor_hole_probability) {
    out << "floor_hole_probability = " << num(*spec.noise.floor_hole_probability) << '\n';
  }
  for (const auto& r : spec.noise.dark_dropouts) {
    out << "dropout = ";
    rect(r);
    out << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Ground truth

double GroundTruth::clear_distance(const Vec2& p) const {
  if (room.empty() || !point_in_polygon(room, p)) return 0.0;
  double d = distance_to_outline(room, p);
  for (const auto& r : obstacles) {
    const double dr = r.distance(p);
    if (dr == 0.0) return 0.0;
    d = std::min(d, dr);
  }
  return d;
}

bool GroundTruth::green(const Vec2& p, double radius) const {
  const double d = clear_distance(p);
  return d > 0 && d >= radius - 1e-12;
}

std::string truth_to_json(const GroundTruth& truth) {
  nlohmann::json j;
  j["floor_z"] = truth.floor_z;
  auto& room = j["room"] = nlohmann::json::array();
  for (const auto& p : truth.room) room.push_back({p.x(), p.y()});
  auto& obstacles = j["obstacles"] = nlohmann::json::array();
  for (const auto& r : truth.obstacles) obstacles.push_back({r.x0, r.y0, r.x1, r.y1});
  auto& labels = j["labels"] = nlohmann::json::array();
  for (Label l : truth.labels) labels.push_back(label_name(l));
  return j.dump(1);
}

GroundTruth truth_from_json(std::string_view text) {
  GroundTruth t;
  try {
    auto j = nlohmann::json::parse(text);
    t.floor_z = j.at("floor_z").get<double>();
    for (const auto& p : j.at("room")) t.room.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    for (const auto& r : j.at("obstacles")) {
      t.obstacles.push_back({r.at(0).get<double>(), r.at(1).get<double>(), r.at(2).get<double>(),
                             r.at(3).get<double>()});
    }
    for (const auto& l : j.at("labels")) {
      auto label = parse_label(l.get<std::string>());
      if (!label) throw Error("unknown label '" + l.get<std::string>() + "' in ground truth");
      t.labels.push_back(*label);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed ground truth: ") + e.what());
  }
  return t;
}

// ---------------------------------------------------------------------------
// Generation

namespace {

constexpr double kSnap = 1e-9;

std::vector<double> refine_breakpoints(std::vector<double> pts, double resolution) {
  std::sort(pts.begin(), pts.end());
  std::vector<double> unique;
  for (double p : pts) {
    if (unique.empty() || p - unique.back() > kSnap) unique.push_back(p);
  }
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < unique.size(); ++i) {
    const double a = unique[i], b = unique[i + 1];
    const int steps = std::max(1, int(std::ceil((b - a) / resolution - 1e-9)));
    for (int s = 0; s < steps; ++s) out.push_back(s == 0 ? a : a + (b - a) * s / steps);
  }
  if (!unique.empty()) out.push_back(unique.back());
  return out;
}

std::vector<double> subdivide(double lo, double hi, double resolution) {
  const int steps = std::max(1, int(std::ceil((hi - lo) / resolution - 1e-9)));
  std::vector<double> out;
  for (int s = 0; s <= steps; ++s) out.push_back(s == steps ? hi : lo + (hi - lo) * s / steps);
  return out;
}

// Index of the breakpoint equal (within kSnap) to v.
std::size_t snap_index(const std::vector<double>& pts, double v) {
  auto it = std::lower_bound(pts.begin(), pts.end(), v - kSnap);
  if (it == pts.end() || std::abs(*it - v) > kSnap) throw Error("internal: breakpoint missing");
  return std::size_t(it - pts.begin());
}

class MeshBuilder {
 public:
  void tri(const Vec3& a, const Vec3& b, const Vec3& c, Label label) {
    if (is_degenerate(a, b, c)) return;
    mesh_.faces.push_back({vertex(a), vertex(b), vertex(c)});
    labels_.push_back(label);
  }

  void quad(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d, Label label) {
    tri(a, b, c, label);
    tri(a, c, d, label);
  }

  // Vertical strip over a polyline `chain` with rows at `zs`.
  void strip(const std::vector<Vec2>& chain, const std::vector<double>& zs, Label label) {
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      for (std::size_t l = 0; l + 1 < zs.size(); ++l) {
        quad({chain[i].x(), chain[i].y(), zs[l]}, {chain[i + 1].x(), chain[i + 1].y(), zs[l]},
             {chain[i + 1].x(), chain[i + 1].y(), zs[l + 1]}, {chain[i].x(), chain[i].y(), zs[l + 1]},
             label);
      }
    }
  }

  TriangleMesh& mesh() { return mesh_; }
  std::vector<Label>& labels() { return labels_; }

 private:
  struct Key {
    std::int64_t x, y, z;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::uint64_t h = std::uint64_t(k.x) * 0x9E3779B97F4A7C15ull;
      h ^= std::uint64_t(k.y) * 0xC2B2AE3D27D4EB4Full + (h << 6) + (h >> 2);
      h ^= std::uint64_t(k.z) * 0x165667B19E3779F9ull + (h << 6) + (h >> 2);
      return std::size_t(h);
    }
  };

  VertexId vertex(const Vec3& p) {
    Key key{std::llround(p.x() * 1e7), std::llround(p.y() * 1e7), std::llround(p.z() * 1e7)};
    auto [it, inserted] = pool_.try_emplace(key, VertexId(mesh_.vertices.size()));
    if (inserted) mesh_.vertices.push_back(p);
    return it->second;
  }

  TriangleMesh mesh_;
  std::vector<Label> labels_;
  std::unordered_map<Key, VertexId, KeyHash> pool_;
};

struct Lattice {
  std::vector<double> xs, ys;

  Rect snapped(const Rect& r) const {
    return {xs[snap_index(xs, r.x0)], ys[snap_index(ys, r.y0)], xs[snap_index(xs, r.x1)],
            ys[snap_index(ys, r.y1)]};
  }

  // Lattice points along an axis-aligned segment from a to b, in travel order.
  std::vector<Vec2> chain(const Vec2& a, const Vec2& b) const {
    std::vector<Vec2> out;
    if (a.y() == b.y()) {
      std::size_t i0 = snap_index(xs, a.x()), i1 = snap_index(xs, b.x());
      const double y = ys[snap_index(ys, a.y())];
      if (i0 <= i1) {
        for (std::size_t i = i0; i <= i1; ++i) out.emplace_back(xs[i], y);
      } else {
        for (std::size_t i = i0 + 1; i-- > i1;) out.emplace_back(xs[i], y);
      }
    } else {
      std::size_t j0 = snap_index(ys, a.y()), j1 = snap_index(ys, b.y());
      const double x = xs[snap_index(xs, a.x())];
      if (j0 <= j1) {
        for (std::size_t j = j0; j <= j1; ++j) out.emplace_back(x, ys[j]);
      } else {
        for (std::size_t j = j0 + 1; j-- > j1;) out.emplace_back(x, ys[j]);
      }
    }
    return out;
  }

  // Closed outline of a rectangle, counter-clockwise, as four chains.
  std::vector<std::vector<Vec2>> outline(const Rect& r) const {
    return {chain({r.x0, r.y0}, {r.x1, r.y0}), chain({r.x1, r.y0}, {r.x1, r.y1}),
            chain({r.x1, r.y1}, {r.x0, r.y1}), chain({r.x0, r.y1}, {r.x0, r.y0})};
  }
};

bool strictly_inside(const Rect& r, const Vec2& p) {
  return p.x() > r.x0 && p.x() < r.x1 && p.y() > r.y0 && p.y() < r.y1;
}

void emit_pile(MeshBuilder& out, const Lattice& lattice, const Rect& fp, const ClutterPile& pile) {
  const double tan_tilt = std::tan(pile.tilt_deg * std::numbers::pi / 180.0);
  const double half = 0.5 * std::min(fp.width(), fp.depth());
  const double peak = std::min(pile.height, half * tan_tilt);
  const double inset = std::min(peak / tan_tilt, half);
  const bool plateau = inset < half - 1e-9;

  const Vec3 sw{fp.x0 + inset, fp.y0 + inset, peak}, se{fp.x1 - inset, fp.y0 + inset, peak};
  const Vec3 ne{fp.x1 - inset, fp.y1 - inset, peak}, nw{fp.x0 + inset, fp.y1 - inset, peak};
  const auto sides = lattice.outline(fp);
  const std::array<std::pair<Vec3, Vec3>, 4> tops = {
      std::pair{sw, se}, std::pair{se, ne}, std::pair{ne, nw}, std::pair{nw, sw}};
  for (int s = 0; s < 4; ++s) {
    const auto& chain = sides[s];
    const Vec3& t0 = tops[s].first;
    const Vec3& t1 = tops[s].second;
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      out.tri(t0, {chain[i].x(), chain[i].y(), 0.0}, {chain[i + 1].x(), chain[i + 1].y(), 0.0},
              Label::Clutter);
    }
    if ((t1 - t0).norm() > 1e-9) {
      out.tri(t0, {chain.back().x(), chain.back().y(), 0.0}, t1, Label::Clutter);
    }
  }
  if (plateau) out.quad(sw, se, ne, nw, Label::Clutter);
}

}  // namespace

GeneratedScene generate_scene(const SceneSpec& spec, std::uint64_t seed) {
  spec.validate();
  const ExtractionParams extraction;
  const SurfaceParams surface;

  Lattice lattice;
  {
    std::vector<double> xs, ys;
    for (const auto& p : spec.room) {
      xs.push_back(p.x());
      ys.push_back(p.y());
    }
    auto add = [&](const Rect& r) {
      xs.insert(xs.end(), {r.x0, r.x1});
      ys.insert(ys.end(), {r.y0, r.y1});
    };
    for (const auto& f : spec.furniture) add(f.footprint);
    for (const auto& c : spec.clutter) add(c.footprint);
    for (const auto& t : spec.tables) add(t.footprint);
    for (const auto& it : spec.table_items) add(it.footprint);
    lattice.xs = refine_breakpoints(std::move(xs), spec.resolution);
    lattice.ys = refine_breakpoints(std::move(ys), spec.resolution);
  }

  std::vector<Vec2> room;
  for (const auto& p : spec.room) {
    room.emplace_back(lattice.xs[snap_index(lattice.xs, p.x())], lattice.ys[snap_index(lattice.ys, p.y())]);
  }
  std::vector<Rect> furniture, clutter, tables, items;
  for (const auto& f : spec.furniture) furniture.push_back(lattice.snapped(f.footprint));
  for (const auto& c : spec.clutter) clutter.push_back(lattice.snapped(c.footprint));
  for (const auto& t : spec.tables) tables.push_back(lattice.snapped(t.footprint));
  for (const auto& it : spec.table_items) items.push_back(lattice.snapped(it.footprint));

  auto table_of_item = [&](std::size_t i) -> std::size_t {
    for (std::size_t t = 0; t < tables.size(); ++t) {
      if (tables[t].contains({items[i].x0, items[i].y0}) && tables[t].contains({items[i].x1, items[i].y1})) return t;
    }
    return 0;
  };
  auto in_window = [&](double h) { return h >= surface.min_height && h <= surface.max_height; };

  MeshBuilder out;

  // Floor, ceiling and horizontal tops, one lattice cell at a time.
  for (std::size_t j = 0; j + 1 < lattice.ys.size(); ++j) {
    for (std::size_t i = 0; i + 1 < lattice.xs.size(); ++i) {
      const double x0 = lattice.xs[i], x1 = lattice.xs[i + 1];
      const double y0 = lattice.ys[j], y1 = lattice.ys[j + 1];
      const Vec2 c{0.5 * (x0 + x1), 0.5 * (y0 + y1)};
      if (!point_in_polygon(room, c)) continue;
      auto horizontal = [&](double z, Label label, bool up) {
        if (up) {
          out.quad({x0, y0, z}, {x1, y0, z}, {x1, y1, z}, {x0, y1, z}, label);
        } else {
          out.quad({x0, y0, z}, {x0, y1, z}, {x1, y1, z}, {x1, y0, z}, label);
        }
      };

      bool covered = false;
      for (std::size_t k = 0; k < furniture.size(); ++k) {
        if (!strictly_inside(furniture[k], c)) continue;
        const double h = spec.furniture[k].height;
        const bool surface_top = in_window(h) && furniture[k].area() >= surface.min_area;
        horizontal(h, surface_top ? Label::WorkSurface : Label::Furniture, true);
        covered = true;
      }
      for (const auto& r : clutter) covered = covered || strictly_inside(r, c);
      if (!covered) {
        bool under_table = false;
        for (const auto& t : tables) under_table = under_table || strictly_inside(t, c);
        horizontal(0.0, under_table ? Label::Floor : Label::ClearFloor, true);
      }
      for (std::size_t t = 0; t < tables.size(); ++t) {
        if (!strictly_inside(tables[t], c)) continue;
        for (std::size_t k = 0; k < items.size(); ++k) {
          if (!strictly_inside(items[k], c) || table_of_item(k) != t) continue;
          horizontal(spec.tables[t].top_height + spec.table_items[k].height, Label::SurfaceClutter, true);
        }
        // The top continues under resting items, as a band face for their droplets to find.
        const bool surface_top = in_window(spec.tables[t].top_height) && tables[t].area() >= surface.min_area;
        horizontal(spec.tables[t].top_height, surface_top ? Label::WorkSurface : Label::Other, true);
      }
      horizontal(spec.wall_height, Label::Other, false);
    }
  }

  const std::size_t n = room.size();
  const std::vector<double> wall_rows = subdivide(0.0, spec.wall_height, spec.resolution);
  for (std::size_t e = 0; e < n; ++e) out.strip(lattice.chain(room[e], room[(e + 1) % n]), wall_rows, Label::Furniture);

  for (std::size_t k = 0; k < furniture.size(); ++k) {
    const auto rows = subdivide(0.0, spec.furniture[k].height, spec.resolution);
    for (const auto& side : lattice.outline(furniture[k])) out.strip(side, rows, Label::Furniture);
  }
  for (std::size_t t = 0; t < tables.size(); ++t) {
    const double top = spec.tables[t].top_height;
    for (const auto& side : lattice.outline(tables[t])) out.strip(side, {top - kTableApron, top}, Label::Other);
  }
  for (std::size_t k = 0; k < items.size(); ++k) {
    const double base = spec.tables[table_of_item(k)].top_height;
    const auto rows = subdivide(base, base + spec.table_items[k].height, spec.resolution);
    for (const auto& side : lattice.outline(items[k])) out.strip(side, rows, Label::Other);
  }
  for (std::size_t k = 0; k < clutter.size(); ++k) emit_pile(out, lattice, clutter[k], spec.clutter[k]);

  TriangleMesh& mesh = out.mesh();
  std::vector<Label>& labels = out.labels();
  for (FaceId f = 0; f < mesh.faces.size(); ++f) {
    if (mesh.min_z(f) > extraction.ceiling_cutoff) labels[f] = Label::CulledCeiling;
  }

  // Noise: jitter every vertex, then knock out faces.
  std::mt19937_64 rng(seed);
  std::vector<Vec3> clean = mesh.vertices;
  if (spec.noise.jitter_sigma > 0) {
    std::normal_distribution<double> jitter(0.0, spec.noise.jitter_sigma);
    for (auto& v : mesh.vertices) {
      for (int k = 0; k < 3; ++k) v[k] += jitter(rng);
    }
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double floor_holes = spec.noise.floor_hole_probability.value_or(spec.noise.hole_probability);
  std::vector<FaceId> keep;
  keep.reserve(mesh.faces.size());
  for (FaceId f = 0; f < mesh.faces.size(); ++f) {
    const bool is_floor = labels[f] == Label::Floor || labels[f] == Label::ClearFloor;
    const double u = unit(rng);
    if (u < (is_floor ? floor_holes : spec.noise.hole_probability)) continue;
    const Vec3 c = (clean[mesh.faces[f][0]] + clean[mesh.faces[f][1]] + clean[mesh.faces[f][2]]) / 3.0;
    bool dark = false;
    for (const auto& r : spec.noise.dark_dropouts) dark = dark || r.contains(c.head<2>());
    if (dark) continue;
    if (is_degenerate(mesh.corner(f, 0), mesh.corner(f, 1), mesh.corner(f, 2))) continue;
    keep.push_back(f);
  }

  GeneratedScene scene;
  if (keep.size() == mesh.faces.size()) {
    scene.mesh = std::move(mesh);
    scene.truth.labels = std::move(labels);
  } else {
    scene.mesh = extract_faces(mesh, keep);
    for (FaceId f : keep) scene.truth.labels.push_back(labels[f]);
  }
  scene.truth.floor_z = 0.0;
  scene.truth.room = room;
  scene.truth.obstacles = furniture;
  scene.truth.obstacles.insert(scene.truth.obstacles.end(), clutter.begin(), clutter.end());
  scene.truth.obstacles.insert(scene.truth.obstacles.end(), tables.begin(), tables.end());
  return scene;
}

// ---------------------------------------------------------------------------
// Evaluation

Evaluation evaluate_labels(const FaceLabelMap& predicted, const GroundTruth& truth,
                           const ClearanceGrid* grid) {
  if (predicted.size() != truth.labels.size()) {
    throw InputMismatchError("prediction has " + std::to_string(predicted.size()) +
                             " faces but ground truth has " + std::to_string(truth.labels.size()));
  }
  struct ClassDef {
    const char* name;
    std::vector<Label> members;
  };
  const std::vector<ClassDef> defs = {
      {"floor", {Label::Floor, Label::ClearFloor, Label::Noise}},
      {"clear_floor", {Label::ClearFloor}},
      {"clutter", {Label::Clutter}},
      {"furniture", {Label::Furniture}},
      {"work_surface", {Label::WorkSurface}},
      {"surface_clutter", {Label::SurfaceClutter}},
      {"other", {Label::Other}},
      {"culled_ceiling", {Label::CulledCeiling}},
  };

  Evaluation ev;
  for (const auto& def : defs) {
    auto member = [&](Label l) {
      return std::find(def.members.begin(), def.members.end(), l) != def.members.end();
    };
    ClassMetrics m;
    for (std::size_t f = 0; f < truth.labels.size(); ++f) {
      const bool p = member(predicted[FaceId(f)]);
      const bool t = member(truth.labels[f]);
      if (p && t) ++m.true_positive;
      if (p && !t) ++m.false_positive;
      if (!p && t) ++m.false_negative;
    }
    const std::size_t pred_n = m.true_positive + m.false_positive;
    const std::size_t true_n = m.true_positive + m.false_negative;
    if (pred_n == 0 && true_n == 0) {
      m.precision = m.recall = 1.0;
    } else {
      m.precision_undefined = pred_n == 0;
      m.recall_undefined = true_n == 0;
      m.precision = pred_n ? double(m.true_positive) / double(pred_n) : 0.0;
      m.recall = true_n ? double(m.true_positive) / double(true_n) : 0.0;
    }
    ev.classes[def.name] = m;
  }

  if (grid) {
    std::size_t inter = 0, uni = 0;
    for (std::size_t k = 0; k < grid->frame.size(); ++k) {
      const bool p = grid->colors[k] == CellColor::Green;
      const bool t = truth.green(grid->frame.center(grid->frame.cell(k)), grid->params.safe_radius);
      ev.green_predicted += p;
      ev.green_truth += t;
      inter += (p && t);
      uni += (p || t);
    }
    ev.green_iou = uni ? double(inter) / double(uni) : 1.0;
  }
  return ev;
}

// ---------------------------------------------------------------------------
// Benchmark homes

SceneSpec benchmark_home(double resolution) {
  SceneSpec s;
  s.resolution = resolution;
  s.wall_height = 2.5;
  s.noise = NoiseModel{0.0, 0.0, std::nullopt, {}};
  s.room = {{0, 0}, {14, 0}, {14, 6}, {9, 6}, {9, 10}, {0, 10}};
  // Interior partitions with door gaps.
  s.furniture = {
      {{5.0, 0.0, 5.1, 3.5}, 2.4},  {{5.0, 4.5, 5.1, 10.0}, 2.4}, {{0.0, 6.0, 2.0, 6.1}, 2.4},
      {{3.0, 6.0, 5.0, 6.1}, 2.4},  {{9.0, 0.0, 9.1, 2.0}, 2.4},  {{9.0, 3.0, 9.1, 6.0}, 2.4},
      {{0.5, 0.5, 2.5, 2.6}, 0.55},  // bed
      {{3.5, 0.2, 4.7, 0.8}, 1.9},   // wardrobe
      {{5.6, 7.5, 8.0, 8.4}, 0.45},  // couch
      {{10.0, 5.2, 13.5, 5.8}, 0.9}, // counter
      {{0.2, 9.3, 1.8, 9.8}, 1.8},   // bookshelf
  };
  s.tables = {
      {{6.0, 2.0, 7.5, 3.2}, 0.75},
      {{3.0, 8.0, 4.4, 8.7}, 0.74},
      {{6.2, 6.4, 7.4, 7.0}, 0.45},
      {{11.0, 2.0, 12.5, 3.0}, 0.78},
  };
  s.table_items = {{{6.3, 2.3, 6.6, 2.6}, 0.12}, {{3.2, 8.2, 3.6, 8.5}, 0.2}};
  s.clutter = {
      {{2.8, 3.0, 3.3, 3.4}, 0.3, 35},
      {{7.8, 0.5, 8.3, 0.9}, 0.3, 30},
      {{12.8, 0.6, 13.4, 1.1}, 0.3, 25},
      {{1.2, 7.0, 1.6, 7.5}, 0.3, 40},
  };
  return s;
}

SceneSpec benchmark_home_for_faces(std::size_t target_faces) {
  // Face counts move in steps as lattice lines appear, so bracket the target
  // and keep the closest try.
  double lo = 0.005, hi = 2.0;  // finer resolution gives more faces
  double resolution = 0.25;
  SceneSpec best = benchmark_home(resolution);
  double best_error = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 14; ++iter) {
    SceneSpec spec = benchmark_home(resolution);
    const std::size_t faces = generate_scene(spec, 0).mesh.faces.size();
    const double ratio = double(faces) / double(target_faces);
    if (std::abs(ratio - 1.0) < best_error) {
      best_error = std::abs(ratio - 1.0);
      best = spec;
    }
    if (best_error < 0.02) break;
    (ratio > 1 ? lo : hi) = resolution;
    resolution *= std::sqrt(ratio);
    if (!(resolution > lo && resolution < hi)) resolution = std::sqrt(lo * hi);
  }
  return best;
}

}  // namespace wsa
