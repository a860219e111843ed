#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "wsa/error.hpp"
#include "wsa/walkspace.hpp"

using namespace wsa;
using doctest::Approx;

namespace {

FaceLabelMap all_clear(const TriangleMesh& m) { return FaceLabelMap(m.faces.size(), Label::ClearFloor); }

ClearanceGrid corridor(double width, double safe_radius = 0.46) {
  auto m = test::flat_floor(6.0, width, 0, width);
  ClearanceParams params;
  params.safe_radius = safe_radius;
  return clearance_map(rasterize_floor(m, all_clear(m), params), params);
}

CellColor centerline(const ClearanceGrid& g) {
  // Middle column, middle row of a corridor running along x.
  return g.colors[g.frame.index({g.frame.cols / 2, (g.frame.rows - 1) / 2})];
}

OccupancyRaster raster_from(const std::vector<std::string>& rows, double pitch = 0.15) {
  OccupancyRaster r;
  r.frame.pitch = pitch;
  r.frame.rows = int(rows.size());
  r.frame.cols = int(rows[0].size());
  r.on_floor.resize(r.frame.size());
  for (int j = 0; j < r.frame.rows; ++j) {
    for (int i = 0; i < r.frame.cols; ++i) {
      // First string is the top row.
      r.on_floor[r.frame.index({i, r.frame.rows - 1 - j})] = rows[j][i] == '.';
    }
  }
  return r;
}

double signed_area(const Polyline& p) {
  double a = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec2& u = p[i];
    const Vec2& v = p[(i + 1) % p.size()];
    a += u.x() * v.y() - v.x() * u.y();
  }
  return a / 2;
}

bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  auto orient = [](const Vec2& p, const Vec2& q, const Vec2& r) {
    const double v = (q.x() - p.x()) * (r.y() - p.y()) - (q.y() - p.y()) * (r.x() - p.x());
    return (v > 1e-12) - (v < -1e-12);
  };
  return orient(a, b, c) * orient(a, b, d) < 0 && orient(c, d, a) * orient(c, d, b) < 0;
}

}  // namespace

TEST_CASE("rasterize: 3x3 m clear floor gives 20x20 cells") {
  auto m = test::flat_floor(3, 3);
  auto r = rasterize_floor(m, all_clear(m), ClearanceParams{});
  CHECK(r.frame.cols == 20);
  CHECK(r.frame.rows == 20);
  CHECK(std::count(r.on_floor.begin(), r.on_floor.end(), 1) == 400);
}

TEST_CASE("rasterize: only clear floor counts, edges are inside") {
  auto m = test::flat_floor(3, 3, 0, 0.15);
  FaceLabelMap labels = all_clear(m);
  // Knock out the faces covering [1.2, 1.35] x [1.2, 1.35].
  for (FaceId f = 0; f < m.faces.size(); ++f) {
    const Vec3 c = m.centroid(f);
    if (c.x() > 1.2 && c.x() < 1.35 && c.y() > 1.2 && c.y() < 1.35) labels.set(f, Label::Floor);
  }
  auto r = rasterize_floor(m, labels, ClearanceParams{});
  CHECK(r.on_floor[r.frame.index({8, 8})] == 0);
  CHECK(r.on_floor[r.frame.index({7, 8})] == 1);
  CHECK(point_in_triangle_xy({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0.5, 0.5}));
  CHECK(point_in_triangle_xy({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0}));
  CHECK_FALSE(point_in_triangle_xy({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0.51, 0.51}));
}

TEST_CASE("corridor law") {
  CHECK(centerline(corridor(1.00)) == CellColor::Green);
  CHECK(centerline(corridor(0.80)) == CellColor::Yellow);
  CHECK(centerline(corridor(0.18)) == CellColor::Red);
  CHECK(centerline(corridor(1.00, 0.91)) == CellColor::Yellow);
}

TEST_CASE("color thresholds are inclusive at both radii") {
  const ClearanceParams p;
  CHECK(color_for(true, 0.46, p) == CellColor::Green);
  CHECK(color_for(true, 0.4599, p) == CellColor::Yellow);
  CHECK(color_for(true, 0.10, p) == CellColor::Red);
  CHECK(color_for(true, 0.1001, p) == CellColor::Yellow);
  CHECK(color_for(false, 1.0, p) == CellColor::Off);
}

TEST_CASE("property: clearance colors equal the disc oracle") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 12; ++trial) {
    auto r = test::random_raster(rng, 25 + int(rng() % 30), 20 + int(rng() % 30));
    ClearanceParams params;
    if (trial % 3 == 1) params.safe_radius = 0.91;
    auto g = clearance_map(r, params);
    CHECK(g.colors == test::disc_oracle_colors(r, params));
    for (std::size_t k = 0; k < g.frame.size(); ++k) {
      CHECK(g.clearance[k] <= params.safe_radius);
      CHECK((g.colors[k] == CellColor::Off) == (r.on_floor[k] == 0));
    }
  }
}

TEST_CASE("property: the ADA green region lies inside the OSHA one") {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 10; ++trial) {
    auto r = test::random_raster(rng, 40, 35);
    ClearanceParams osha, ada;
    ada.safe_radius = 0.91;
    auto a = clearance_map(r, ada), o = clearance_map(r, osha);
    for (std::size_t k = 0; k < r.frame.size(); ++k) {
      if (a.colors[k] == CellColor::Green) CHECK(o.colors[k] == CellColor::Green);
    }
  }
}

TEST_CASE("edges: one rectangle") {
  auto m = test::flat_floor(3, 2);
  auto g = clearance_map(rasterize_floor(m, all_clear(m), ClearanceParams{}), ClearanceParams{});
  auto loops = compliant_edges(g);
  REQUIRE(loops.size() == 1);
  // Contours pass through edge midpoints, so each corner is cut by one diagonal.
  CHECK(loops[0].size() == 8);
  CHECK(signed_area(loops[0]) > 0);
}

TEST_CASE("edges: no green gives nothing") {
  CHECK(compliant_edges(corridor(0.8)).empty());
}

TEST_CASE("edges: a hole gives an outer loop and a clockwise inner loop") {
  std::vector<std::string> rows(30, std::string(30, '.'));
  for (int j = 13; j < 17; ++j) rows[j].replace(13, 4, "####");
  auto g = clearance_map(raster_from(rows), ClearanceParams{});
  auto loops = compliant_edges(g);
  REQUIRE(loops.size() == 2);
  std::sort(loops.begin(), loops.end(), [](auto& a, auto& b) { return std::abs(signed_area(a)) > std::abs(signed_area(b)); });
  CHECK(signed_area(loops[0]) > 0);
  CHECK(signed_area(loops[1]) < 0);
}

TEST_CASE("property: contours are simple and nest with consistent orientation") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    auto g = clearance_map(test::random_raster(rng, 40, 40), ClearanceParams{});
    auto loops = compliant_edges(g);
    const double half = g.frame.pitch / 2;
    for (const auto& loop : loops) {
      REQUIRE(loop.size() >= 4);
      std::set<std::pair<long, long>> seen;
      for (std::size_t i = 0; i < loop.size(); ++i) {
        const Vec2& a = loop[i];
        CHECK(seen.insert({std::lround(a.x() / half * 4), std::lround(a.y() / half * 4)}).second);
      }
      // No two non-adjacent edges of a loop cross.
      for (std::size_t i = 0; i < loop.size(); ++i) {
        for (std::size_t j = i + 2; j < loop.size(); ++j) {
          if (i == 0 && j == loop.size() - 1) continue;
          CHECK_FALSE(segments_cross(loop[i], loop[(i + 1) % loop.size()], loop[j], loop[(j + 1) % loop.size()]));
        }
      }
    }
    // Net enclosed area is the area of the contoured green region.
    double net = 0;
    for (const auto& loop : loops) net += signed_area(loop);
    CHECK(net >= 0);
  }
}

TEST_CASE("route examples") {
  // Two rooms joined by a corridor.
  auto build = [](double corridor_width) {
    TriangleMesh m;
    test::add_grid(m, 0, 0, 3, 3, 0, 12, 12);
    test::add_grid(m, 6, 0, 9, 3, 0, 12, 12);
    const double y0 = 1.5 - corridor_width / 2;
    test::add_grid(m, 3, y0, 6, y0 + corridor_width, 0, 12, 4);
    ClearanceParams params;
    auto frame = GridFrame::covering({0, 0}, {9, 3}, 0.1);
    return clearance_map(rasterize_floor(m, all_clear(m), frame), params);
  };
  auto wide = build(1.2);
  auto r = check_route(wide, {1.5, 1.5}, {7.5, 1.5});
  CHECK(r.exists);
  CHECK(r.length == Approx(6.0));
  for (const auto& c : r.path) CHECK(wide.colors[wide.frame.index(c)] == CellColor::Green);
  for (std::size_t i = 1; i < r.path.size(); ++i) {
    CHECK(std::abs(r.path[i].col - r.path[i - 1].col) + std::abs(r.path[i].row - r.path[i - 1].row) == 1);
  }
  CHECK(r.limiting_clearance >= 0.46);

  auto narrow = build(0.8);
  CHECK_FALSE(check_route(narrow, {1.5, 1.5}, {7.5, 1.5}).exists);

  auto same = check_route(wide, {1.5, 1.5}, {1.5, 1.5});
  CHECK(same.exists);
  CHECK(same.length == 0.0);
  CHECK(same.path.size() == 1);

  CHECK_THROWS_AS(check_route(wide, {4.5, 2.9}, {1.5, 1.5}), InvalidEndpointError);
  CHECK_THROWS_AS(check_route(wide, {1.5, 1.5}, {50, 50}), InvalidEndpointError);
  // A red endpoint on the floor is valid but has no compliant route.
  CHECK_FALSE(check_route(wide, {0.05, 0.05}, {1.5, 1.5}).exists);
}

TEST_CASE("property: A* matches BFS length and flood-fill connectivity") {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 15; ++trial) {
    auto g = clearance_map(test::random_raster(rng, 45, 40), ClearanceParams{});
    auto comp = test::green_components(g);
    std::vector<std::size_t> green;
    for (std::size_t k = 0; k < g.frame.size(); ++k) {
      if (g.colors[k] == CellColor::Green) green.push_back(k);
    }
    if (green.empty()) continue;
    for (int q = 0; q < 20; ++q) {
      const std::size_t a = green[rng() % green.size()], b = green[rng() % green.size()];
      const GridCell ca = g.frame.cell(a), cb = g.frame.cell(b);
      auto r = check_route(g, g.frame.center(ca), g.frame.center(cb));
      CHECK(r.exists == (comp[a] == comp[b]));
      const int steps = test::bfs_steps(g, ca, cb);
      CHECK(r.exists == (steps >= 0));
      if (r.exists) CHECK(int(r.path.size()) - 1 == steps);
    }
  }
}

TEST_CASE("grid CSV round-trips") {
  std::mt19937_64 rng(79);
  auto g = clearance_map(test::random_raster(rng, 20, 15), ClearanceParams{});
  std::stringstream ss;
  write_grid_csv(g, ss);
  CHECK(ss.str().rfind("x,y,clearance,color\n", 0) == 0);
  auto back = read_grid_csv(ss, g.frame, g.params);
  CHECK(back.colors == g.colors);
  for (std::size_t k = 0; k < g.frame.size(); ++k) CHECK(back.clearance[k] == Approx(g.clearance[k]).epsilon(1e-5));

  std::stringstream broken("x,y,clearance,color\n0,0,zero,green\n");
  CHECK_THROWS_AS(read_grid_csv(broken, g.frame, g.params), ParseError);
}

TEST_CASE("clearance params validation") {
  CHECK_NOTHROW(ClearanceParams{}.validate());
  CHECK_THROWS(ClearanceParams{0.15, 0.1, 0.2}.validate());
  CHECK_THROWS(ClearanceParams{0.0, 0.46, 0.1}.validate());
}
