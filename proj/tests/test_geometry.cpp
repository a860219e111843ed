#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "wsa/error.hpp"
#include "wsa/geometry.hpp"

using namespace wsa;
using doctest::Approx;

namespace {

Vec3 rotate_z(const Vec3& p, double angle) {
  return {p.x() * std::cos(angle) - p.y() * std::sin(angle), p.x() * std::sin(angle) + p.y() * std::cos(angle), p.z()};
}

// Adjacency by direct pairwise comparison of welded corner sets.
bool share_edge(const std::vector<VertexId>& rep, const Triangle& a, const Triangle& b) {
  int shared = 0;
  for (VertexId u : a) {
    for (VertexId v : b) shared += rep[u] == rep[v];
  }
  return shared >= 2;
}

}  // namespace

TEST_CASE("face normal examples") {
  auto n = face_normal({0, 0, 0}, {1, 0, 0}, {0, 1, 0}).direction;
  CHECK(n.isApprox(Vec3(0, 0, 1)));
  n = face_normal({0, 0, 0}, {0, 1, 0}, {0, 0, 1}).direction;
  CHECK(n.isApprox(Vec3(1, 0, 0)));
  n = face_normal({0, 0, 0}, {0, 1, 0}, {1, 0, 0}).direction;
  CHECK(n.z() == Approx(1.0));
  CHECK_THROWS_AS(face_normal({0, 0, 0}, {1, 1, 1}, {2, 2, 2}), DegenerateFaceError);
}

TEST_CASE("tilt examples") {
  CHECK(tilt_degrees({Vec3(0, 0, 1)}) == 0.0);
  CHECK(tilt_degrees({Vec3(1, 0, 0)}) == Approx(90.0));
  const double r = std::numbers::pi / 180.0;
  CHECK(std::abs(tilt_degrees({Vec3(0, std::sin(r), std::cos(r))}) - 1.0) < 1e-6);
}

TEST_CASE("property: tilt is invariant under z rotation and scaling") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int trial = 0; trial < 500; ++trial) {
    Vec3 a(u(rng), u(rng), u(rng)), b(u(rng), u(rng), u(rng)), c(u(rng), u(rng), u(rng));
    if (is_degenerate(a, b, c)) continue;
    const double t = tilt_degrees(face_normal(a, b, c));
    const double angle = u(rng) * 3, s = std::exp(u(rng));
    CHECK(std::abs(tilt_degrees(face_normal(rotate_z(a, angle), rotate_z(b, angle), rotate_z(c, angle))) - t) < 1e-6);
    CHECK(std::abs(tilt_degrees(face_normal(a * s, b * s, c * s)) - t) < 1e-6);
  }
}

TEST_CASE("adjacency examples") {
  TriangleMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}};
  m.faces = {{0, 1, 2}, {1, 3, 2}};
  auto adj = weld_and_adjacency(m, 0.0);
  CHECK(adj.adjacent(0, 1));
  CHECK(adj.adjacent(1, 0));

  SUBCASE("1 mm gap welds at 5 mm") {
    TriangleMesh g;
    g.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1.001, 0, 0}, {1, 1, 0}, {0.001, 1, 0}};
    g.faces = {{0, 1, 2}, {3, 4, 5}};
    CHECK(weld_and_adjacency(g, 0.005).adjacent(0, 1));
    CHECK_FALSE(weld_and_adjacency(g, 0.0005).adjacent(0, 1));
  }
  SUBCASE("distant triangles") {
    TriangleMesh d;
    d.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {5, 5, 0}, {6, 5, 0}, {5, 6, 0}};
    d.faces = {{0, 1, 2}, {3, 4, 5}};
    auto a = weld_and_adjacency(d, 0.001);
    CHECK(a.neighbors(0).empty());
    CHECK(a.neighbors(1).empty());
  }
}

TEST_CASE("property: adjacency matches the pairwise oracle and is symmetric") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const auto scene = generate_scene(test::random_room(rng), trial);
    TriangleMesh m = scene.mesh;
    // Jitter a copy of every vertex below the weld tolerance.
    std::normal_distribution<double> tiny(0.0, 1e-5);
    for (auto& v : m.vertices) v += Vec3(tiny(rng), tiny(rng), tiny(rng));
    const auto adj = weld_and_adjacency(m, 0.001);
    const auto rep = weld_vertices(m, 0.001);
    REQUIRE(adj.face_count() == m.faces.size());
    std::size_t checked = 0;
    for (FaceId f = 0; f < m.faces.size(); ++f) {
      for (FaceId g : adj.neighbors(f)) {
        CHECK(g != f);
        CHECK(adj.adjacent(g, f));
        CHECK(share_edge(rep, m.faces[f], m.faces[g]));
      }
    }
    // Pairwise check on a sample of faces.
    for (FaceId f = 0; f < m.faces.size(); f += 37) {
      for (FaceId g = 0; g < m.faces.size(); ++g) {
        if (g == f) continue;
        CHECK(share_edge(rep, m.faces[f], m.faces[g]) == adj.adjacent(f, g));
        ++checked;
      }
    }
    CHECK(checked > 0);
  }
}

TEST_CASE("welding is transitive and keeps the smallest index") {
  TriangleMesh m;
  m.vertices = {{0, 0, 0}, {0.0008, 0, 0}, {0.0016, 0, 0}, {1, 0, 0}};
  auto rep = weld_vertices(m, 0.001);
  CHECK(rep == std::vector<VertexId>{0, 0, 0, 3});
  rep = weld_vertices(m, 0.0);
  CHECK(rep == std::vector<VertexId>{0, 1, 2, 3});
}

TEST_CASE("active mask limits adjacency") {
  TriangleMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}};
  m.faces = {{0, 1, 2}, {1, 3, 2}};
  std::vector<std::uint8_t> active{1, 0};
  auto adj = weld_and_adjacency(m, 0.0, active);
  CHECK(adj.neighbors(0).empty());
}

TEST_CASE("vertical hits") {
  const Vec3 a(0, 0, 0), b(1, 0, 1), c(0, 1, 0);
  CHECK(*vertical_hit(a, b, c, 0.25, 0.25) == Approx(0.25));
  CHECK(vertical_hit(a, b, c, 0.0, 0.0).has_value());   // corner
  CHECK(vertical_hit(a, b, c, 0.5, 0.5).has_value());   // edge
  CHECK_FALSE(vertical_hit(a, b, c, 0.6, 0.6).has_value());
  CHECK_FALSE(vertical_hit({0, 0, 0}, {1, 0, 0}, {1, 0, 1}, 0.5, 0.0).has_value());  // vertical
}

TEST_CASE("raycast examples") {
  TriangleMesh m = test::flat_floor(1, 1, 0, 1);
  const SpatialIndexXY floor_only(m, 0.25);
  auto hit = raycast_down(floor_only, m, 0.5, 0.5, 3.0);
  REQUIRE(hit);
  CHECK(hit->z == 0.0);
  test::add_grid(m, 0.2, 0.2, 0.8, 0.8, 0.7, 1, 1);
  const SpatialIndexXY index(m, 0.25);
  hit = raycast_down(index, m, 0.5, 0.5, 3.0);
  REQUIRE(hit);
  CHECK(hit->z == Approx(0.7));
  CHECK(hit->face >= 2);
  CHECK_FALSE(raycast_down(index, m, 50, 50, 3.0));
  // Starting below the table reaches the floor.
  hit = raycast_down(index, m, 0.5, 0.5, 0.5);
  REQUIRE(hit);
  CHECK(hit->z == 0.0);
}

TEST_CASE("coplanar overlap resolves to the lowest face id") {
  TriangleMesh m;
  m.vertices = {{0, 0, 1}, {2, 0, 1}, {0, 2, 1}, {0, 0, 1}, {2, 0, 1}, {0, 2, 1}};
  m.faces = {{3, 4, 5}, {0, 1, 2}};
  const SpatialIndexXY index(m, 0.5);
  auto hit = raycast_down(index, m, 0.3, 0.3, 5.0);
  REQUIRE(hit);
  CHECK(hit->face == 0);
}

TEST_CASE("property: every face lands in at least one index cell") {
  std::mt19937_64 rng(9);
  auto m = test::random_soup(rng, 300, 8.0);
  const SpatialIndexXY index(m, 0.4);
  std::vector<int> seen(m.faces.size(), 0);
  for (int r = 0; r < index.rows(); ++r) {
    for (int c = 0; c < index.cols(); ++c) {
      for (FaceId f : index.cell(c, r)) seen[f] = 1;
    }
  }
  CHECK(std::count(seen.begin(), seen.end(), 0) == 0);
}

TEST_CASE("property: indexed raycast equals brute force on random soups") {
  std::mt19937_64 rng(21);
  for (int scene = 0; scene < 4; ++scene) {
    auto m = test::random_soup(rng, 150, 6.0);
    const SpatialIndexXY index(m, 0.3 + 0.2 * scene);
    for (int ray = 0; ray < 500; ++ray) {
      const double x = test::uniform(rng, -0.5, 6.5), y = test::uniform(rng, -0.5, 6.5);
      const double z = test::uniform(rng, 0.0, 5.0);
      CHECK(raycast_down(index, m, x, y, z) == test::brute_raycast(m, x, y, z));
    }
  }
}

TEST_CASE("subset index only sees its faces") {
  TriangleMesh m = test::flat_floor(1, 1, 0, 1);
  test::add_grid(m, 0, 0, 1, 1, 2.5, 1, 1);
  std::vector<FaceId> floor{0, 1};
  const SpatialIndexXY index(m, 0.25, floor);
  CHECK(index.face_count() == 2);
  CHECK(index.z_max() == 0.0);
  auto hit = raycast_down(index, m, 0.5, 0.5, 10.0);
  REQUIRE(hit);
  CHECK(hit->z == 0.0);
}
