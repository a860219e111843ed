#include <random>

#include "doctest.h"
#include "support.hpp"
#include "wsa/classify.hpp"
#include "wsa/geometry.hpp"
#include "wsa/pipeline.hpp"

using namespace wsa;

TEST_CASE("Eq. 2 boundary table") {
  const ClassifyParams params{1.0, 60.0};
  const std::vector<std::pair<double, BoundaryClass>> table = {
      {0.0, BoundaryClass::Furniture},  {0.5, BoundaryClass::Furniture}, {1.0, BoundaryClass::Furniture},
      {1.01, BoundaryClass::Clutter},   {30.0, BoundaryClass::Clutter},  {59.9, BoundaryClass::Clutter},
      {60.0, BoundaryClass::Furniture}, {89.0, BoundaryClass::Furniture}};
  for (auto [delta, expected] : table) {
    CAPTURE(delta);
    CHECK(classify_deviation(tilt_deviation(0.0, delta), params) == expected);
  }
}

TEST_CASE("Eq. 1 uses the floor face's own tilt") {
  CHECK(tilt_deviation(0.4, 30.4) == doctest::Approx(30.0));
  CHECK(tilt_deviation(0.8, 0.3) == doctest::Approx(0.5));
  CHECK(classify_deviation(tilt_deviation(0.0, 30.0), {}) == BoundaryClass::Clutter);
  CHECK(classify_deviation(tilt_deviation(0.0, 85.0), {}) == BoundaryClass::Furniture);
  CHECK(classify_deviation(tilt_deviation(0.0, 0.5), {}) == BoundaryClass::Furniture);
}

TEST_CASE("limit: wide-open thresholds send every deviation to clutter") {
  const ClassifyParams open{1e-6, 90.0 - 1e-6};
  for (double d = 0.001; d < 90.0; d += 0.731) CHECK(classify_deviation(d, open) == BoundaryClass::Clutter);
}

TEST_CASE("params validation") {
  CHECK_NOTHROW(ClassifyParams{}.validate());
  CHECK_THROWS(ClassifyParams{0.0, 60.0}.validate());
  CHECK_THROWS(ClassifyParams{30.0, 20.0}.validate());
  CHECK_THROWS(ClassifyParams{1.0, 90.0}.validate());
}

namespace {

FaceLabelMap classify_scene(const TriangleMesh& mesh, const ClassifyParams& params = {}) {
  PipelineConfig config;
  config.classify = params;
  return run_pipeline(mesh, config).labels;
}

}  // namespace

TEST_CASE("pile becomes clutter, walls and boxes furniture") {
  SceneSpec s;
  s.room = {{0, 0}, {4, 0}, {4, 3}, {0, 3}};
  s.noise = NoiseModel{0, 0, std::nullopt, {}};
  s.furniture.push_back({{0.5, 0.5, 1.5, 1.0}, 1.8});
  s.clutter.push_back({{2.5, 1.5, 3.0, 2.0}, 0.3, 30});
  auto scene = generate_scene(s, 0);
  auto labels = classify_scene(scene.mesh);
  for (FaceId f = 0; f < labels.size(); ++f) {
    const Label t = scene.truth.labels[f];
    if (t == Label::Clutter || t == Label::Furniture) CHECK(labels[f] == t);
  }
  CHECK(labels.fully_labeled());
}

TEST_CASE("a pile steeper than max_theta reads as furniture") {
  SceneSpec s;
  s.room = {{0, 0}, {3, 0}, {3, 3}, {0, 3}};
  s.noise = NoiseModel{0, 0, std::nullopt, {}};
  s.clutter.push_back({{1.0, 1.0, 1.4, 1.4}, 0.3, 70});
  auto scene = generate_scene(s, 0);
  auto labels = classify_scene(scene.mesh);
  CHECK(labels.count(Label::Clutter) == 0);
  std::size_t piles = 0;
  for (FaceId f = 0; f < labels.size(); ++f) {
    if (scene.truth.labels[f] == Label::Clutter) {
      ++piles;
      CHECK(labels[f] == Label::Furniture);
    }
  }
  CHECK(piles > 0);
}

TEST_CASE("property: decisions survive scaling and rotation about z") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 4; ++trial) {
    auto scene = generate_scene(test::random_room(rng), trial);
    auto base = classify_scene(scene.mesh);
    for (double angle : {0.7, 2.1}) {
      TriangleMesh turned = scene.mesh;
      for (auto& v : turned.vertices) {
        v = Vec3(v.x() * std::cos(angle) - v.y() * std::sin(angle), v.x() * std::sin(angle) + v.y() * std::cos(angle),
                 v.z());
      }
      auto labels = classify_scene(turned);
      for (FaceId f = 0; f < labels.size(); ++f) {
        const Label b = base[f];
        if (b == Label::Clutter || b == Label::Furniture) CHECK(labels[f] == b);
      }
    }
  }
}

TEST_CASE("classification labels every face") {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 5; ++trial) {
    auto scene = generate_scene(test::random_room(rng, false), trial);
    auto labels = classify_scene(scene.mesh);
    CHECK(labels.fully_labeled());
    CHECK(labels.count(Label::Unlabeled) == 0);
  }
}

TEST_CASE("flood spreads only within the same class band") {
  // Floor strip, a 30 degree ramp face, then a vertical face on top of it.
  TriangleMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0},
                {2, 0, 0.57735026919}, {2, 1, 0.57735026919}, {2, 0, 1.5}, {2, 1, 1.5}};
  m.faces = {{0, 1, 3}, {0, 3, 2}, {1, 4, 5}, {1, 5, 3}, {4, 6, 7}, {4, 7, 5}};
  FaceLabelMap labels(m.faces.size());
  labels.set(0, Label::Floor);
  labels.set(1, Label::Floor);
  classify_floor_boundary(m, weld_and_adjacency(m, 0.0), labels, {});
  CHECK(labels[2] == Label::Clutter);
  CHECK(labels[3] == Label::Clutter);
  CHECK(labels[4] == Label::Other);
  CHECK(labels[5] == Label::Other);
}
