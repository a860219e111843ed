#include "wsa/classify.hpp"

#include <cmath>
#include <deque>

#include "wsa/error.hpp"
#include "wsa/floor_extract.hpp"

namespace wsa {

void ClassifyParams::validate() const {
  if (!(min_theta > 0 && min_theta < max_theta && max_theta < 90)) {
    throw ConfigError("classification angles need 0 < min_theta < max_theta < 90");
  }
}

BoundaryClass classify_deviation(double deviation, const ClassifyParams& params) {
  if (deviation > params.min_theta + kAngleEpsilon && deviation < params.max_theta - kAngleEpsilon) {
    return BoundaryClass::Clutter;
  }
  return BoundaryClass::Furniture;
}

void classify_floor_boundary(const TriangleMesh& mesh, const FaceAdjacency& adjacency,
                             FaceLabelMap& labels, const ClassifyParams& params) {
  const std::vector<double> tilts = face_tilts(mesh);
  // Tilt of the floor face each labeled face descends from.
  std::vector<double> origin_tilt(mesh.faces.size(), 0.0);
  std::deque<FaceId> frontier;

  auto to_label = [](BoundaryClass c) {
    return c == BoundaryClass::Clutter ? Label::Clutter : Label::Furniture;
  };

  for (FaceId f = 0; f < mesh.faces.size() && f < adjacency.face_count(); ++f) {
    if (labels[f] != Label::Floor && labels[f] != Label::ClearFloor) continue;
    for (FaceId n : adjacency.neighbors(f)) {
      if (labels[n] != Label::Unlabeled || std::isnan(tilts[n])) continue;
      BoundaryClass c = classify_deviation(tilt_deviation(tilts[f], tilts[n]), params);
      labels.set(n, to_label(c));
      origin_tilt[n] = tilts[f];
      frontier.push_back(n);
    }
  }

  while (!frontier.empty()) {
    FaceId f = frontier.front();
    frontier.pop_front();
    const Label label = labels[f];
    for (FaceId n : adjacency.neighbors(f)) {
      if (labels[n] != Label::Unlabeled || std::isnan(tilts[n])) continue;
      if (to_label(classify_deviation(tilt_deviation(origin_tilt[f], tilts[n]), params)) != label) {
        continue;
      }
      labels.set(n, label);
      origin_tilt[n] = origin_tilt[f];
      frontier.push_back(n);
    }
  }

  for (FaceId f = 0; f < mesh.faces.size(); ++f) labels.set_if_unlabeled(f, Label::Other);
}

}  // namespace wsa
