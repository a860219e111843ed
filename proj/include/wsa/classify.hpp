#pragma once

#include <cmath>

#include "wsa/geometry.hpp"
#include "wsa/labels.hpp"
#include "wsa/mesh.hpp"

namespace wsa {

struct ClassifyParams {
  double min_theta = 1.0;   // degrees
  /// Steepest deviation still read as clutter (degrees). Never stated for the
  /// original method; 60 keeps walls in furniture while catching pile slopes.
  double max_theta = 60.0;

  void validate() const;
};

enum class BoundaryClass { Clutter, Furniture };

/// Tilt deviation between a floor face and its neighbor (degrees).
inline double tilt_deviation(double floor_tilt, double neighbor_tilt) {
  return std::abs(floor_tilt - neighbor_tilt);
}

/// Clutter strictly inside (min_theta, max_theta); furniture otherwise.
BoundaryClass classify_deviation(double deviation, const ClassifyParams& params);

/// Labels the faces around the floor. Every unlabeled neighbor of a Floor or
/// ClearFloor face gets clutter or furniture from its tilt deviation; each
/// label then spreads to edge-adjacent unlabeled faces whose deviation from
/// the originating floor face falls in the same class. Whatever is still
/// unlabeled afterwards becomes Other.
void classify_floor_boundary(const TriangleMesh& mesh, const FaceAdjacency& adjacency,
                             FaceLabelMap& labels, const ClassifyParams& params);

}  // namespace wsa
