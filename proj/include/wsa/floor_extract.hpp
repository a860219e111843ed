#pragma once

#include <span>
#include <vector>

#include "wsa/mesh.hpp"

namespace wsa {

struct ExtractionParams {
  /// Faces whose lowest corner sits more than this above the lowest vertex are dropped (m).
  double ceiling_cutoff = 2.0;
  /// Largest tilt from +Z a floor candidate may have (degrees, inclusive).
  double min_theta = 1.0;
  /// A new height band starts when consecutive centroid heights differ by more than this (m).
  double band_width = 0.05;

  void validate() const;
};

struct HeightBand {
  double mean_z = 0;
  std::vector<FaceId> faces;  // ascending
};

struct FloorEstimate {
  double floor_z = 0;
  std::vector<FaceId> floor_faces;
  std::vector<FaceId> removed_noise_faces;
  std::vector<HeightBand> bands;  // ascending by mean_z
};

/// Tolerance used on every angle threshold so that boundary values decide as written.
inline constexpr double kAngleEpsilon = 1e-9;

/// Faces kept after dropping everything whose lowest corner exceeds the
/// global minimum vertex height plus the cutoff. Throws EmptyInputError.
std::vector<FaceId> cull_ceiling(const TriangleMesh& mesh, const ExtractionParams& params);

/// Faces among `faces` whose tilt is at most min_theta. Degenerate faces are skipped.
std::vector<FaceId> horizontal_candidates(const TriangleMesh& mesh, std::span<const FaceId> faces,
                                          const ExtractionParams& params);

/// Gap clustering of centroid heights. Throws NoFloorFoundError on empty input.
std::vector<HeightBand> cluster_height_bands(const TriangleMesh& mesh,
                                             std::span<const FaceId> candidates,
                                             const ExtractionParams& params);

/// Averages the lowest band and drops its faces that sit below the average.
FloorEstimate estimate_floor(const TriangleMesh& mesh, std::vector<HeightBand> bands);

}  // namespace wsa
