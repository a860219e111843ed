#pragma once

#include <span>
#include <vector>

#include "wsa/floor_extract.hpp"
#include "wsa/geometry.hpp"
#include "wsa/mesh.hpp"

namespace wsa {

/// Regular lattice of droplet sites; site (i, j) sits at origin + (i + 1/2, j + 1/2) * pitch.
struct DropletGrid {
  double pitch = 0.05;
  Vec2 origin{0, 0};
  int cols = 0;
  int rows = 0;

  std::size_t size() const { return std::size_t(cols) * std::size_t(rows); }
  Vec2 site(std::size_t k) const {
    return origin + pitch * Vec2(double(k % cols) + 0.5, double(k / cols) + 0.5);
  }

  /// Lattice covering the XY box [lo, hi].
  static DropletGrid covering(const Vec2& lo, const Vec2& hi, double pitch);
};

struct SurfaceParams {
  /// Work-surface height window above the floor (m).
  double min_height = 0.3;
  double max_height = 1.3;
  /// Bands with less total face area are ignored (m^2).
  double min_area = 0.05;

  void validate() const;
};

struct WorkSurface {
  double mean_z = 0;
  double area = 0;
  std::vector<FaceId> faces;         // the band, minus faces resting on lower surfaces
  std::vector<FaceId> clear_faces;   // band faces reached by a droplet
  std::vector<FaceId> obstructions;  // first hits above the band inside its footprint
};

struct SegmentationResult {
  std::vector<FaceId> clear_floor_faces;
  std::vector<FaceId> obstructing_faces;
  /// Noise faces of the floor band first hit at floor level. They keep their
  /// noise label but neither obstruct nor block walking.
  std::vector<FaceId> reached_noise_faces;
  std::vector<WorkSurface> work_surfaces;
  std::size_t droplet_sites = 0;
  /// Sites whose ray hit nothing.
  std::size_t coverage_gaps = 0;
};

/// Drops one ray per site from above the index. A floor face hit first, within
/// floor_tolerance of floor_z, becomes clear floor; any other first hit obstructs
/// unless it is a floor-level noise face.
SegmentationResult segment_floor(const TriangleMesh& mesh, const FloorEstimate& floor,
                                 const SpatialIndexXY& index, const DropletGrid& grid,
                                 double floor_tolerance, int threads = 1);

/// Elevated bands inside the height window become work surfaces, each with its
/// own droplet pass to find the clear part and whatever rests on top. Bands are
/// visited bottom-up; faces that obstruct a lower surface leave their band.
std::vector<WorkSurface> detect_work_surfaces(const TriangleMesh& mesh,
                                              std::span<const HeightBand> bands,
                                              const FloorEstimate& floor,
                                              const SpatialIndexXY& index,
                                              const DropletGrid& grid,
                                              const SurfaceParams& params,
                                              double floor_tolerance, int threads = 1);

}  // namespace wsa
