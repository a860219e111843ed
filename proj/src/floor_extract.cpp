#include "wsa/floor_extract.hpp"

#include <algorithm>
#include <cmath>

#include "wsa/error.hpp"
#include "wsa/geometry.hpp"

namespace wsa {

void ExtractionParams::validate() const {
  if (!(ceiling_cutoff > 0)) throw ConfigError("ceiling_cutoff must be positive");
  if (!(min_theta > 0 && min_theta < 90)) throw ConfigError("min_theta must lie in (0, 90)");
  if (!(band_width > 0)) throw ConfigError("band_width must be positive");
}

std::vector<FaceId> cull_ceiling(const TriangleMesh& mesh, const ExtractionParams& params) {
  if (mesh.faces.empty() || mesh.vertices.empty()) throw EmptyInputError("mesh has no faces");
  double z_min = INFINITY;
  for (const auto& v : mesh.vertices) z_min = std::min(z_min, v.z());
  const double limit = z_min + params.ceiling_cutoff;

  std::vector<FaceId> kept;
  kept.reserve(mesh.faces.size());
  for (FaceId f = 0; f < mesh.faces.size(); ++f) {
    if (!(mesh.min_z(f) > limit)) kept.push_back(f);
  }
  return kept;
}

std::vector<FaceId> horizontal_candidates(const TriangleMesh& mesh, std::span<const FaceId> faces,
                                          const ExtractionParams& params) {
  std::vector<FaceId> out;
  for (FaceId f : faces) {
    const Vec3 &a = mesh.corner(f, 0), &b = mesh.corner(f, 1), &c = mesh.corner(f, 2);
    if (is_degenerate(a, b, c)) continue;
    if (tilt_degrees(face_normal(a, b, c)) <= params.min_theta + kAngleEpsilon) out.push_back(f);
  }
  return out;
}

std::vector<HeightBand> cluster_height_bands(const TriangleMesh& mesh,
                                             std::span<const FaceId> candidates,
                                             const ExtractionParams& params) {
  if (candidates.empty()) throw NoFloorFoundError();

  std::vector<std::pair<double, FaceId>> heights;
  heights.reserve(candidates.size());
  for (FaceId f : candidates) heights.emplace_back(mesh.centroid(f).z(), f);
  std::sort(heights.begin(), heights.end());

  // Means are taken relative to the band's lowest height so that a band of
  // identical heights averages to exactly that height.
  std::vector<HeightBand> bands;
  double base = 0;
  double offset_sum = 0;
  auto close_band = [&] {
    bands.back().mean_z = base + offset_sum / double(bands.back().faces.size());
  };
  for (std::size_t i = 0; i < heights.size(); ++i) {
    if (i == 0 || heights[i].first - heights[i - 1].first > params.band_width) {
      if (!bands.empty()) close_band();
      bands.emplace_back();
      base = heights[i].first;
      offset_sum = 0;
    }
    bands.back().faces.push_back(heights[i].second);
    offset_sum += heights[i].first - base;
  }
  close_band();
  for (auto& b : bands) std::sort(b.faces.begin(), b.faces.end());
  return bands;
}

FloorEstimate estimate_floor(const TriangleMesh& mesh, std::vector<HeightBand> bands) {
  if (bands.empty()) throw NoFloorFoundError();
  FloorEstimate est;
  const HeightBand& lowest = bands.front();
  est.floor_z = lowest.mean_z;
  for (FaceId f : lowest.faces) {
    if (mesh.centroid(f).z() < est.floor_z) {
      est.removed_noise_faces.push_back(f);
    } else {
      est.floor_faces.push_back(f);
    }
  }
  est.bands = std::move(bands);
  return est;
}

}  // namespace wsa
