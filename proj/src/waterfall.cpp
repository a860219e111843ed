#include "wsa/waterfall.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "wsa/error.hpp"
#include "wsa/parallel.hpp"

namespace wsa {
namespace {

constexpr std::int64_t kNoHit = -1;

void sort_unique(std::vector<FaceId>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::vector<FaceId> set_difference(const std::vector<FaceId>& a, const std::vector<FaceId>& b) {
  std::vector<FaceId> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

int cells_for(double extent, double pitch) {
  return std::max(1, static_cast<int>(std::ceil(extent / pitch - 1e-9)));
}

}  // namespace

DropletGrid DropletGrid::covering(const Vec2& lo, const Vec2& hi, double pitch) {
  if (!(pitch > 0)) throw ConfigError("droplet pitch must be positive");
  DropletGrid g;
  g.pitch = pitch;
  g.origin = lo;
  g.cols = cells_for(hi.x() - lo.x(), pitch);
  g.rows = cells_for(hi.y() - lo.y(), pitch);
  return g;
}

void SurfaceParams::validate() const {
  if (!(min_height < max_height)) throw ConfigError("surface_min_height must be below surface_max_height");
  if (!(min_area >= 0)) throw ConfigError("surface_min_area must be non-negative");
}

SegmentationResult segment_floor(const TriangleMesh& mesh, const FloorEstimate& floor,
                                 const SpatialIndexXY& index, const DropletGrid& grid,
                                 double floor_tolerance, int threads) {
  SegmentationResult result;
  result.droplet_sites = grid.size();
  if (index.empty()) {
    result.coverage_gaps = grid.size();
    return result;
  }

  // 1 = floor face, 2 = face dropped from the floor band as noise.
  std::vector<std::uint8_t> floor_band(mesh.faces.size(), 0);
  for (FaceId f : floor.floor_faces) floor_band[f] = 1;
  for (FaceId f : floor.removed_noise_faces) floor_band[f] = 2;
  const double z_start = index.z_max() + 1.0;

  // Per site: hit face id, tagged with bit 62 when the droplet reached clear
  // floor and bit 61 when it reached the floor level through a noise face.
  constexpr std::int64_t kClearBit = std::int64_t(1) << 62;
  constexpr std::int64_t kNoiseBit = std::int64_t(1) << 61;
  std::vector<std::int64_t> outcome(grid.size(), kNoHit);
  parallel_for(grid.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      Vec2 p = grid.site(k);
      auto hit = raycast_down(index, mesh, p.x(), p.y(), z_start);
      if (!hit) continue;
      const bool level = std::abs(hit->z - floor.floor_z) <= floor_tolerance;
      std::int64_t tag = 0;
      if (level && floor_band[hit->face] == 1) tag = kClearBit;
      if (level && floor_band[hit->face] == 2) tag = kNoiseBit;
      outcome[k] = std::int64_t(hit->face) | tag;
    }
  });

  std::vector<FaceId> obstructing;
  for (std::int64_t o : outcome) {
    if (o == kNoHit) {
      ++result.coverage_gaps;
    } else if (o & kClearBit) {
      result.clear_floor_faces.push_back(static_cast<FaceId>(o & ~kClearBit));
    } else if (o & kNoiseBit) {
      result.reached_noise_faces.push_back(static_cast<FaceId>(o & ~kNoiseBit));
    } else {
      obstructing.push_back(static_cast<FaceId>(o));
    }
  }
  sort_unique(result.clear_floor_faces);
  sort_unique(result.reached_noise_faces);
  sort_unique(obstructing);
  // A face reached by one droplet counts as clear even if another stopped on it.
  result.obstructing_faces = set_difference(obstructing, result.clear_floor_faces);
  return result;
}

std::vector<WorkSurface> detect_work_surfaces(const TriangleMesh& mesh,
                                              std::span<const HeightBand> bands,
                                              const FloorEstimate& floor,
                                              const SpatialIndexXY& index,
                                              const DropletGrid& grid,
                                              const SurfaceParams& params,
                                              double floor_tolerance, int threads) {
  std::vector<WorkSurface> surfaces;
  if (index.empty()) return surfaces;
  const double z_start = index.z_max() + 1.0;
  const double lo = floor.floor_z + params.min_height;
  const double hi = floor.floor_z + params.max_height;

  std::vector<std::uint8_t> in_band(mesh.faces.size(), 0);
  std::vector<std::uint8_t> resting(mesh.faces.size(), 0);
  for (std::size_t b = 1; b < bands.size(); ++b) {
    const HeightBand& band = bands[b];
    if (band.mean_z < lo || band.mean_z > hi) continue;
    // Whatever rests on a lower surface is clutter there, not part of this one.
    std::vector<FaceId> faces;
    for (FaceId f : band.faces) {
      if (!resting[f]) faces.push_back(f);
    }
    if (faces.empty()) continue;
    double area = 0;
    for (FaceId f : faces) area += mesh.area(f);
    if (area < params.min_area) continue;

    WorkSurface ws;
    ws.mean_z = band.mean_z;
    ws.area = area;
    ws.faces = std::move(faces);

    Vec2 bmin = Vec2::Constant(INFINITY), bmax = Vec2::Constant(-INFINITY);
    for (FaceId f : ws.faces) {
      in_band[f] = 1;
      for (int k = 0; k < 3; ++k) {
        bmin = bmin.cwiseMin(mesh.corner(f, k).head<2>());
        bmax = bmax.cwiseMax(mesh.corner(f, k).head<2>());
      }
    }

    // Only sites over the band's bounding box can land on it.
    const int c0 = std::max(0, int(std::floor((bmin.x() - grid.origin.x()) / grid.pitch)) - 1);
    const int c1 = std::min(grid.cols - 1, int(std::floor((bmax.x() - grid.origin.x()) / grid.pitch)) + 1);
    const int r0 = std::max(0, int(std::floor((bmin.y() - grid.origin.y()) / grid.pitch)) - 1);
    const int r1 = std::min(grid.rows - 1, int(std::floor((bmax.y() - grid.origin.y()) / grid.pitch)) + 1);
    const std::size_t width = c1 >= c0 ? std::size_t(c1 - c0 + 1) : 0;
    const std::size_t height = r1 >= r0 ? std::size_t(r1 - r0 + 1) : 0;

    constexpr std::int64_t kClearBit = std::int64_t(1) << 62;
    std::vector<std::int64_t> outcome(width * height, kNoHit);
    std::span<const std::uint8_t> band_mask(in_band);
    parallel_for(outcome.size(), threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t k = begin; k < end; ++k) {
        std::size_t site = std::size_t(r0 + int(k / width)) * grid.cols + std::size_t(c0) + k % width;
        Vec2 p = grid.site(site);
        auto hit = raycast_down(index, mesh, p.x(), p.y(), z_start);
        if (!hit) continue;
        if (in_band[hit->face] && std::abs(hit->z - ws.mean_z) <= floor_tolerance) {
          outcome[k] = std::int64_t(hit->face) | kClearBit;
        } else if (!in_band[hit->face] && hit->z > ws.mean_z + floor_tolerance &&
                   raycast_down(index, mesh, p.x(), p.y(), z_start, band_mask)) {
          outcome[k] = std::int64_t(hit->face);
        }
      }
    });

    for (std::int64_t o : outcome) {
      if (o == kNoHit) continue;
      if (o & kClearBit) {
        ws.clear_faces.push_back(static_cast<FaceId>(o & ~kClearBit));
      } else {
        ws.obstructions.push_back(static_cast<FaceId>(o));
      }
    }
    sort_unique(ws.clear_faces);
    sort_unique(ws.obstructions);
    for (FaceId f : ws.faces) in_band[f] = 0;
    for (FaceId f : ws.obstructions) resting[f] = 1;
    surfaces.push_back(std::move(ws));
  }
  return surfaces;
}

}  // namespace wsa
