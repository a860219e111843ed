#include "wsa/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "keyvalue.hpp"
#include "wsa/error.hpp"
#include "wsa/geometry.hpp"

namespace wsa {

std::string_view preset_name(Preset p) {
  switch (p) {
    case Preset::Osha: return "osha";
    case Preset::Ada: return "ada";
    case Preset::Custom: return "custom";
  }
  return "custom";
}

std::optional<Preset> parse_preset(std::string_view name) {
  if (name == "osha") return Preset::Osha;
  if (name == "ada") return Preset::Ada;
  if (name == "custom") return Preset::Custom;
  return std::nullopt;
}

void PipelineConfig::use_preset(Preset p) {
  preset = p;
  if (p == Preset::Osha) clearance.safe_radius = kOshaSafeRadius;
  if (p == Preset::Ada) clearance.safe_radius = kAdaSafeRadius;
}

void PipelineConfig::validate() const {
  extraction.validate();
  classify.validate();
  clearance.validate();
  surface.validate();
  if (preset == Preset::Osha && clearance.safe_radius != kOshaSafeRadius) {
    throw ConfigError("preset osha pins safe_radius to 0.46");
  }
  if (preset == Preset::Ada && clearance.safe_radius != kAdaSafeRadius) {
    throw ConfigError("preset ada pins safe_radius to 0.91");
  }
  if (!(droplet_pitch > 0)) throw ConfigError("droplet_pitch must be positive");
  if (!(floor_tolerance >= 0)) throw ConfigError("floor_tolerance must be non-negative");
  if (!(weld_tolerance >= 0)) throw ConfigError("weld_tolerance must be non-negative");
  if (!(index_cell_size > 0)) throw ConfigError("index_cell_size must be positive");
}

PipelineConfig parse_config(std::string_view text) {
  using detail::expect_count;
  using detail::number_at;
  PipelineConfig config;
  std::optional<double> safe_radius;
  std::optional<Preset> preset;

  for (const auto& kv : detail::parse_key_values(text)) {
    auto scalar = [&] {
      expect_count(kv, 1);
      return number_at(kv, 0);
    };
    if (kv.key == "preset") {
      expect_count(kv, 1);
      preset = parse_preset(kv.values[0]);
      if (!preset) throw ParseError(kv.line, "unknown preset '" + kv.values[0] + "'");
    } else if (kv.key == "route") {
      expect_count(kv, 5);
      config.routes.push_back({kv.values[0], {number_at(kv, 1), number_at(kv, 2)},
                               {number_at(kv, 3), number_at(kv, 4)}});
    } else if (kv.key == "safe_radius") {
      safe_radius = scalar();
    } else if (kv.key == "ceiling_cutoff") {
      config.extraction.ceiling_cutoff = scalar();
    } else if (kv.key == "min_theta") {
      config.extraction.min_theta = config.classify.min_theta = scalar();
    } else if (kv.key == "max_theta") {
      config.classify.max_theta = scalar();
    } else if (kv.key == "band_width") {
      config.extraction.band_width = scalar();
    } else if (kv.key == "droplet_pitch") {
      config.droplet_pitch = scalar();
    } else if (kv.key == "floor_tolerance") {
      config.floor_tolerance = scalar();
    } else if (kv.key == "weld_tolerance") {
      config.weld_tolerance = scalar();
    } else if (kv.key == "index_cell_size") {
      config.index_cell_size = scalar();
    } else if (kv.key == "surface_min_height") {
      config.surface.min_height = scalar();
    } else if (kv.key == "surface_max_height") {
      config.surface.max_height = scalar();
    } else if (kv.key == "surface_min_area") {
      config.surface.min_area = scalar();
    } else if (kv.key == "sample_pitch") {
      config.clearance.sample_pitch = scalar();
    } else if (kv.key == "red_radius") {
      config.clearance.red_radius = scalar();
    } else {
      throw ParseError(kv.line, "unknown config key '" + kv.key + "'");
    }
  }

  config.use_preset(preset.value_or(Preset::Osha));
  if (config.preset == Preset::Custom) {
    if (!safe_radius) throw ConfigError("preset custom requires safe_radius");
    config.clearance.safe_radius = *safe_radius;
  } else if (safe_radius && *safe_radius != config.clearance.safe_radius) {
    throw ConfigError("safe_radius " + std::to_string(*safe_radius) + " contradicts preset " +
                      std::string(preset_name(config.preset)));
  }
  config.validate();
  return config;
}

PipelineConfig read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string format_config(const PipelineConfig& c) {
  const auto num = [](double v) { return detail::Shortest{v}; };
  std::ostringstream out;
  out << "preset = " << preset_name(c.preset) << '\n'
      << "safe_radius = " << num(c.clearance.safe_radius) << '\n'
      << "red_radius = " << num(c.clearance.red_radius) << '\n'
      << "sample_pitch = " << num(c.clearance.sample_pitch) << '\n'
      << "ceiling_cutoff = " << num(c.extraction.ceiling_cutoff) << '\n'
      << "min_theta = " << num(c.extraction.min_theta) << '\n'
      << "max_theta = " << num(c.classify.max_theta) << '\n'
      << "band_width = " << num(c.extraction.band_width) << '\n'
      << "droplet_pitch = " << num(c.droplet_pitch) << '\n'
      << "floor_tolerance = " << num(c.floor_tolerance) << '\n'
      << "weld_tolerance = " << num(c.weld_tolerance) << '\n'
      << "index_cell_size = " << num(c.index_cell_size) << '\n'
      << "surface_min_height = " << num(c.surface.min_height) << '\n'
      << "surface_max_height = " << num(c.surface.max_height) << '\n'
      << "surface_min_area = " << num(c.surface.min_area) << '\n';
  for (const auto& r : c.routes) {
    out << "route = " << r.name << ' ' << num(r.start.x()) << ' ' << num(r.start.y()) << ' '
        << num(r.goal.x()) << ' ' << num(r.goal.y()) << '\n';
  }
  return out.str();
}

namespace {

class StageClock {
 public:
  explicit StageClock(std::vector<StageTiming>& sink) : sink_(sink) {}

  template <typename Fn>
  decltype(auto) run(std::string_view stage, Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    struct Record {
      StageClock& clock;
      std::string_view stage;
      std::chrono::steady_clock::time_point t0;
      ~Record() {
        clock.sink_.push_back(
            {std::string(stage),
             std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()});
      }
    } record{*this, stage, t0};
    try {
      return fn();
    } catch (const NoFloorFoundError&) {
      throw;
    } catch (const StageError&) {
      throw;
    } catch (const std::exception& e) {
      throw StageError(std::string(stage), e.what());
    }
  }

 private:
  std::vector<StageTiming>& sink_;
};

// A second band close to the floor and at least half its area hints at a split-level home.
bool looks_split_level(const TriangleMesh& mesh, const FloorEstimate& floor, const SurfaceParams& surface) {
  auto band_area = [&](const HeightBand& b) {
    double a = 0;
    for (FaceId f : b.faces) a += mesh.area(f);
    return a;
  };
  const double floor_area = band_area(floor.bands.front());
  for (std::size_t b = 1; b < floor.bands.size(); ++b) {
    if (floor.bands[b].mean_z >= floor.floor_z + surface.min_height) break;
    if (band_area(floor.bands[b]) >= 0.5 * floor_area) return true;
  }
  return false;
}

}  // namespace

PipelineResult run_pipeline(const TriangleMesh& mesh, const PipelineConfig& config, int threads) {
  config.validate();
  PipelineResult result;
  StageClock clock(result.timings);
  const std::size_t n = mesh.faces.size();
  FaceLabelMap& labels = result.labels;
  labels = FaceLabelMap(n);

  std::vector<std::uint8_t> active(n, 0);
  std::vector<FaceId> survivors;
  clock.run("cull", [&] {
    mesh.validate();
    const auto kept = cull_ceiling(mesh, config.extraction);
    std::vector<std::uint8_t> kept_mask(n, 0);
    for (FaceId f : kept) kept_mask[f] = 1;
    for (FaceId f = 0; f < n; ++f) {
      if (!kept_mask[f]) {
        labels.set(f, Label::CulledCeiling);
      } else if (is_degenerate(mesh.corner(f, 0), mesh.corner(f, 1), mesh.corner(f, 2))) {
        labels.set(f, Label::Other);
        ++result.degenerate_faces;
      } else {
        active[f] = 1;
        survivors.push_back(f);
      }
    }
  });

  clock.run("extract", [&] {
    try {
      auto candidates = horizontal_candidates(mesh, survivors, config.extraction);
      result.floor = estimate_floor(mesh, cluster_height_bands(mesh, candidates, config.extraction));
    } catch (const NoFloorFoundError&) {
      result.warnings.push_back("no-floor-found");
      return;
    }
    for (FaceId f : result.floor->removed_noise_faces) labels.set(f, Label::Noise);
    for (FaceId f : result.floor->floor_faces) labels.set(f, Label::Floor);
    if (looks_split_level(mesh, *result.floor, config.surface)) {
      result.warnings.push_back("possible-split-level");
    }
  });

  const BoundsXY bounds = bounds_xy(mesh);
  if (result.floor) {
    std::optional<SpatialIndexXY> built;
    clock.run("index", [&] { built.emplace(mesh, config.index_cell_size, survivors); });
    const SpatialIndexXY& index = *built;
    const DropletGrid droplets = DropletGrid::covering(bounds.min, bounds.max, config.droplet_pitch);
    clock.run("segment", [&] {
      result.segmentation = segment_floor(mesh, *result.floor, index, droplets, config.floor_tolerance, threads);
      for (FaceId f : result.segmentation.clear_floor_faces) labels.set(f, Label::ClearFloor);
    });
    clock.run("surfaces", [&] {
      result.segmentation.work_surfaces =
          detect_work_surfaces(mesh, result.floor->bands, *result.floor, index, droplets,
                               config.surface, config.floor_tolerance, threads);
      for (const auto& ws : result.segmentation.work_surfaces) {
        for (FaceId f : ws.faces) labels.set_if_unlabeled(f, Label::WorkSurface);
      }
      for (const auto& ws : result.segmentation.work_surfaces) {
        for (FaceId f : ws.obstructions) labels.set_if_unlabeled(f, Label::SurfaceClutter);
      }
    });
  }

  clock.run("classify", [&] {
    if (result.floor) {
      const FaceAdjacency adjacency = weld_and_adjacency(mesh, config.weld_tolerance, active);
      classify_floor_boundary(mesh, adjacency, labels, config.classify);
    }
    for (FaceId f = 0; f < n; ++f) labels.set_if_unlabeled(f, Label::Other);
  });

  clock.run("clearance", [&] {
    // Floor-level noise faces that droplets reached are walkable for the raster only.
    FaceLabelMap walkable = labels;
    for (FaceId f : result.segmentation.reached_noise_faces) walkable.set(f, Label::ClearFloor);
    const auto raster = rasterize_floor(mesh, walkable, config.clearance);
    result.grid = clearance_map(raster, config.clearance);
    result.edges = compliant_edges(result.grid);
  });

  clock.run("routes", [&] {
    for (const auto& request : config.routes) {
      RouteOutcome outcome{request, std::nullopt, {}};
      try {
        outcome.result = check_route(result.grid, request.start, request.goal);
      } catch (const InvalidEndpointError& e) {
        outcome.error = e.what();
      }
      result.routes.push_back(std::move(outcome));
    }
  });
  return result;
}

}  // namespace wsa
