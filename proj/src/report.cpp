#include "wsa/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "wsa/error.hpp"
#include "wsa/obj_io.hpp"

namespace wsa {

using nlohmann::ordered_json;

CellColor face_color(const TriangleMesh& mesh, FaceId f, const ClearanceGrid& grid) {
  const GridFrame& frame = grid.frame;
  const Vec3 &a = mesh.corner(f, 0), &b = mesh.corner(f, 1), &c = mesh.corner(f, 2);
  const double xmin = std::min({a.x(), b.x(), c.x()}), xmax = std::max({a.x(), b.x(), c.x()});
  const double ymin = std::min({a.y(), b.y(), c.y()}), ymax = std::max({a.y(), b.y(), c.y()});
  const int c0 = std::max(0, int(std::floor((xmin - frame.origin.x()) / frame.pitch - 0.5)));
  const int c1 = std::min(frame.cols - 1, int(std::ceil((xmax - frame.origin.x()) / frame.pitch - 0.5)));
  const int r0 = std::max(0, int(std::floor((ymin - frame.origin.y()) / frame.pitch - 0.5)));
  const int r1 = std::min(frame.rows - 1, int(std::ceil((ymax - frame.origin.y()) / frame.pitch - 0.5)));

  std::array<std::size_t, 4> votes{};
  for (int r = r0; r <= r1; ++r) {
    for (int col = c0; col <= c1; ++col) {
      const GridCell cell{col, r};
      if (point_in_triangle_xy(a, b, c, frame.center(cell))) ++votes[std::size_t(grid.colors[frame.index(cell)])];
    }
  }
  // Most restrictive first so that ties keep it.
  constexpr std::array<CellColor, 4> order = {CellColor::Off, CellColor::Red, CellColor::Yellow, CellColor::Green};
  std::size_t best = 0;
  CellColor color = CellColor::Off;
  for (CellColor candidate : order) {
    if (votes[std::size_t(candidate)] > best) {
      best = votes[std::size_t(candidate)];
      color = candidate;
    }
  }
  if (best == 0) {
    const Vec3 centroid = mesh.centroid(f);
    if (auto cell = frame.locate(centroid.head<2>())) color = grid.colors[frame.index(*cell)];
  }
  return color == CellColor::Off ? CellColor::Red : color;
}

namespace {

std::string_view color_group(Label label, CellColor floor_color) {
  switch (label) {
    case Label::ClearFloor:
      switch (floor_color) {
        case CellColor::Green: return "floor_green";
        case CellColor::Yellow: return "floor_yellow";
        default: return "floor_red";
      }
    case Label::Floor: return "floor_obstructed";
    case Label::Noise: return "noise";
    case Label::WorkSurface: return "work_surface_green";
    case Label::SurfaceClutter: return "surface_clutter_purple";
    case Label::Clutter: return "clutter_orange";
    case Label::Furniture: return "furniture_gray";
    case Label::CulledCeiling: return "ceiling_culled";
    default: return "other_purple";
  }
}

}  // namespace

TriangleMesh colorize(const TriangleMesh& mesh, const FaceLabelMap& labels, const ClearanceGrid& grid) {
  if (labels.size() != mesh.faces.size()) throw InputMismatchError("label count differs from face count");
  TriangleMesh out;
  out.vertices = mesh.vertices;
  out.faces = mesh.faces;
  for (FaceId f = 0; f < mesh.faces.size(); ++f) {
    const Label l = labels[f];
    const CellColor c = l == Label::ClearFloor ? face_color(mesh, f, grid) : CellColor::Off;
    out.groups[std::string(color_group(l, c))].push_back(f);
  }
  return out;
}

// ---------------------------------------------------------------------------

WalkspaceReport build_report(const TriangleMesh& mesh, const PipelineConfig& config,
                             const PipelineResult& result) {
  WalkspaceReport r;
  r.parameters = config;
  r.vertices = mesh.vertices.size();
  r.faces = mesh.faces.size();
  r.degenerate_faces = result.degenerate_faces;
  if (result.floor) {
    r.floor_z = result.floor->floor_z;
  } else {
    r.status = "no-floor-found";
  }
  for (Label l : kAllLabels) {
    r.face_counts[std::string(label_name(l))] = 0;
    r.face_areas[std::string(label_name(l))] = 0.0;
  }
  for (FaceId f = 0; f < mesh.faces.size(); ++f) {
    const std::string name(label_name(result.labels[f]));
    ++r.face_counts[name];
    r.face_areas[name] += mesh.area(f);
  }

  const ClearanceGrid& g = result.grid;
  r.grid = g.frame;
  r.green_cells = g.count(CellColor::Green);
  r.yellow_cells = g.count(CellColor::Yellow);
  r.red_cells = g.count(CellColor::Red);
  r.green_area = double(r.green_cells) * g.cell_area();
  r.yellow_area = double(r.yellow_cells) * g.cell_area();
  r.red_area = double(r.red_cells) * g.cell_area();
  r.floor_area = double(r.green_cells + r.yellow_cells + r.red_cells) * g.cell_area();
  r.compliance_ratio = r.floor_area > 0 ? r.green_area / r.floor_area : 0.0;

  const SegmentationResult& seg = result.segmentation;
  r.droplet_sites = seg.droplet_sites;
  r.coverage_gaps = seg.coverage_gaps;
  r.obstructing_faces = seg.obstructing_faces.size();
  r.reached_noise_faces = seg.reached_noise_faces.size();
  if (result.floor) {
    r.unreached_floor_faces = result.floor->floor_faces.size() - seg.clear_floor_faces.size();
    for (const auto& band : result.floor->bands) r.bands.push_back({band.mean_z, band.faces.size()});
  }
  for (const auto& ws : seg.work_surfaces) {
    r.work_surfaces.push_back({ws.mean_z, ws.area, ws.faces.size(), ws.clear_faces.size(), ws.obstructions.size()});
  }

  r.edge_loops = result.edges.size();
  for (const auto& loop : result.edges) {
    for (std::size_t i = 0; i < loop.size(); ++i) r.edge_length += (loop[(i + 1) % loop.size()] - loop[i]).norm();
  }
  for (const auto& outcome : result.routes) {
    RouteSummary s{outcome.request.name, outcome.request.start, outcome.request.goal, "ok"};
    if (outcome.result) {
      s.exists = outcome.result->exists;
      s.length = outcome.result->length;
      s.limiting_clearance = outcome.result->limiting_clearance;
      s.cells = outcome.result->path.size();
    } else {
      s.status = "invalid-endpoint";
    }
    r.routes.push_back(std::move(s));
  }
  r.warnings = result.warnings;
  return r;
}

namespace {

ordered_json point(const Vec2& p) { return ordered_json::array({p.x(), p.y()}); }

Vec2 point_from(const ordered_json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

ordered_json config_json(const PipelineConfig& c) {
  ordered_json j;
  j["preset"] = preset_name(c.preset);
  j["safe_radius"] = c.clearance.safe_radius;
  j["red_radius"] = c.clearance.red_radius;
  j["sample_pitch"] = c.clearance.sample_pitch;
  j["ceiling_cutoff"] = c.extraction.ceiling_cutoff;
  j["min_theta"] = c.extraction.min_theta;
  j["max_theta"] = c.classify.max_theta;
  j["band_width"] = c.extraction.band_width;
  j["droplet_pitch"] = c.droplet_pitch;
  j["floor_tolerance"] = c.floor_tolerance;
  j["weld_tolerance"] = c.weld_tolerance;
  j["index_cell_size"] = c.index_cell_size;
  j["surface_min_height"] = c.surface.min_height;
  j["surface_max_height"] = c.surface.max_height;
  j["surface_min_area"] = c.surface.min_area;
  auto& routes = j["routes"] = ordered_json::array();
  for (const auto& r : c.routes) {
    routes.push_back({{"name", r.name}, {"start", point(r.start)}, {"goal", point(r.goal)}});
  }
  return j;
}

PipelineConfig config_from(const ordered_json& j) {
  PipelineConfig c;
  auto preset = parse_preset(j.at("preset").get<std::string>());
  if (!preset) throw Error("unknown preset in report");
  c.preset = *preset;
  c.clearance.safe_radius = j.at("safe_radius").get<double>();
  c.clearance.red_radius = j.at("red_radius").get<double>();
  c.clearance.sample_pitch = j.at("sample_pitch").get<double>();
  c.extraction.ceiling_cutoff = j.at("ceiling_cutoff").get<double>();
  c.extraction.min_theta = c.classify.min_theta = j.at("min_theta").get<double>();
  c.classify.max_theta = j.at("max_theta").get<double>();
  c.extraction.band_width = j.at("band_width").get<double>();
  c.droplet_pitch = j.at("droplet_pitch").get<double>();
  c.floor_tolerance = j.at("floor_tolerance").get<double>();
  c.weld_tolerance = j.at("weld_tolerance").get<double>();
  c.index_cell_size = j.at("index_cell_size").get<double>();
  c.surface.min_height = j.at("surface_min_height").get<double>();
  c.surface.max_height = j.at("surface_max_height").get<double>();
  c.surface.min_area = j.at("surface_min_area").get<double>();
  for (const auto& r : j.at("routes")) {
    c.routes.push_back({r.at("name").get<std::string>(), point_from(r.at("start")), point_from(r.at("goal"))});
  }
  return c;
}

}  // namespace

std::string report_to_json(const WalkspaceReport& r) {
  ordered_json j;
  j["tool"] = r.tool;
  j["version"] = r.version;
  j["status"] = r.status;
  j["parameters"] = config_json(r.parameters);
  j["floor_z"] = r.floor_z ? ordered_json(*r.floor_z) : ordered_json(nullptr);
  j["mesh"] = {{"vertices", r.vertices}, {"faces", r.faces}, {"degenerate_faces", r.degenerate_faces}};
  j["face_counts"] = r.face_counts;
  j["face_areas"] = r.face_areas;
  j["clearance"] = {
      {"grid", {{"origin", point(r.grid.origin)}, {"pitch", r.grid.pitch}, {"cols", r.grid.cols}, {"rows", r.grid.rows}}},
      {"cells", {{"green", r.green_cells}, {"yellow", r.yellow_cells}, {"red", r.red_cells}}},
      {"green_area", r.green_area},
      {"yellow_area", r.yellow_area},
      {"red_area", r.red_area},
      {"floor_area", r.floor_area},
      {"compliance_ratio", r.compliance_ratio},
  };
  j["droplets"] = {
      {"sites", r.droplet_sites},
      {"coverage_gaps", r.coverage_gaps},
      {"obstructing_faces", r.obstructing_faces},
      {"unreached_floor_faces", r.unreached_floor_faces},
      {"reached_noise_faces", r.reached_noise_faces},
  };
  auto& surfaces = j["work_surfaces"] = ordered_json::array();
  for (const auto& s : r.work_surfaces) {
    surfaces.push_back({{"mean_z", s.mean_z},
                        {"area", s.area},
                        {"faces", s.faces},
                        {"clear_faces", s.clear_faces},
                        {"obstructions", s.obstructions}});
  }
  auto& bands = j["bands"] = ordered_json::array();
  for (const auto& b : r.bands) bands.push_back({{"mean_z", b.mean_z}, {"faces", b.faces}});
  j["compliant_edges"] = {{"loops", r.edge_loops}, {"length", r.edge_length}};
  auto& routes = j["routes"] = ordered_json::array();
  for (const auto& s : r.routes) {
    routes.push_back({{"name", s.name},
                      {"start", point(s.start)},
                      {"goal", point(s.goal)},
                      {"status", s.status},
                      {"exists", s.exists},
                      {"length", s.length},
                      {"limiting_clearance", s.limiting_clearance},
                      {"cells", s.cells}});
  }
  j["warnings"] = r.warnings;
  return j.dump(2) + "\n";
}

WalkspaceReport report_from_json(std::string_view text) {
  WalkspaceReport r;
  try {
    const auto j = ordered_json::parse(text);
    r.tool = j.at("tool").get<std::string>();
    r.version = j.at("version").get<std::string>();
    r.status = j.at("status").get<std::string>();
    r.parameters = config_from(j.at("parameters"));
    if (!j.at("floor_z").is_null()) r.floor_z = j.at("floor_z").get<double>();
    const auto& mesh = j.at("mesh");
    r.vertices = mesh.at("vertices").get<std::size_t>();
    r.faces = mesh.at("faces").get<std::size_t>();
    r.degenerate_faces = mesh.at("degenerate_faces").get<std::size_t>();
    r.face_counts = j.at("face_counts").get<std::map<std::string, std::size_t>>();
    r.face_areas = j.at("face_areas").get<std::map<std::string, double>>();
    const auto& cl = j.at("clearance");
    const auto& grid = cl.at("grid");
    r.grid.origin = point_from(grid.at("origin"));
    r.grid.pitch = grid.at("pitch").get<double>();
    r.grid.cols = grid.at("cols").get<int>();
    r.grid.rows = grid.at("rows").get<int>();
    r.green_cells = cl.at("cells").at("green").get<std::size_t>();
    r.yellow_cells = cl.at("cells").at("yellow").get<std::size_t>();
    r.red_cells = cl.at("cells").at("red").get<std::size_t>();
    r.green_area = cl.at("green_area").get<double>();
    r.yellow_area = cl.at("yellow_area").get<double>();
    r.red_area = cl.at("red_area").get<double>();
    r.floor_area = cl.at("floor_area").get<double>();
    r.compliance_ratio = cl.at("compliance_ratio").get<double>();
    const auto& d = j.at("droplets");
    r.droplet_sites = d.at("sites").get<std::size_t>();
    r.coverage_gaps = d.at("coverage_gaps").get<std::size_t>();
    r.obstructing_faces = d.at("obstructing_faces").get<std::size_t>();
    r.unreached_floor_faces = d.at("unreached_floor_faces").get<std::size_t>();
    r.reached_noise_faces = d.at("reached_noise_faces").get<std::size_t>();
    for (const auto& s : j.at("work_surfaces")) {
      r.work_surfaces.push_back({s.at("mean_z").get<double>(), s.at("area").get<double>(),
                                 s.at("faces").get<std::size_t>(), s.at("clear_faces").get<std::size_t>(),
                                 s.at("obstructions").get<std::size_t>()});
    }
    for (const auto& b : j.at("bands")) r.bands.push_back({b.at("mean_z").get<double>(), b.at("faces").get<std::size_t>()});
    r.edge_loops = j.at("compliant_edges").at("loops").get<std::size_t>();
    r.edge_length = j.at("compliant_edges").at("length").get<double>();
    for (const auto& s : j.at("routes")) {
      r.routes.push_back({s.at("name").get<std::string>(), point_from(s.at("start")), point_from(s.at("goal")),
                          s.at("status").get<std::string>(), s.at("exists").get<bool>(),
                          s.at("length").get<double>(), s.at("limiting_clearance").get<double>(),
                          s.at("cells").get<std::size_t>()});
    }
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed report: ") + e.what());
  }
  return r;
}

bool operator==(const WalkspaceReport& a, const WalkspaceReport& b) {
  return report_to_json(a) == report_to_json(b);
}

// ---------------------------------------------------------------------------

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

void write_subset(const std::filesystem::path& path, const TriangleMesh& mesh, const FaceLabelMap& labels,
                  std::initializer_list<Label> wanted) {
  std::vector<FaceId> faces;
  for (FaceId f = 0; f < mesh.faces.size(); ++f) {
    if (std::find(wanted.begin(), wanted.end(), labels[f]) != wanted.end()) faces.push_back(f);
  }
  TriangleMesh sub = extract_faces(mesh, faces);
  // Keep the label grouping inside each sub-mesh.
  for (FaceId k = 0; k < faces.size(); ++k) sub.groups[std::string(label_name(labels[faces[k]]))].push_back(k);
  write_obj_file(sub, path);
}

}  // namespace

void write_outputs(const std::filesystem::path& dir, const TriangleMesh& mesh, const PipelineConfig& config,
                   const PipelineResult& result) {
  std::filesystem::create_directories(dir);
  TriangleMesh labeled;
  labeled.vertices = mesh.vertices;
  labeled.faces = mesh.faces;
  labeled.groups = result.labels.to_groups();
  write_obj_file(labeled, dir / "labeled.obj");
  write_obj_file(colorize(mesh, result.labels, result.grid), dir / "colored.obj");

  const FaceLabelMap& l = result.labels;
  write_subset(dir / "floor.obj", mesh, l, {Label::Floor, Label::ClearFloor, Label::Noise});
  write_subset(dir / "walkspace.obj", mesh, l, {Label::ClearFloor});
  write_subset(dir / "clutter.obj", mesh, l, {Label::Clutter});
  write_subset(dir / "work_surfaces.obj", mesh, l, {Label::WorkSurface, Label::SurfaceClutter});
  write_subset(dir / "other.obj", mesh, l, {Label::Other});
  write_subset(dir / "furniture.obj", mesh, l, {Label::Furniture});

  const double edge_z = result.floor ? result.floor->floor_z : 0.0;
  std::ostringstream edges;
  write_polyline_obj(result.edges, edge_z, "compliant_edges", edges);
  write_text(dir / "edges.obj", edges.str());

  std::ostringstream grid;
  write_grid_csv(result.grid, grid);
  write_text(dir / "grid.csv", grid.str());
  write_text(dir / "report.json", report_to_json(build_report(mesh, config, result)));
}

ClearanceGrid load_grid(const std::filesystem::path& dir) {
  std::ifstream report_in(dir / "report.json", std::ios::binary);
  if (!report_in) throw Error("cannot open " + (dir / "report.json").string());
  std::ostringstream text;
  text << report_in.rdbuf();
  const WalkspaceReport report = report_from_json(text.str());
  std::ifstream grid_in(dir / "grid.csv", std::ios::binary);
  if (!grid_in) throw Error("cannot open " + (dir / "grid.csv").string());
  return read_grid_csv(grid_in, report.grid, report.parameters.clearance);
}

}  // namespace wsa
