// wsa: walking-space analysis of indoor triangle-mesh scans.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "wsa/error.hpp"
#include "wsa/obj_io.hpp"
#include "wsa/pipeline.hpp"
#include "wsa/report.hpp"
#include "wsa/scenegen.hpp"

namespace {

using Clock = std::chrono::steady_clock;

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw wsa::Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct AnalyzeArgs {
  std::string input;
  std::string config;
  std::string preset;
  std::string out = "wsa_out";
  int threads = 1;
};

int cmd_analyze(const AnalyzeArgs& args) {
  wsa::PipelineConfig config = args.config.empty() ? wsa::PipelineConfig{} : wsa::read_config_file(args.config);
  if (!args.preset.empty()) config.use_preset(*wsa::parse_preset(args.preset));

  wsa::TriangleMesh mesh;
  try {
    mesh = wsa::read_obj_file(args.input);
  } catch (const wsa::ParseError& e) {
    throw wsa::Error(args.input + ": " + e.what());
  }
  const wsa::PipelineResult result = wsa::run_pipeline(mesh, config, args.threads);
  wsa::write_outputs(args.out, mesh, config, result);

  const wsa::WalkspaceReport report = wsa::build_report(mesh, config, result);
  std::printf("faces            %zu\n", report.faces);
  if (report.floor_z) {
    std::printf("floor_z          %.4f m\n", *report.floor_z);
  } else {
    std::printf("floor_z          none\n");
  }
  std::printf("clear floor      %.3f m^2\n", report.floor_area);
  std::printf("green / yellow / red  %.3f / %.3f / %.3f m^2\n", report.green_area, report.yellow_area,
              report.red_area);
  std::printf("compliance ratio %.4f (%s)\n", report.compliance_ratio,
              std::string(wsa::preset_name(config.preset)).c_str());
  for (const auto& r : report.routes) {
    if (r.status != "ok") {
      std::printf("route %-10s invalid endpoint\n", r.name.c_str());
    } else {
      std::printf("route %-10s %s length %.3f m limiting clearance %.3f m\n", r.name.c_str(),
                  r.exists ? "exists" : "none", r.length, r.limiting_clearance);
    }
  }
  for (const auto& w : report.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  std::printf("outputs written to %s\n", args.out.c_str());
  return 0;
}

int cmd_route(const std::string& dir, const std::vector<double>& coords) {
  const wsa::ClearanceGrid grid = wsa::load_grid(dir);
  const wsa::RouteResult route = wsa::check_route(grid, {coords[0], coords[1]}, {coords[2], coords[3]});
  if (!route.exists) {
    std::printf("route: none\n");
    return 2;
  }
  std::printf("route: exists\nlength: %.3f m\nlimiting clearance: %.3f m\ncells: %zu\n", route.length,
              route.limiting_clearance, route.path.size());
  return 0;
}

int cmd_gen(const std::string& spec_path, std::uint64_t seed, const std::string& out) {
  const wsa::SceneSpec spec = wsa::parse_scene_spec(read_text(spec_path));
  const wsa::GeneratedScene scene = wsa::generate_scene(spec, seed);
  std::filesystem::create_directories(out);
  wsa::write_obj_file(scene.mesh, std::filesystem::path(out) / "scene.obj");
  std::ofstream truth(std::filesystem::path(out) / "truth.json", std::ios::binary);
  truth << wsa::truth_to_json(scene.truth) << '\n';
  if (!truth) throw wsa::Error("cannot write truth.json");
  std::printf("%zu faces, %zu vertices written to %s\n", scene.mesh.faces.size(), scene.mesh.vertices.size(),
              out.c_str());
  return 0;
}

int cmd_eval(const std::string& dir, const std::string& truth_path, bool as_json) {
  const wsa::TriangleMesh labeled = wsa::read_obj_file(std::filesystem::path(dir) / "labeled.obj");
  const wsa::FaceLabelMap predicted = wsa::FaceLabelMap::from_groups(labeled);
  const wsa::GroundTruth truth = wsa::truth_from_json(read_text(truth_path));
  const wsa::ClearanceGrid grid = wsa::load_grid(dir);
  const wsa::Evaluation ev = wsa::evaluate_labels(predicted, truth, &grid);

  if (as_json) {
    nlohmann::ordered_json j;
    for (const auto& [name, m] : ev.classes) {
      j["classes"][name] = {{"precision", m.precision},
                            {"recall", m.recall},
                            {"precision_undefined", m.precision_undefined},
                            {"recall_undefined", m.recall_undefined},
                            {"true_positive", m.true_positive},
                            {"false_positive", m.false_positive},
                            {"false_negative", m.false_negative}};
    }
    j["green_iou"] = ev.green_iou.value_or(0.0);
    std::printf("%s\n", j.dump(2).c_str());
    return 0;
  }
  std::printf("%-16s %9s %9s %7s %7s %7s\n", "class", "precision", "recall", "tp", "fp", "fn");
  for (const auto& [name, m] : ev.classes) {
    std::printf("%-16s %8.4f%s %8.4f%s %7zu %7zu %7zu\n", name.c_str(), m.precision,
                m.precision_undefined ? "*" : " ", m.recall, m.recall_undefined ? "*" : " ", m.true_positive,
                m.false_positive, m.false_negative);
  }
  std::printf("green IoU        %.4f (%zu predicted, %zu analytic cells)\n", ev.green_iou.value_or(0.0),
              ev.green_predicted, ev.green_truth);
  std::printf("* undefined, reported as 0\n");
  return 0;
}

int cmd_bench(const std::vector<std::size_t>& sizes, int threads) {
  std::printf("%-10s %8s", "faces", "gen");
  for (auto stage : wsa::kStageNames) std::printf(" %9s", std::string(stage).c_str());
  std::printf(" %9s %9s\n", "outputs", "total");
  const auto tmp = std::filesystem::temp_directory_path() / "wsa_bench";
  for (std::size_t target : sizes) {
    auto t0 = Clock::now();
    const wsa::SceneSpec spec = wsa::benchmark_home_for_faces(target);
    const wsa::GeneratedScene scene = wsa::generate_scene(spec, 0);
    const double gen = seconds_since(t0);

    const wsa::PipelineConfig config;
    t0 = Clock::now();
    const wsa::PipelineResult result = wsa::run_pipeline(scene.mesh, config, threads);
    const auto t1 = Clock::now();
    wsa::write_outputs(tmp, scene.mesh, config, result);
    const double outputs = seconds_since(t1);
    const double total = seconds_since(t0);

    std::printf("%-10zu %8.3f", scene.mesh.faces.size(), gen);
    for (auto stage : wsa::kStageNames) {
      double s = 0;
      for (const auto& t : result.timings) {
        if (t.stage == stage) s += t.seconds;
      }
      std::printf(" %9.3f", s);
    }
    std::printf(" %9.3f %9.3f\n", outputs, total);
  }
  std::filesystem::remove_all(tmp);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Walking-space analysis for indoor mesh scans"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(wsa::kToolVersion));

  AnalyzeArgs analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Segment a mesh and map compliant walking space");
  analyze_cmd->add_option("input", analyze.input, "Input OBJ mesh")->required()->check(CLI::ExistingFile);
  analyze_cmd->add_option("--config", analyze.config, "Config file (key = value)")->check(CLI::ExistingFile);
  analyze_cmd->add_option("--preset", analyze.preset, "Clearance standard")
      ->check(CLI::IsMember({"osha", "ada"}));
  analyze_cmd->add_option("--out", analyze.out, "Output directory")->capture_default_str();
  analyze_cmd->add_option("--threads", analyze.threads, "Worker threads")->check(CLI::PositiveNumber);

  std::string route_dir;
  std::vector<double> route_coords;
  auto* route_cmd = app.add_subcommand("route", "Check for a compliant route in an analysis");
  route_cmd->add_option("dir", route_dir, "Analysis output directory")->required()->check(CLI::ExistingDirectory);
  route_cmd->add_option("coords", route_coords, "Start and goal: SX SY GX GY")->required()->expected(4);

  std::string gen_spec, gen_out = "scene";
  std::uint64_t gen_seed = 0;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic scene with ground truth");
  gen_cmd->add_option("spec", gen_spec, "Scene spec file")->required()->check(CLI::ExistingFile);
  gen_cmd->add_option("--seed", gen_seed, "Noise seed")->capture_default_str();
  gen_cmd->add_option("--out", gen_out, "Output directory")->capture_default_str();

  std::string eval_dir, eval_truth;
  bool eval_json = false;
  auto* eval_cmd = app.add_subcommand("eval", "Score an analysis against ground truth");
  eval_cmd->add_option("dir", eval_dir, "Analysis output directory")->required()->check(CLI::ExistingDirectory);
  eval_cmd->add_option("truth", eval_truth, "truth.json from gen")->required()->check(CLI::ExistingFile);
  eval_cmd->add_flag("--json", eval_json, "Print metrics as JSON");

  std::vector<std::size_t> bench_faces = {50000, 200000, 500000};
  int bench_threads = 1;
  auto* bench_cmd = app.add_subcommand("bench", "Time every stage on synthetic homes");
  bench_cmd->add_option("--faces", bench_faces, "Target face counts")->delimiter(',');
  bench_cmd->add_option("--threads", bench_threads, "Worker threads")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze_cmd) return cmd_analyze(analyze);
    if (*route_cmd) return cmd_route(route_dir, route_coords);
    if (*gen_cmd) return cmd_gen(gen_spec, gen_seed, gen_out);
    if (*eval_cmd) return cmd_eval(eval_dir, eval_truth, eval_json);
    if (*bench_cmd) return cmd_bench(bench_faces, bench_threads);
  } catch (const wsa::SpecValidationError& e) {
    std::fprintf(stderr, "error: invalid scene spec\n");
    for (const auto& v : e.violations()) std::fprintf(stderr, "  - %s\n", v.c_str());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
