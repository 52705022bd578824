// variastar: plan on scenario files, benchmark heuristics, and run the
// geodesic and dynamics self-checks.

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "variastar/bench.hpp"
#include "variastar/dynamics.hpp"
#include "variastar/error.hpp"
#include "variastar/search.hpp"
#include "variastar/variational.hpp"

namespace {

using namespace variastar;
using nlohmann::ordered_json;

std::vector<double> parse_list(const std::string& text, std::size_t expected,
                               const std::string& what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string::npos) end = text.size();
    const std::string tok = text.substr(pos, end - pos);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tok.size() || !std::isfinite(v)) {
      throw ConfigError("invalid " + what + " '" + text + "'");
    }
    out.push_back(v);
    pos = end + 1;
  }
  if (out.size() != expected) {
    throw ConfigError(what + " needs " + std::to_string(expected) + " comma-separated values");
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << content;
}

ordered_json number_or_null(double v) {
  return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
}

int cmd_plan(const std::string& scenario_path, const std::string& svg_path,
             const std::string& trace_path, int layer) {
  const Scenario scenario = load_scenario(scenario_path);
  const ScenarioOutcome out = run_scenario(scenario);

  ordered_json j;
  j["scenario"] = scenario.name;
  j["status"] = std::string(to_string(out.result.status));
  j["heuristic"] = out.row.heuristic;
  j["cost"] = number_or_null(out.result.cost);
  j["optimal"] = number_or_null(out.row.optimal);
  j["expansions"] = out.result.expansions;
  j["reopenings"] = out.result.reopenings;
  ordered_json path = ordered_json::array();
  for (const NodeRef& ref : out.result.path) {
    if (const auto* c = std::get_if<Cell>(&ref)) {
      path.push_back(out.map->is_3d() ? ordered_json{c->i, c->j, c->k} : ordered_json{c->i, c->j});
    } else {
      path.push_back(out.graph->label(std::get<GraphNodeId>(ref)));
    }
  }
  j["path"] = std::move(path);
  std::cout << j.dump(2) << "\n";

  if (!trace_path.empty()) write_file(trace_path, trace_csv(out.result));
  if (!svg_path.empty()) {
    if (!out.map) throw ConfigError("--svg needs a grid scenario");
    SvgOptions opts;
    opts.layer = layer;
    opts.start = std::get<Cell>(out.start);
    opts.goal = std::get<Cell>(out.goal);
    write_file(svg_path, render_path_svg(*out.map, out.result, opts));
  }
  return out.result.status == PlanStatus::Aborted ? 3 : 0;
}

int cmd_bench(const std::string& seeds, const std::string& dims, double density,
              const std::vector<std::string>& heuristic_args, const std::string& connectivity,
              const std::string& out_path, const std::string& format, bool no_timing,
              unsigned threads) {
  BenchSuite suite;
  const auto dots = seeds.find("..");
  if (dots == std::string::npos) throw ConfigError("--seeds must look like A..B");
  try {
    suite.seed_begin = std::stoull(seeds.substr(0, dots));
    suite.seed_end = std::stoull(seeds.substr(dots + 2));
  } catch (const std::exception&) {
    throw ConfigError("invalid --seeds '" + seeds + "'");
  }
  std::vector<int> d;
  std::size_t pos = 0;
  while (pos <= dims.size()) {
    std::size_t end = dims.find('x', pos);
    if (end == std::string::npos) end = dims.size();
    try {
      d.push_back(std::stoi(dims.substr(pos, end - pos)));
    } catch (const std::exception&) {
      throw ConfigError("invalid --dims '" + dims + "'");
    }
    pos = end + 1;
  }
  if (d.size() < 2 || d.size() > 3) throw ConfigError("--dims must be WxH or WxHxD");
  suite.width = d[0];
  suite.height = d[1];
  suite.depth = d.size() == 3 ? d[2] : 1;
  suite.density = density;
  if (!connectivity.empty()) suite.connectivity = parse_connectivity(connectivity);
  suite.measure_time = !no_timing;
  suite.threads = threads;

  std::vector<std::string> heuristics;
  for (const std::string& arg : heuristic_args) {
    for (std::string& h : split_heuristic_list(arg)) heuristics.push_back(std::move(h));
  }
  const BenchReport report = compare_heuristics(suite, heuristics);
  const ReportFormat fmt = format == "json" ? ReportFormat::Json : ReportFormat::Csv;
  const std::string text = emit_report(report, fmt);
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    write_file(out_path, text);
  }
  for (const BenchAggregate& a : report.aggregates) {
    std::cerr << a.heuristic << ": mean expansions " << a.mean_expansions << ", mean ratio "
              << a.mean_ratio << "\n";
  }
  if (report.unreachable_excluded > 0) {
    std::cerr << report.unreachable_excluded << " unreachable instance(s) excluded\n";
  }
  return 0;
}

int cmd_geodesic(const std::string& from, const std::string& to, std::size_t points,
                 double amplitude) {
  const auto a = parse_list(from, 2, "--from");
  const auto b = parse_list(to, 2, "--to");
  const Vec3 pa{a[0], a[1], 0.0};
  const Vec3 pb{b[0], b[1], 0.0};
  if (pa == pb) throw ConfigError("--from and --to must differ");
  const DiscretePath init = perturbed_chord(pa, pb, points, amplitude * distance(pa, pb));
  const PathMinimization result = minimize_arclength(pa, pb, points, init);
  std::cout << path_csv(result.path);
  std::cerr << "length " << arc_length(result.path) << " (chord " << distance(pa, pb)
            << "), max deviation " << max_chord_deviation(result.path) << ", iterations "
            << result.report.iterations << "\n";
  return 0;
}

int cmd_dynamics(const std::string& v0_text, double t_end, double dt, double mass,
                 double gravity, const std::string& out_path) {
  const auto v = parse_list(v0_text, 3, "--v0");
  const MechanicsParams params{mass, gravity};
  const KinematicState initial{{0.0, 0.0, 0.0}, {v[0], v[1], v[2]}, 0.0};
  const Trajectory rk4 = integrate_rk4(initial, dt, t_end, params);

  double max_err = 0.0;
  double e0 = kinetic_energy(initial, params) + potential_energy(initial, params);
  double max_drift = 0.0;
  std::vector<KinematicState> exact;
  for (const KinematicState& s : rk4.samples()) {
    const KinematicState ref = analytic_state(initial, s.time, params);
    max_err = std::max(max_err, distance(ref.position, s.position));
    const double e = kinetic_energy(s, params) + potential_energy(s, params);
    max_drift = std::max(max_drift, std::abs(e - e0) / std::max(std::abs(e0), 1e-300));
    exact.push_back(ref);
  }
  ordered_json j;
  j["samples"] = rk4.size();
  j["max_position_error"] = max_err;
  j["max_relative_energy_drift"] = e0 == 0.0 ? ordered_json(nullptr) : ordered_json(max_drift);
  if (rk4.size() >= 3) {
    try {
      const EomResidual r = eom_residual(Trajectory(exact), params);
      j["eom_residual"] = {{"x", r.rx}, {"y", r.ry}, {"z", r.rz}};
    } catch (const ConfigError&) {
      j["eom_residual"] = nullptr;  // shortened final step breaks uniform spacing
    }
  }
  j["action"] = action(rk4, params);
  std::cout << j.dump(2) << "\n";
  if (!out_path.empty()) write_file(out_path, trajectory_csv(rk4));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variastar: velocity-weighted A* planning toolkit"};
  app.require_subcommand(1);

  auto* plan = app.add_subcommand("plan", "Plan a path for a scenario JSON file");
  std::string scenario_path, svg_path, trace_path;
  int layer = 0;
  plan->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  plan->add_option("--svg", svg_path, "Write an SVG rendering of the path");
  plan->add_option("--trace", trace_path, "Write the expansion trace as CSV");
  plan->add_option("--layer", layer, "z-layer rendered for 3D maps");

  auto* bench = app.add_subcommand("bench", "Compare heuristics against the Dijkstra oracle");
  std::string seeds, dims = "16x16", connectivity, out_path, format = "csv";
  double density = 0.25;
  std::vector<std::string> heuristics;
  bool no_timing = false;
  unsigned threads = 0;
  bench->add_option("--seeds", seeds, "Inclusive seed range A..B")->required();
  bench->add_option("--dims", dims, "Grid dimensions WxH or WxHxD");
  bench->add_option("--density", density, "Obstacle density in [0, 1)");
  bench->add_option("--heuristics", heuristics, "Heuristic specs (comma-separated or repeated)")
      ->required();
  bench->add_option("--connectivity", connectivity, "four, eight, six or twenty_six");
  bench->add_option("--out", out_path, "Report file (stdout if omitted)");
  bench->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  bench->add_flag("--no-timing", no_timing, "Report wall_ms as 0 for byte-stable output");
  bench->add_option("--threads", threads, "Worker threads (default: VARIASTAR_THREADS or all)");

  auto* geodesic = app.add_subcommand("geodesic", "Minimize discrete arc length between points");
  std::string from, to;
  std::size_t points = 33;
  double amplitude = 0.2;
  geodesic->add_option("--from", from, "Start point x,y")->required();
  geodesic->add_option("--to", to, "End point x,y")->required();
  geodesic->add_option("--points", points, "Number of waypoints");
  geodesic->add_option("--amplitude", amplitude, "Initial perturbation, relative to the chord");

  auto* dyn = app.add_subcommand("dynamics-check", "Compare RK4 against the analytic projectile");
  std::string v0;
  double t_end = 1.0, dt = 1e-3, mass = 1.0, gravity = 9.81;
  std::string traj_out;
  dyn->add_option("--v0", v0, "Initial velocity vx,vy,vz")->required();
  dyn->add_option("--t", t_end, "Duration in seconds");
  dyn->add_option("--dt", dt, "Step size in seconds");
  dyn->add_option("--mass", mass, "Mass in kg");
  dyn->add_option("--gravity", gravity, "Gravity in m/s^2");
  dyn->add_option("--out", traj_out, "Write the RK4 trajectory as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*plan) return cmd_plan(scenario_path, svg_path, trace_path, layer);
    if (*bench) {
      return cmd_bench(seeds, dims, density, heuristics, connectivity, out_path, format,
                       no_timing, threads);
    }
    if (*geodesic) return cmd_geodesic(from, to, points, amplitude);
    if (*dyn) return cmd_dynamics(v0, t_end, dt, mass, gravity, traj_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
