#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "variastar/bench.hpp"
#include "variastar/dynamics.hpp"
#include "variastar/error.hpp"
#include "variastar/graphmap.hpp"
#include "variastar/heuristics.hpp"
#include "variastar/search.hpp"
#include "variastar/variational.hpp"

namespace py = pybind11;
using namespace variastar;

namespace {

Vec3 to_vec3(const py::sequence& s) {
  if (s.size() != 3) throw py::value_error("expected a 3-sequence");
  return {s[0].cast<double>(), s[1].cast<double>(), s[2].cast<double>()};
}

py::tuple vec3_tuple(const Vec3& v) { return py::make_tuple(v.x, v.y, v.z); }

Cell to_cell(const py::sequence& s) {
  if (s.size() != 2 && s.size() != 3) throw py::value_error("expected (i, j) or (i, j, k)");
  return {s[0].cast<int>(), s[1].cast<int>(), s.size() == 3 ? s[2].cast<int>() : 0};
}

py::tuple cell_tuple(const Cell& c) { return py::make_tuple(c.i, c.j, c.k); }

SearchOptions make_options(std::optional<std::string> connectivity, bool allow_reopen,
                           std::optional<std::size_t> max_expansions) {
  SearchOptions o;
  if (connectivity) o.connectivity = parse_connectivity(*connectivity);
  o.allow_reopen = allow_reopen;
  o.max_expansions = max_expansions;
  return o;
}

// PlanResult as a plain dict. Grid nodes become (i, j, k) tuples; graph
// nodes become their labels.
py::dict result_dict(const PlanResult& r, const ExplicitGraph* graph) {
  auto node = [&](const NodeRef& ref) -> py::object {
    if (const auto* c = std::get_if<Cell>(&ref)) return cell_tuple(*c);
    return py::str(graph->label(std::get<GraphNodeId>(ref)));
  };
  py::list path;
  for (const NodeRef& ref : r.path) path.append(node(ref));
  auto entries = [&](const std::vector<TraceEntry>& v) {
    py::list out;
    for (const TraceEntry& e : v) {
      py::dict d;
      d["node"] = node(e.node);
      d["g"] = e.g;
      d["h"] = e.h;
      d["f"] = e.f;
      d["parent"] = e.parent ? node(*e.parent) : py::none();
      out.append(d);
    }
    return out;
  };
  py::dict d;
  d["status"] = std::string(to_string(r.status));
  d["path"] = path;
  d["cost"] = r.cost;
  d["expansions"] = r.expansions;
  d["reopenings"] = r.reopenings;
  d["trace"] = entries(r.trace);
  d["discoveries"] = entries(r.discoveries);
  d["trace_csv"] = trace_csv(r);
  return d;
}

std::vector<KinematicState> states_of(const Trajectory& t) {
  return {t.samples().begin(), t.samples().end()};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Velocity-weighted A* planning, Lagrangian dynamics and discrete variational checks";

  auto base_error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base_error.ptr());
  py::register_exception<MapParseError>(m, "MapParseError", base_error.ptr());
  py::register_exception<InvalidNodeError>(m, "InvalidNodeError", base_error.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base_error.ptr());

  // graphmap
  py::class_<GridMap>(m, "GridMap")
      .def(py::init<int, int, int, double>(), py::arg("width"), py::arg("height"),
           py::arg("depth") = 1, py::arg("cell_size") = 1.0)
      .def_property_readonly("width", &GridMap::width)
      .def_property_readonly("height", &GridMap::height)
      .def_property_readonly("depth", &GridMap::depth)
      .def_property_readonly("cell_size", &GridMap::cell_size)
      .def("occupied", [](const GridMap& g, const py::sequence& c) { return g.occupied(to_cell(c)); })
      .def("set_occupied",
           [](GridMap& g, const py::sequence& c, bool v) { g.set_occupied(to_cell(c), v); },
           py::arg("cell"), py::arg("occupied") = true)
      .def("multiplier", [](const GridMap& g, const py::sequence& c) { return g.multiplier(to_cell(c)); })
      .def("set_multiplier",
           [](GridMap& g, const py::sequence& c, double v) { g.set_multiplier(to_cell(c), v); })
      .def("occupied_count", &GridMap::occupied_count)
      .def("__eq__", [](const GridMap& a, const GridMap& b) { return a == b; });

  m.def("parse_map_text", &parse_map_text, py::arg("text"));
  m.def("serialize_map_text", &serialize_map_text, py::arg("map"));
  m.def("random_grid", &random_grid, py::arg("seed"), py::arg("width"), py::arg("height"),
        py::arg("depth") = 1, py::arg("obstacle_density") = 0.0);
  m.def(
      "neighbors",
      [](const GridMap& map, const py::sequence& cell, const std::string& conn) {
        py::list out;
        for (const GridNeighbor& n : neighbors(map, to_cell(cell), parse_connectivity(conn))) {
          out.append(py::make_tuple(cell_tuple(n.cell), n.cost));
        }
        return out;
      },
      py::arg("map"), py::arg("cell"), py::arg("connectivity"));
  m.def(
      "world_coords",
      [](const GridMap& map, const py::sequence& cell) {
        return vec3_tuple(world_coords(map, to_cell(cell)));
      },
      py::arg("map"), py::arg("cell"));

  py::class_<ExplicitGraph>(m, "ExplicitGraph")
      .def(py::init<>())
      .def(
          "add_node",
          [](ExplicitGraph& g, std::string label, std::optional<py::sequence> pos) {
            std::optional<Vec3> p;
            if (pos) p = to_vec3(*pos);
            return g.add_node(std::move(label), p).value;
          },
          py::arg("label"), py::arg("position") = py::none())
      .def(
          "add_edge",
          [](ExplicitGraph& g, const std::string& from, const std::string& to, double cost) {
            const auto a = g.find(from);
            const auto b = g.find(to);
            if (!a || !b) throw InvalidNodeError("unknown node label");
            g.add_edge(*a, *b, cost);
          },
          py::arg("source"), py::arg("target"), py::arg("cost"))
      .def("set_h_table", &ExplicitGraph::set_h_table)
      .def_property_readonly("node_count", &ExplicitGraph::node_count)
      .def("labels", [](const ExplicitGraph& g) {
        std::vector<std::string> out;
        for (std::uint32_t n = 0; n < g.node_count(); ++n) out.push_back(g.label(GraphNodeId{n}));
        return out;
      });

  m.def("figure2_fixture", [] {
    Fixture f = figure2_fixture();
    const std::string s = f.graph.label(f.start);
    const std::string g = f.graph.label(f.goal);
    return py::make_tuple(std::move(f.graph), s, g);
  });

  // heuristics
  m.def(
      "h_manhattan",
      [](const py::sequence& a, const py::sequence& b, double scale) {
        return h_manhattan(to_vec3(a), to_vec3(b), scale);
      },
      py::arg("a"), py::arg("b"), py::arg("scale") = 1.0);
  m.def("h_euclidean", [](const py::sequence& a, const py::sequence& b) {
    return h_euclidean(to_vec3(a), to_vec3(b));
  });
  m.def("h_diagonal", [](const py::sequence& a, const py::sequence& b) {
    return h_diagonal(to_vec3(a), to_vec3(b));
  });
  m.def(
      "velocity_weight",
      [](const py::sequence& pos, const py::sequence& goal, const py::sequence& velocity,
         std::optional<double> v_ref, double w_min, double w_max) {
        return velocity_weight(to_vec3(pos), to_vec3(goal),
                               make_weight_params(to_vec3(velocity), v_ref, w_min, w_max));
      },
      py::arg("pos"), py::arg("goal"), py::arg("velocity"), py::arg("v_ref") = py::none(),
      py::arg("w_min") = 0.1, py::arg("w_max") = 10.0);
  m.def(
      "evaluate_heuristic",
      [](const std::string& spec, const py::sequence& node, const py::sequence& goal) {
        return evaluate(parse_heuristic(spec), to_vec3(node), to_vec3(goal));
      },
      py::arg("spec"), py::arg("node"), py::arg("goal"));
  m.def(
      "canonical_heuristic", [](const std::string& s) { return to_string(parse_heuristic(s)); },
      py::arg("spec"));

  // search
  m.def(
      "dijkstra",
      [](const GridMap& map, const py::sequence& start, const py::sequence& goal,
         std::optional<std::string> conn, std::optional<std::size_t> max_expansions) {
        return result_dict(
            dijkstra(map, to_cell(start), to_cell(goal), make_options(conn, true, max_expansions)),
            nullptr);
      },
      py::arg("map"), py::arg("start"), py::arg("goal"), py::arg("connectivity") = py::none(),
      py::arg("max_expansions") = py::none());
  m.def(
      "astar",
      [](const GridMap& map, const py::sequence& start, const py::sequence& goal,
         const std::string& heuristic, std::optional<std::string> conn, bool allow_reopen,
         std::optional<std::size_t> max_expansions) {
        return result_dict(astar(map, to_cell(start), to_cell(goal), parse_heuristic(heuristic),
                                 make_options(conn, allow_reopen, max_expansions)),
                           nullptr);
      },
      py::arg("map"), py::arg("start"), py::arg("goal"), py::arg("heuristic") = "euclidean",
      py::arg("connectivity") = py::none(), py::arg("allow_reopen") = true,
      py::arg("max_expansions") = py::none());
  m.def(
      "astar_velocity",
      [](const GridMap& map, const py::sequence& start, const py::sequence& goal,
         const std::string& base, const py::sequence& velocity, std::optional<double> v_ref,
         double w_min, double w_max, std::optional<std::string> conn, bool allow_reopen) {
        const HeuristicSpec spec = parse_heuristic(base);
        if (std::holds_alternative<VelocityWeightedHeuristic>(spec)) {
          throw ConfigError("base heuristic must not be velocity-weighted");
        }
        const BaseHeuristic b = std::visit(
            [](const auto& h) -> BaseHeuristic {
              if constexpr (std::is_same_v<std::decay_t<decltype(h)>, VelocityWeightedHeuristic>) {
                return h.base;
              } else {
                return h;
              }
            },
            spec);
        return result_dict(
            astar_velocity(map, to_cell(start), to_cell(goal), b,
                           make_weight_params(to_vec3(velocity), v_ref, w_min, w_max),
                           make_options(conn, allow_reopen, std::nullopt)),
            nullptr);
      },
      py::arg("map"), py::arg("start"), py::arg("goal"), py::arg("base"), py::arg("velocity"),
      py::arg("v_ref") = py::none(), py::arg("w_min") = 0.1, py::arg("w_max") = 10.0,
      py::arg("connectivity") = py::none(), py::arg("allow_reopen") = true);
  m.def(
      "astar_graph",
      [](const ExplicitGraph& graph, const std::string& start, const std::string& goal,
         const std::string& heuristic) {
        const auto s = graph.find(start);
        const auto g = graph.find(goal);
        if (!s || !g) throw InvalidNodeError("unknown node label");
        const GraphDomain domain(graph);
        return result_dict(astar(domain, *s, *g, parse_heuristic(heuristic)), &graph);
      },
      py::arg("graph"), py::arg("start"), py::arg("goal"), py::arg("heuristic") = "table");
  m.def(
      "dijkstra_graph",
      [](const ExplicitGraph& graph, const std::string& start, const std::string& goal) {
        const auto s = graph.find(start);
        const auto g = graph.find(goal);
        if (!s || !g) throw InvalidNodeError("unknown node label");
        const GraphDomain domain(graph);
        return result_dict(dijkstra(domain, *s, *g), &graph);
      },
      py::arg("graph"), py::arg("start"), py::arg("goal"));

  // dynamics
  py::class_<MechanicsParams>(m, "MechanicsParams")
      .def(py::init([](double mass, double gravity) {
             MechanicsParams p{mass, gravity};
             validate(p);
             return p;
           }),
           py::arg("mass") = 1.0, py::arg("gravity") = 9.81)
      .def_readwrite("mass", &MechanicsParams::mass)
      .def_readwrite("gravity", &MechanicsParams::gravity);

  py::class_<KinematicState>(m, "KinematicState")
      .def(py::init([](const py::sequence& pos, const py::sequence& vel, double t) {
             return KinematicState{to_vec3(pos), to_vec3(vel), t};
           }),
           py::arg("position"), py::arg("velocity"), py::arg("time") = 0.0)
      .def_property_readonly("position", [](const KinematicState& s) { return vec3_tuple(s.position); })
      .def_property_readonly("velocity", [](const KinematicState& s) { return vec3_tuple(s.velocity); })
      .def_readonly("time", &KinematicState::time);

  m.def("lagrangian", &lagrangian, py::arg("state"), py::arg("params") = MechanicsParams{});
  m.def(
      "action",
      [](std::vector<KinematicState> states, const MechanicsParams& p) {
        return action(Trajectory(std::move(states)), p);
      },
      py::arg("states"), py::arg("params") = MechanicsParams{});
  m.def("analytic_state", &analytic_state, py::arg("initial"), py::arg("t"),
        py::arg("params") = MechanicsParams{});
  m.def(
      "integrate_rk4",
      [](const KinematicState& init, double dt, double t_end, const MechanicsParams& p) {
        return states_of(integrate_rk4(init, dt, t_end, p));
      },
      py::arg("initial"), py::arg("dt"), py::arg("t_end"), py::arg("params") = MechanicsParams{});
  m.def(
      "resultant_velocity_toward",
      [](const KinematicState& s, const py::sequence& goal) {
        return resultant_velocity_toward(s, to_vec3(goal));
      },
      py::arg("state"), py::arg("goal"));
  m.def(
      "eom_residual",
      [](std::vector<KinematicState> states, const MechanicsParams& p) {
        const EomResidual r = eom_residual(Trajectory(std::move(states)), p);
        return py::make_tuple(r.rx, r.ry, r.rz);
      },
      py::arg("states"), py::arg("params") = MechanicsParams{});

  // variational
  m.def(
      "arc_length",
      [](const std::vector<std::vector<double>>& pts) {
        std::vector<Vec3> v;
        for (const auto& p : pts) {
          if (p.size() != 2 && p.size() != 3) throw py::value_error("points must be 2D or 3D");
          v.push_back({p[0], p[1], p.size() == 3 ? p[2] : 0.0});
        }
        return arc_length(v);
      },
      py::arg("points"));
  m.def(
      "minimize_arclength",
      [](const py::sequence& a, const py::sequence& b, std::size_t n, double amplitude,
         double tol, std::size_t max_iter) {
        const Vec3 pa = to_vec3(a);
        const Vec3 pb = to_vec3(b);
        MinimizeOptions opts;
        opts.tol = tol;
        opts.max_iter = max_iter;
        const auto res = minimize_arclength(
            pa, pb, n, perturbed_chord(pa, pb, n, amplitude * distance(pa, pb)), opts);
        py::list pts;
        for (const Vec3& p : res.path.waypoints()) pts.append(vec3_tuple(p));
        py::dict d;
        d["points"] = pts;
        d["length"] = arc_length(res.path);
        d["max_deviation"] = max_chord_deviation(res.path);
        d["iterations"] = res.report.iterations;
        d["objective_history"] = res.report.objective_history;
        return d;
      },
      py::arg("a"), py::arg("b"), py::arg("n_points") = 33, py::arg("amplitude") = 0.2,
      py::arg("tol") = 1e-9, py::arg("max_iter") = 100000);
  m.def(
      "euler_residual",
      [](const std::vector<double>& xs, const std::vector<double>& ys) {
        if (xs.size() != ys.size()) throw py::value_error("xs and ys differ in length");
        std::vector<CurveSample> s;
        for (std::size_t n = 0; n < xs.size(); ++n) s.push_back({xs[n], ys[n]});
        return euler_residual(s);
      },
      py::arg("xs"), py::arg("ys"));
  m.def(
      "minimize_action",
      [](double t0, const py::sequence& p0, double t1, const py::sequence& p1, std::size_t n,
         const MechanicsParams& params) {
        const auto res = minimize_action({t0, to_vec3(p0)}, {t1, to_vec3(p1)}, n, params);
        return states_of(res.trajectory);
      },
      py::arg("t0"), py::arg("p0"), py::arg("t1"), py::arg("p1"), py::arg("n_points") = 33,
      py::arg("params") = MechanicsParams{});

  // benchmark and scenarios
  m.def(
      "compare_heuristics",
      [](std::uint64_t seed_begin, std::uint64_t seed_end, const std::vector<int>& dims,
         double density, const std::vector<std::string>& heuristics,
         std::optional<std::string> conn, bool measure_time, const std::string& format) {
        if (dims.size() < 2 || dims.size() > 3) throw py::value_error("dims must be (w, h[, d])");
        BenchSuite suite;
        suite.seed_begin = seed_begin;
        suite.seed_end = seed_end;
        suite.width = dims[0];
        suite.height = dims[1];
        suite.depth = dims.size() == 3 ? dims[2] : 1;
        suite.density = density;
        if (conn) suite.connectivity = parse_connectivity(*conn);
        suite.measure_time = measure_time;
        return emit_report(compare_heuristics(suite, heuristics),
                           format == "json" ? ReportFormat::Json : ReportFormat::Csv);
      },
      py::arg("seed_begin"), py::arg("seed_end"), py::arg("dims"), py::arg("density"),
      py::arg("heuristics"), py::arg("connectivity") = py::none(),
      py::arg("measure_time") = false, py::arg("format") = "csv");
  m.def(
      "run_scenario_json",
      [](const std::string& text, const std::filesystem::path& base_dir) {
        const ScenarioOutcome out = run_scenario(parse_scenario_json(text, base_dir));
        py::dict d = result_dict(out.result, out.graph ? &*out.graph : nullptr);
        d["heuristic"] = out.row.heuristic;
        d["optimal"] = out.row.optimal;
        if (out.map) {
          SvgOptions opts;
          opts.start = std::get<Cell>(out.start);
          opts.goal = std::get<Cell>(out.goal);
          d["svg"] = render_path_svg(*out.map, out.result, opts);
        }
        return d;
      },
      py::arg("text"), py::arg("base_dir") = std::filesystem::path{});
}
