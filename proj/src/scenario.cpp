#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <type_traits>

#include "json.hpp"
#include "variastar/bench.hpp"
#include "variastar/error.hpp"

namespace variastar {

namespace {

using nlohmann::json;

Cell parse_cell(const json& j, std::string_view what) {
  if (!j.is_array() || j.size() < 2 || j.size() > 3) {
    throw ConfigError(std::string(what) + " must be [i, j] or [i, j, k]");
  }
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw ConfigError(std::string(what) + " indices must be integers");
  }
  return Cell{j[0].get<int>(), j[1].get<int>(), j.size() == 3 ? j[2].get<int>() : 0};
}

ScenarioNode parse_node(const json& j, std::string_view what) {
  if (j.is_string()) return j.get<std::string>();
  return parse_cell(j, what);
}

std::array<int, 3> parse_dims(const json& j) {
  if (!j.is_array() || j.size() < 2 || j.size() > 3) {
    throw ConfigError("dims must be [w, h] or [w, h, d]");
  }
  return {j[0].get<int>(), j[1].get<int>(), j.size() == 3 ? j[2].get<int>() : 1};
}

std::string describe(const Cell& c) {
  return "(" + std::to_string(c.i) + "," + std::to_string(c.j) + "," + std::to_string(c.k) + ")";
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Scenario parse_scenario_json(std::string_view text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("scenario must be a JSON object");

  Scenario s;
  s.base_dir = base_dir;
  try {
    s.name = j.value("name", s.name);
    int sources = 0;
    if (j.contains("map")) {
      s.map_text = j.at("map").get<std::string>();
      ++sources;
    }
    if (j.contains("map_file")) {
      s.map_file = std::filesystem::path(j.at("map_file").get<std::string>());
      ++sources;
    }
    if (j.contains("voxels")) {
      const json& v = j.at("voxels");
      const auto dims = parse_dims(v.at("dims"));
      VoxelMap vm{dims[0], dims[1], dims[2], v.value("cell_size", 1.0), {}};
      for (const json& c : v.value("occupied", json::array())) {
        vm.occupied.push_back(parse_cell(c, "voxel"));
      }
      s.voxels = std::move(vm);
      ++sources;
    }
    if (j.contains("random")) {
      const json& r = j.at("random");
      const auto dims = parse_dims(r.at("dims"));
      s.random_map = RandomMapSource{dims[0], dims[1], dims[2], r.at("density").get<double>()};
      ++sources;
    }
    if (j.contains("fixture")) {
      s.fixture = j.at("fixture").get<std::string>();
      ++sources;
    }
    if (sources != 1) {
      throw ConfigError(
          "scenario needs exactly one of map, map_file, voxels, random, fixture");
    }

    if (!j.contains("start") || !j.contains("goal")) {
      throw ConfigError("scenario needs start and goal");
    }
    s.start = parse_node(j.at("start"), "start");
    s.goal = parse_node(j.at("goal"), "goal");
    s.algorithm = j.value("algorithm", s.algorithm);
    s.heuristic = j.value("heuristic", s.heuristic);
    if (j.contains("velocity")) {
      const json& v = j.at("velocity");
      if (!v.is_array() || v.size() != 3) throw ConfigError("velocity must be [vx, vy, vz]");
      s.velocity = Vec3{v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
    }
    if (j.contains("connectivity")) {
      s.connectivity = parse_connectivity(j.at("connectivity").get<std::string>());
    }
    if (j.contains("options")) {
      const json& o = j.at("options");
      s.allow_reopen = o.value("allow_reopen", s.allow_reopen);
      if (o.contains("max_expansions")) {
        s.max_expansions = o.at("max_expansions").get<std::size_t>();
      }
    }
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    s.allow_same_endpoints = j.value("allow_same_endpoints", false);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid scenario field: ") + e.what());
  }
  if (s.algorithm != "astar" && s.algorithm != "dijkstra") {
    throw ConfigError("algorithm must be 'astar' or 'dijkstra'");
  }
  if (s.random_map && !s.seed) throw ConfigError("a random map needs a seed");
  return s;
}

Scenario load_scenario(const std::filesystem::path& file) {
  return parse_scenario_json(read_file(file), file.parent_path());
}

ScenarioOutcome run_scenario(const Scenario& s) {
  ScenarioOutcome out;
  if (s.fixture) {
    if (*s.fixture != "figure2") throw ConfigError("unknown fixture '" + *s.fixture + "'");
    out.graph = figure2_fixture().graph;
  } else if (s.map_text) {
    out.map = parse_map_text(*s.map_text);
  } else if (s.map_file) {
    const auto p = s.map_file->is_absolute() ? *s.map_file : s.base_dir / *s.map_file;
    out.map = parse_map_text(read_file(p));
  } else if (s.voxels) {
    const VoxelMap& v = *s.voxels;
    GridMap map(v.width, v.height, v.depth, v.cell_size);
    for (const Cell& c : v.occupied) map.set_occupied(c);
    out.map = std::move(map);
  } else if (s.random_map) {
    const RandomMapSource& r = *s.random_map;
    out.map = random_grid(*s.seed, r.width, r.height, r.depth, r.density);
  } else {
    throw ConfigError("scenario has no map source");
  }

  auto resolve = [&](const ScenarioNode& n, std::string_view what) -> NodeRef {
    if (out.graph) {
      const auto* label = std::get_if<std::string>(&n);
      if (label == nullptr) throw ConfigError(std::string(what) + " must be a node label");
      const auto id = out.graph->find(*label);
      if (!id) throw InvalidNodeError(std::string(what) + " node '" + *label + "' not found");
      return *id;
    }
    const auto* cell = std::get_if<Cell>(&n);
    if (cell == nullptr) throw ConfigError(std::string(what) + " must be a cell index");
    if (!out.map->in_bounds(*cell)) {
      throw InvalidNodeError(std::string(what) + " cell " + describe(*cell) + " is out of bounds");
    }
    if (out.map->occupied(*cell)) {
      throw InvalidNodeError(std::string(what) + " cell " + describe(*cell) + " is occupied");
    }
    return *cell;
  };
  out.start = resolve(s.start, "start");
  out.goal = resolve(s.goal, "goal");
  if (out.start == out.goal && !s.allow_same_endpoints) {
    throw ConfigError("start equals goal; set allow_same_endpoints to permit it");
  }

  out.heuristic = parse_heuristic(s.heuristic);
  if (s.velocity) {
    if (std::holds_alternative<VelocityWeightedHeuristic>(out.heuristic)) {
      throw ConfigError("velocity given twice: in the heuristic text and the scenario");
    }
    BaseHeuristic base = std::visit(
        [](const auto& h) -> BaseHeuristic {
          if constexpr (std::is_same_v<std::decay_t<decltype(h)>, VelocityWeightedHeuristic>) {
            return h.base;
          } else {
            return h;
          }
        },
        out.heuristic);
    out.heuristic = VelocityWeightedHeuristic{base, make_weight_params(*s.velocity)};
  }

  SearchOptions opts;
  opts.allow_reopen = s.allow_reopen;
  opts.max_expansions = s.max_expansions;

  std::unique_ptr<SearchDomain> domain;
  if (out.graph) {
    domain = std::make_unique<GraphDomain>(*out.graph);
  } else {
    out.connectivity = s.connectivity.value_or(default_connectivity(*out.map));
    opts.connectivity = out.connectivity;
    domain = std::make_unique<GridDomain>(*out.map, *out.connectivity);
  }

  const auto t0 = std::chrono::steady_clock::now();
  if (s.algorithm == "dijkstra") {
    out.result = dijkstra(*domain, out.start, out.goal, opts);
  } else if (const auto* v = std::get_if<VelocityWeightedHeuristic>(&out.heuristic)) {
    out.result = astar_velocity(*domain, out.start, out.goal, v->base, v->params, opts);
  } else {
    out.result = astar(*domain, out.start, out.goal, out.heuristic, opts);
  }
  const auto t1 = std::chrono::steady_clock::now();

  const PlanResult oracle = s.algorithm == "dijkstra"
                                ? out.result
                                : dijkstra(*domain, out.start, out.goal, SearchOptions{});
  BenchRow& row = out.row;
  row.instance = s.name;
  row.heuristic = s.algorithm == "dijkstra" ? std::string(kOracleName) : to_string(out.heuristic);
  row.cost = out.result.cost;
  row.optimal = oracle.cost;
  row.ratio = (row.cost == row.optimal) ? 1.0 : row.cost / row.optimal;
  row.expansions = out.result.expansions;
  row.reopenings = out.result.reopenings;
  row.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return out;
}

}  // namespace variastar
