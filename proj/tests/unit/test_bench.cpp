#include <algorithm>
#include <cmath>
#include <string>

#include "doctest.h"
#include "variastar/bench.hpp"
#include "variastar/error.hpp"

using namespace variastar;

namespace {

const std::filesystem::path kData = VARIASTAR_TEST_DATA;

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("six-node scenario with the table heuristic") {
  const ScenarioOutcome out = run_scenario(load_scenario(kData / "figure2.json"));
  REQUIRE(out.result.found());
  CHECK(out.result.cost == 6.0);
  std::vector<std::string> path;
  for (const auto& ref : out.result.path) path.push_back(out.graph->label(std::get<GraphNodeId>(ref)));
  CHECK(path == std::vector<std::string>{"S", "A", "C", "G"});
  CHECK(out.row.heuristic == "table");
  CHECK(out.row.optimal == 6.0);
  CHECK(out.row.ratio == 1.0);
}

TEST_CASE("map_file scenario resolves relative to the scenario") {
  const ScenarioOutcome out = run_scenario(load_scenario(kData / "maze.json"));
  REQUIRE(out.result.found());
  // Around the right end of the upper wall, then back left along the bottom.
  CHECK(out.result.cost == doctest::Approx(out.row.optimal));
  CHECK(out.result.path.back() == NodeRef{Cell{0, 4, 0}});
}

TEST_CASE("voxel scenario routes through the gap") {
  const ScenarioOutcome out = run_scenario(load_scenario(kData / "voxels.json"));
  REQUIRE(out.result.found());
  CHECK(out.map->depth() == 3);
  CHECK(std::holds_alternative<VelocityWeightedHeuristic>(out.heuristic));
  bool through_gap = false;
  for (const auto& ref : out.result.path) through_gap |= std::get<Cell>(ref) == Cell{2, 2, 2};
  CHECK(through_gap);
  CHECK(out.result.cost <= 10.0 * out.row.optimal + 1e-9);
}

TEST_CASE("zero heuristic scenario equals dijkstra") {
  Scenario s = load_scenario(kData / "maze.json");
  s.heuristic = "zero";
  const ScenarioOutcome a = run_scenario(s);
  s.algorithm = "dijkstra";
  const ScenarioOutcome d = run_scenario(s);
  CHECK(a.result.cost == d.result.cost);
  CHECK(d.row.heuristic == "dijkstra");
}

TEST_CASE("scenario errors") {
  try {
    run_scenario(load_scenario(kData / "blocked_start.json"));
    FAIL("expected InvalidNodeError");
  } catch (const InvalidNodeError& e) {
    CHECK(std::string(e.what()).find("(0,0,0)") != std::string::npos);
  }
  CHECK_THROWS_AS(load_scenario(kData / "missing.json"), ConfigError);
  CHECK_THROWS_AS(parse_scenario_json("[1,2]"), ConfigError);
  CHECK_THROWS_AS(parse_scenario_json(R"({"start":[0,0],"goal":[1,1]})"), ConfigError);
  CHECK_THROWS_AS(
      parse_scenario_json(R"({"fixture":"figure2","map":"x","start":"S","goal":"G"})"),
      ConfigError);
  CHECK_THROWS_AS(run_scenario(parse_scenario_json(
                      R"({"fixture":"figure2","start":"S","goal":"S","heuristic":"table"})")),
                  ConfigError);
  CHECK_THROWS_AS(run_scenario(parse_scenario_json(
                      R"({"fixture":"figure2","start":"S","goal":"Q","heuristic":"table"})")),
                  InvalidNodeError);
  CHECK_THROWS_AS(run_scenario(parse_scenario_json(
                      R"({"fixture":"figure2","start":"S","goal":"G","heuristic":"bogus"})")),
                  ConfigError);
  CHECK_THROWS_AS(parse_scenario_json(R"({"random":{"dims":[4,4],"density":0.1},"start":[0,0],"goal":[3,3]})"),
                  ConfigError);
  const Scenario same = parse_scenario_json(
      R"({"fixture":"figure2","start":"S","goal":"S","heuristic":"table","allow_same_endpoints":true})");
  CHECK(run_scenario(same).result.cost == 0.0);
}

TEST_CASE("scenario runs are deterministic") {
  const Scenario s = parse_scenario_json(
      R"({"random":{"dims":[20,20],"density":0.25},"seed":4,"start":[0,0],"goal":[19,19],
          "heuristic":"velocity:euclidean:1,1,0:0.7:0.1:2"})");
  const ScenarioOutcome a = run_scenario(s);
  const ScenarioOutcome b = run_scenario(s);
  CHECK(trace_csv(a.result) == trace_csv(b.result));
}

TEST_CASE("compare_heuristics") {
  BenchSuite suite;
  suite.seed_begin = 0;
  suite.seed_end = 99;
  suite.width = suite.height = 16;
  suite.density = 0.25;
  suite.measure_time = false;
  const BenchReport r = compare_heuristics(suite, {"zero", "euclidean", "velocity:euclidean:1,1,0:0.7071:0.1:2"});
  CHECK(r.instances == 100);
  CHECK(r.rows.size() == (100 - r.unreachable_excluded) * 4);
  for (const BenchRow& row : r.rows) {
    CHECK(row.ratio >= 1.0 - 1e-9);
    if (row.heuristic == "euclidean" || row.heuristic == "zero" || row.heuristic == "dijkstra") {
      CHECK(row.ratio == 1.0);
    } else {
      CHECK(row.ratio <= 2.0 + 1e-9);
    }
  }
  CHECK(r.rows.front().heuristic == "dijkstra");
  REQUIRE(r.aggregates.size() == 4);
  CHECK(r.aggregates[0].heuristic == "dijkstra");

  suite.threads = 1;
  const BenchReport serial = compare_heuristics(suite, {"zero", "euclidean", "velocity:euclidean:1,1,0:0.7071:0.1:2"});
  suite.threads = 4;
  const BenchReport parallel = compare_heuristics(suite, {"zero", "euclidean", "velocity:euclidean:1,1,0:0.7071:0.1:2"});
  CHECK(serial == parallel);

  CHECK_THROWS_AS(compare_heuristics(suite, {}), ConfigError);
  CHECK_THROWS_AS(compare_heuristics(suite, {"nope"}), ConfigError);
}

TEST_CASE("emit_report CSV") {
  BenchReport empty;
  CHECK(emit_report(empty, ReportFormat::Csv) ==
        "instance,heuristic,cost,optimal,ratio,expansions,reopenings,wall_ms\n");
  BenchReport one;
  one.rows.push_back({"7", "velocity:euclidean:1,0,0:1:0.1:2", 3.0, 2.0, 1.5, 10, 1, 0.25});
  const std::string csv = emit_report(one, ReportFormat::Csv);
  CHECK(count(csv, "\n") == 2);
  CHECK(csv.substr(csv.find('\n') + 1) == "7,\"velocity:euclidean:1,0,0:1:0.1:2\",3,2,1.5,10,1,0.250\n");

  one.rows[0].ratio = 1.4;
  CHECK_THROWS_AS(emit_report(one, ReportFormat::Csv), Error);
}

TEST_CASE("emit_report JSON round-trips") {
  BenchSuite suite;
  suite.seed_end = 9;
  suite.width = suite.height = 12;
  BenchReport r = compare_heuristics(suite, {"euclidean", "diagonal"});
  const std::string text = emit_report(r, ReportFormat::Json);
  CHECK(parse_report_json(text) == r);
  CHECK(emit_report(parse_report_json(text), ReportFormat::Json) == text);
  CHECK_THROWS_AS(parse_report_json("{}"), ConfigError);
}

TEST_CASE("split_heuristic_list") {
  CHECK(split_heuristic_list("zero,euclidean,velocity:euclidean:1,1,0:1,diagonal") ==
        std::vector<std::string>{"zero", "euclidean", "velocity:euclidean:1,1,0:1", "diagonal"});
  CHECK(split_heuristic_list("manhattan:2") == std::vector<std::string>{"manhattan:2"});
}

TEST_CASE("render_path_svg") {
  const GridMap empty(3, 3);
  const PlanResult straight = astar(empty, {0, 1, 0}, {2, 1, 0}, EuclideanHeuristic{});
  const std::string svg = render_path_svg(empty, straight);
  CHECK(count(svg, "<polyline") == 1);
  CHECK(svg.find("points=\"10,30 30,30 50,30\"") != std::string::npos);
  CHECK(count(svg, "<rect class=\"cell\"") == 0);
  CHECK(count(svg, "class=\"start\"") == 1);
  CHECK(count(svg, "class=\"goal\"") == 1);

  GridMap one(3, 3);
  one.set_occupied({1, 0, 0});
  const PlanResult r = astar(one, {0, 0, 0}, {2, 0, 0}, EuclideanHeuristic{});
  const std::string a = render_path_svg(one, r);
  CHECK(count(a, "<rect class=\"cell\"") == 1);
  CHECK(a == render_path_svg(one, astar(one, {0, 0, 0}, {2, 0, 0}, EuclideanHeuristic{})));

  PlanResult none;
  SvgOptions opts;
  opts.start = Cell{0, 0, 0};
  opts.goal = Cell{2, 2, 0};
  const std::string markers = render_path_svg(empty, none, opts);
  CHECK(count(markers, "<polyline") == 0);
  CHECK(count(markers, "<circle") == 2);
  CHECK_THROWS_AS(render_path_svg(empty, none, SvgOptions{1, 20, {}, {}}), ConfigError);
}
