#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "variastar/graphmap.hpp"
#include "variastar/heuristics.hpp"
#include "variastar/search.hpp"

namespace variastar {

// 3D (or 2D) occupancy given as dimensions plus a list of occupied cells.
struct VoxelMap {
  int width = 1;
  int height = 1;
  int depth = 1;
  double cell_size = 1.0;
  std::vector<Cell> occupied;
};

struct RandomMapSource {
  int width = 1;
  int height = 1;
  int depth = 1;
  double density = 0.0;
};

// Start/goal as written in a scenario: a cell for grids, a label for graphs.
using ScenarioNode = std::variant<Cell, std::string>;

struct Scenario {
  std::string name = "scenario";
  // Exactly one map source is set.
  std::optional<std::string> map_text;
  std::optional<std::filesystem::path> map_file;
  std::optional<VoxelMap> voxels;
  std::optional<RandomMapSource> random_map;
  std::optional<std::string> fixture;  // "figure2"

  ScenarioNode start;
  ScenarioNode goal;
  std::string algorithm = "astar";  // "astar" or "dijkstra"
  std::string heuristic = "euclidean";
  // Wraps a non-velocity heuristic into the velocity-weighted form.
  std::optional<Vec3> velocity;
  std::optional<Connectivity> connectivity;
  bool allow_reopen = true;
  std::optional<std::size_t> max_expansions;
  std::optional<std::uint64_t> seed;
  bool allow_same_endpoints = false;
  // Directory that relative map_file paths resolve against.
  std::filesystem::path base_dir;
};

// Parses scenario JSON (snake_case keys mirroring Scenario).
Scenario parse_scenario_json(std::string_view text, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& file);

struct BenchRow {
  std::string instance;
  std::string heuristic;
  double cost = 0.0;
  double optimal = 0.0;
  double ratio = 1.0;
  std::size_t expansions = 0;
  std::size_t reopenings = 0;
  double wall_ms = 0.0;

  friend bool operator==(const BenchRow&, const BenchRow&) = default;
};

struct BenchAggregate {
  std::string heuristic;
  std::size_t count = 0;
  double mean_ratio = 0.0;
  double median_ratio = 0.0;
  double mean_expansions = 0.0;
  double median_expansions = 0.0;
  double mean_reopenings = 0.0;
  double mean_wall_ms = 0.0;

  friend bool operator==(const BenchAggregate&, const BenchAggregate&) = default;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<BenchAggregate> aggregates;
  std::size_t instances = 0;
  std::size_t unreachable_excluded = 0;

  friend bool operator==(const BenchReport&, const BenchReport&) = default;
};

// Name of the oracle rows in every report.
inline constexpr std::string_view kOracleName = "dijkstra";

struct ScenarioOutcome {
  // The resolved domain; exactly one is set.
  std::optional<GridMap> map;
  std::optional<ExplicitGraph> graph;
  std::optional<Connectivity> connectivity;
  NodeRef start;
  NodeRef goal;
  HeuristicSpec heuristic;
  PlanResult result;
  BenchRow row;
};

ScenarioOutcome run_scenario(const Scenario& scenario);

struct BenchSuite {
  std::uint64_t seed_begin = 0;
  std::uint64_t seed_end = 0;  // inclusive
  int width = 16;
  int height = 16;
  int depth = 1;
  double density = 0.25;
  std::optional<Connectivity> connectivity;
  bool allow_reopen = true;
  // When false, wall_ms is reported as 0 so reports are byte-stable.
  bool measure_time = true;
  // 0: VARIASTAR_THREADS if set, else hardware concurrency.
  unsigned threads = 0;
};

// Solves every instance with the oracle and each heuristic. Instances use
// start (0,0,0) and goal at the far corner; unreachable ones are excluded
// and counted. Rows are ordered by seed, then oracle first, then the
// heuristics in the given order.
BenchReport compare_heuristics(const BenchSuite& suite,
                               const std::vector<std::string>& heuristics);

// Splits "zero,euclidean,velocity:euclidean:1,1,0:1" at the commas that
// start a new heuristic.
std::vector<std::string> split_heuristic_list(std::string_view text);

unsigned bench_threads(unsigned requested);

enum class ReportFormat { Csv, Json };

// CSV columns: instance,heuristic,cost,optimal,ratio,expansions,reopenings,wall_ms.
std::string emit_report(const BenchReport& report, ReportFormat format);
BenchReport parse_report_json(std::string_view text);

std::vector<BenchAggregate> aggregate_rows(const std::vector<BenchRow>& rows);

struct SvgOptions {
  int layer = 0;
  int cell_px = 20;
  // Markers for an empty path.
  std::optional<Cell> start;
  std::optional<Cell> goal;
};

std::string render_path_svg(const GridMap& map, const PlanResult& result,
                            const SvgOptions& opts = {});

}  // namespace variastar
