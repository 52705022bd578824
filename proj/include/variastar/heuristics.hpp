#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "variastar/graphmap.hpp"
#include "variastar/vec3.hpp"

namespace variastar {

struct ZeroHeuristic {
  friend bool operator==(const ZeroHeuristic&, const ZeroHeuristic&) = default;
};
struct ManhattanHeuristic {
  double scale = 1.0;
  friend bool operator==(const ManhattanHeuristic&, const ManhattanHeuristic&) = default;
};
struct EuclideanHeuristic {
  friend bool operator==(const EuclideanHeuristic&, const EuclideanHeuristic&) = default;
};
struct DiagonalHeuristic {
  friend bool operator==(const DiagonalHeuristic&, const DiagonalHeuristic&) = default;
};
// Looks h up in the graph's per-node table.
struct TableHeuristic {
  friend bool operator==(const TableHeuristic&, const TableHeuristic&) = default;
};

using BaseHeuristic = std::variant<ZeroHeuristic, ManhattanHeuristic, EuclideanHeuristic,
                                   DiagonalHeuristic, TableHeuristic>;

// Parameters of the velocity weight. The weight is the projection of
// `velocity` onto the node-to-goal direction, divided by `v_ref` and clamped
// to [w_min, w_max].
struct WeightParams {
  Vec3 velocity;
  double v_ref = 1.0;
  double w_min = 0.1;
  double w_max = 10.0;

  friend bool operator==(const WeightParams&, const WeightParams&) = default;
};

// Validated WeightParams. v_ref defaults to |velocity|, so a zero velocity
// without an explicit v_ref is rejected.
WeightParams make_weight_params(const Vec3& velocity, std::optional<double> v_ref = {},
                                double w_min = 0.1, double w_max = 10.0);
void validate(const WeightParams& params);

struct VelocityWeightedHeuristic {
  BaseHeuristic base;
  WeightParams params;
  friend bool operator==(const VelocityWeightedHeuristic&,
                         const VelocityWeightedHeuristic&) = default;
};

using HeuristicSpec =
    std::variant<ZeroHeuristic, ManhattanHeuristic, EuclideanHeuristic, DiagonalHeuristic,
                 TableHeuristic, VelocityWeightedHeuristic>;

double h_manhattan(const Vec3& a, const Vec3& b, double scale = 1.0);
double h_euclidean(const Vec3& a, const Vec3& b);
// Exact distance under unit 8- (2D) or 26-connected (3D) moves:
// d1 + (sqrt2 - 1) d2 + (sqrt3 - sqrt2) d3 with d1 >= d2 >= d3.
double h_diagonal(const Vec3& a, const Vec3& b);

// Throws ConfigError when pos == goal.
double velocity_weight(const Vec3& pos, const Vec3& goal, const WeightParams& params);

// Everything a heuristic may need about one node.
struct HeuristicQuery {
  std::optional<Vec3> node_pos;
  std::optional<Vec3> goal_pos;
  std::optional<double> table_h;
  bool at_goal = false;
};

double evaluate(const HeuristicSpec& spec, const HeuristicQuery& query);
double evaluate(const HeuristicSpec& spec, const Vec3& node, const Vec3& goal);
// Grid evaluation uses cell-unit coordinates.
double evaluate(const HeuristicSpec& spec, const GridMap& map, const Cell& node,
                const Cell& goal);
double evaluate(const HeuristicSpec& spec, const ExplicitGraph& graph, GraphNodeId node,
                GraphNodeId goal);

bool needs_table(const HeuristicSpec& spec);
bool needs_positions(const HeuristicSpec& spec);
void validate(const HeuristicSpec& spec);

// Canonical text: `zero`, `manhattan[:scale]`, `euclidean`, `diagonal`,
// `table`, `velocity:<base>:vx,vy,vz[:v_ref[:w_min:w_max]]`.
HeuristicSpec parse_heuristic(std::string_view text);
std::string to_string(const HeuristicSpec& spec);

}  // namespace variastar
