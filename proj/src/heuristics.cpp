#include "variastar/heuristics.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <cmath>

#include "text_util.hpp"
#include "variastar/error.hpp"

namespace variastar {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt3 = 1.7320508075688772;

HeuristicSpec widen(const BaseHeuristic& base) {
  return std::visit([](const auto& b) -> HeuristicSpec { return b; }, base);
}

double base_value(const BaseHeuristic& base, const HeuristicQuery& q);

const Vec3& need_pos(const std::optional<Vec3>& p) {
  if (!p) throw ConfigError("heuristic needs node positions the domain does not provide");
  return *p;
}

double base_value(const BaseHeuristic& base, const HeuristicQuery& q) {
  return std::visit(
      Overloaded{
          [](const ZeroHeuristic&) { return 0.0; },
          [&](const ManhattanHeuristic& m) {
            return h_manhattan(need_pos(q.node_pos), need_pos(q.goal_pos), m.scale);
          },
          [&](const EuclideanHeuristic&) {
            return h_euclidean(need_pos(q.node_pos), need_pos(q.goal_pos));
          },
          [&](const DiagonalHeuristic&) {
            return h_diagonal(need_pos(q.node_pos), need_pos(q.goal_pos));
          },
          [&](const TableHeuristic&) {
            if (!q.table_h) throw ConfigError("heuristic table lookup miss");
            return *q.table_h;
          },
      },
      base);
}

}  // namespace

void validate(const WeightParams& p) {
  if (!is_finite(p.velocity)) throw ConfigError("velocity must be finite");
  if (!(p.v_ref > 0.0) || !std::isfinite(p.v_ref)) {
    throw ConfigError("v_ref must be positive and finite");
  }
  if (!(p.w_min > 0.0) || !std::isfinite(p.w_min)) throw ConfigError("w_min must be positive");
  if (!(p.w_max >= p.w_min) || !std::isfinite(p.w_max)) {
    throw ConfigError("w_max must be finite and >= w_min");
  }
}

WeightParams make_weight_params(const Vec3& velocity, std::optional<double> v_ref,
                                double w_min, double w_max) {
  WeightParams p{velocity, v_ref.value_or(norm(velocity)), w_min, w_max};
  validate(p);
  return p;
}

double h_manhattan(const Vec3& a, const Vec3& b, double scale) {
  return scale * (std::abs(b.x - a.x) + std::abs(b.y - a.y) + std::abs(b.z - a.z));
}

double h_euclidean(const Vec3& a, const Vec3& b) { return distance(a, b); }

double h_diagonal(const Vec3& a, const Vec3& b) {
  std::array<double, 3> d = {std::abs(b.x - a.x), std::abs(b.y - a.y), std::abs(b.z - a.z)};
  std::sort(d.begin(), d.end(), std::greater<>());
  return d[0] + (kSqrt2 - 1.0) * d[1] + (kSqrt3 - kSqrt2) * d[2];
}

double velocity_weight(const Vec3& pos, const Vec3& goal, const WeightParams& params) {
  const Vec3 to_goal = goal - pos;
  const double len = norm(to_goal);
  if (len == 0.0) throw ConfigError("velocity weight is undefined at the goal");
  const double projected = dot(params.velocity, to_goal) / len;
  return std::clamp(projected / params.v_ref, params.w_min, params.w_max);
}

double evaluate(const HeuristicSpec& spec, const HeuristicQuery& q) {
  if (q.at_goal) return 0.0;
  return std::visit(
      Overloaded{
          [&](const VelocityWeightedHeuristic& v) {
            const double h = base_value(v.base, q);
            if (h == 0.0) return 0.0;
            return velocity_weight(need_pos(q.node_pos), need_pos(q.goal_pos), v.params) * h;
          },
          [&](const auto& base) { return base_value(BaseHeuristic{base}, q); },
      },
      spec);
}

double evaluate(const HeuristicSpec& spec, const Vec3& node, const Vec3& goal) {
  return evaluate(spec, HeuristicQuery{node, goal, std::nullopt, node == goal});
}

double evaluate(const HeuristicSpec& spec, const GridMap& map, const Cell& node,
                const Cell& goal) {
  if (!map.in_bounds(node) || !map.in_bounds(goal)) {
    throw InvalidNodeError("heuristic query outside the map");
  }
  return evaluate(spec, HeuristicQuery{cell_center(node), cell_center(goal), std::nullopt,
                                       node == goal});
}

double evaluate(const HeuristicSpec& spec, const ExplicitGraph& graph, GraphNodeId node,
                GraphNodeId goal) {
  HeuristicQuery q{graph.position(node), graph.position(goal), std::nullopt, node == goal};
  if (graph.has_h_table()) q.table_h = graph.h_table()[node.value];
  return evaluate(spec, q);
}

bool needs_table(const HeuristicSpec& spec) {
  if (std::holds_alternative<TableHeuristic>(spec)) return true;
  if (const auto* v = std::get_if<VelocityWeightedHeuristic>(&spec)) {
    return std::holds_alternative<TableHeuristic>(v->base);
  }
  return false;
}

bool needs_positions(const HeuristicSpec& spec) {
  return !std::holds_alternative<ZeroHeuristic>(spec) &&
         !std::holds_alternative<TableHeuristic>(spec);
}

void validate(const HeuristicSpec& spec) {
  if (const auto* m = std::get_if<ManhattanHeuristic>(&spec)) {
    if (!(m->scale > 0.0) || !std::isfinite(m->scale)) {
      throw ConfigError("manhattan scale must be positive");
    }
  }
  if (const auto* v = std::get_if<VelocityWeightedHeuristic>(&spec)) {
    validate(widen(v->base));
    validate(v->params);
  }
}

namespace {

BaseHeuristic parse_base(std::string_view text) {
  if (text == "zero") return ZeroHeuristic{};
  if (text == "euclidean") return EuclideanHeuristic{};
  if (text == "diagonal" || text == "octile") return DiagonalHeuristic{};
  if (text == "table") return TableHeuristic{};
  if (text == "manhattan") return ManhattanHeuristic{};
  if (text.substr(0, 10) == "manhattan:") {
    return ManhattanHeuristic{detail::parse_double(text.substr(10), "manhattan scale")};
  }
  throw ConfigError("unknown heuristic '" + std::string(text) + "'");
}

}  // namespace

HeuristicSpec parse_heuristic(std::string_view text) {
  HeuristicSpec spec;
  if (text.substr(0, 9) == "velocity:") {
    const auto parts = detail::split(text.substr(9), ':');
    // The velocity triple is the first token containing commas; the base
    // spec (which may itself contain ':') precedes it.
    std::size_t vel = parts.size();
    for (std::size_t n = 0; n < parts.size(); ++n) {
      if (parts[n].find(',') != std::string_view::npos) {
        vel = n;
        break;
      }
    }
    if (vel == 0 || vel == parts.size()) {
      throw ConfigError("expected velocity:<base>:vx,vy,vz[:v_ref[:w_min:w_max]]");
    }
    const std::string_view base_text(parts[0].data(),
                                      static_cast<std::size_t>(parts[vel - 1].data() +
                                                               parts[vel - 1].size() -
                                                               parts[0].data()));
    const auto comps = detail::split(parts[vel], ',');
    if (comps.size() != 3) throw ConfigError("velocity needs three components");
    const Vec3 v{detail::parse_double(comps[0], "velocity"),
                 detail::parse_double(comps[1], "velocity"),
                 detail::parse_double(comps[2], "velocity")};
    const std::size_t rest = parts.size() - vel - 1;
    if (rest != 0 && rest != 1 && rest != 3) {
      throw ConfigError("velocity spec takes v_ref, or v_ref:w_min:w_max");
    }
    std::optional<double> v_ref;
    double w_min = 0.1;
    double w_max = 10.0;
    if (rest >= 1) v_ref = detail::parse_double(parts[vel + 1], "v_ref");
    if (rest == 3) {
      w_min = detail::parse_double(parts[vel + 2], "w_min");
      w_max = detail::parse_double(parts[vel + 3], "w_max");
    }
    spec = VelocityWeightedHeuristic{parse_base(base_text),
                                     make_weight_params(v, v_ref, w_min, w_max)};
  } else {
    spec = widen(parse_base(text));
  }
  validate(spec);
  return spec;
}

std::string to_string(const HeuristicSpec& spec) {
  using detail::format_number;
  return std::visit(
      Overloaded{
          [](const ZeroHeuristic&) -> std::string { return "zero"; },
          [](const ManhattanHeuristic& m) -> std::string {
            return m.scale == 1.0 ? "manhattan" : "manhattan:" + format_number(m.scale);
          },
          [](const EuclideanHeuristic&) -> std::string { return "euclidean"; },
          [](const DiagonalHeuristic&) -> std::string { return "diagonal"; },
          [](const TableHeuristic&) -> std::string { return "table"; },
          [](const VelocityWeightedHeuristic& v) -> std::string {
            const WeightParams& p = v.params;
            return "velocity:" + to_string(widen(v.base)) + ":" + format_number(p.velocity.x) +
                   "," + format_number(p.velocity.y) + "," + format_number(p.velocity.z) +
                   ":" + format_number(p.v_ref) + ":" + format_number(p.w_min) + ":" +
                   format_number(p.w_max);
          },
      },
      spec);
}

}  // namespace variastar
