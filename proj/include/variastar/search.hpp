#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "variastar/graphmap.hpp"
#include "variastar/heuristics.hpp"

namespace variastar {

using NodeId = std::uint32_t;

struct DomainEdge {
  NodeId to = 0;
  double cost = 0.0;
};

/// Dense-index view of a search domain. Implementations are immutable and
/// may be shared by concurrent queries.
class SearchDomain {
 public:
  virtual ~SearchDomain() = default;

  virtual std::size_t node_count() const = 0;
  // Appends the successors of `node` to `out`.
  virtual void expand(NodeId node, std::vector<DomainEdge>& out) const = 0;
  virtual NodeId id_of(const NodeRef& ref) const = 0;
  virtual NodeRef ref_of(NodeId id) const = 0;
  virtual std::string label(NodeId id) const = 0;
  virtual HeuristicQuery heuristic_query(NodeId node, NodeId goal) const = 0;
  virtual bool has_table() const { return false; }
  virtual bool has_positions() const = 0;
  // Throws InvalidNodeError if `id` cannot be a start or goal.
  virtual void require_endpoint(NodeId id) const = 0;
};

class GridDomain final : public SearchDomain {
 public:
  GridDomain(const GridMap& map, Connectivity conn);

  const GridMap& map() const noexcept { return *map_; }
  Connectivity connectivity() const noexcept { return conn_; }

  std::size_t node_count() const override { return map_->cell_count(); }
  void expand(NodeId node, std::vector<DomainEdge>& out) const override;
  NodeId id_of(const NodeRef& ref) const override;
  NodeRef ref_of(NodeId id) const override;
  std::string label(NodeId id) const override;
  HeuristicQuery heuristic_query(NodeId node, NodeId goal) const override;
  bool has_positions() const override { return true; }
  void require_endpoint(NodeId id) const override;

 private:
  const GridMap* map_;
  Connectivity conn_;
};

class GraphDomain final : public SearchDomain {
 public:
  explicit GraphDomain(const ExplicitGraph& graph) : graph_(&graph) {}

  const ExplicitGraph& graph() const noexcept { return *graph_; }

  std::size_t node_count() const override { return graph_->node_count(); }
  void expand(NodeId node, std::vector<DomainEdge>& out) const override;
  NodeId id_of(const NodeRef& ref) const override;
  NodeRef ref_of(NodeId id) const override;
  std::string label(NodeId id) const override;
  HeuristicQuery heuristic_query(NodeId node, NodeId goal) const override;
  bool has_table() const override { return graph_->has_h_table(); }
  bool has_positions() const override;
  void require_endpoint(NodeId id) const override;

 private:
  const ExplicitGraph* graph_;
};

std::string node_label(const NodeRef& ref);

struct SearchOptions {
  // Grid overloads default to Eight (2D) or TwentySix (3D).
  std::optional<Connectivity> connectivity;
  bool allow_reopen = true;
  std::optional<std::size_t> max_expansions;
};

enum class PlanStatus { Found, Unreachable, Aborted };

std::string_view to_string(PlanStatus status);

// One node as seen at expansion (trace) or generation (discoveries) time.
// h is already weight-scaled; f == g + h.
struct TraceEntry {
  NodeRef node;
  std::string label;
  double g = 0.0;
  double h = 0.0;
  double f = 0.0;
  std::optional<NodeRef> parent;
  std::string parent_label;
};

struct PlanResult {
  PlanStatus status = PlanStatus::Unreachable;
  std::vector<NodeRef> path;
  // Sum of traversed edge costs; +inf unless Found.
  double cost = 0.0;
  std::size_t expansions = 0;
  std::size_t reopenings = 0;
  std::vector<TraceEntry> trace;
  // Every successful relaxation (g improvement), in generation order.
  std::vector<TraceEntry> discoveries;

  bool found() const noexcept { return status == PlanStatus::Found; }
};

/// Exact shortest path. Open list ordered by (g, insertion order).
PlanResult dijkstra(const SearchDomain& domain, const NodeRef& start, const NodeRef& goal,
                    const SearchOptions& opts = {});

/// Graph-search A*: repeatedly expands the open node of minimum
/// f = g + h, breaking ties by smaller h, then by insertion order. Stale
/// open entries are skipped lazily. A closed node whose g strictly improves
/// is reopened when opts.allow_reopen is set and the improvement exceeds
/// rounding (1e-12 relative).
PlanResult astar(const SearchDomain& domain, const NodeRef& start, const NodeRef& goal,
                 const HeuristicSpec& heuristic, const SearchOptions& opts = {});

/// A* with f = g + w(n) h(n), w the clamped velocity weight.
PlanResult astar_velocity(const SearchDomain& domain, const NodeRef& start,
                          const NodeRef& goal, const BaseHeuristic& base,
                          const WeightParams& params, const SearchOptions& opts = {});

PlanResult dijkstra(const GridMap& map, const Cell& start, const Cell& goal,
                    const SearchOptions& opts = {});
PlanResult astar(const GridMap& map, const Cell& start, const Cell& goal,
                 const HeuristicSpec& heuristic, const SearchOptions& opts = {});
PlanResult astar_velocity(const GridMap& map, const Cell& start, const Cell& goal,
                          const BaseHeuristic& base, const WeightParams& params,
                          const SearchOptions& opts = {});

Connectivity default_connectivity(const GridMap& map);

// Sum of edge costs along `path`; throws InvalidNodeError if a consecutive
// pair is not an edge of the domain.
double path_cost(const SearchDomain& domain, const std::vector<NodeRef>& path);

struct TraceRow {
  std::size_t step = 0;
  std::string node;
  double g = 0.0;
  double h = 0.0;
  double f = 0.0;
  std::string parent;
};

std::vector<TraceRow> expansion_trace(const PlanResult& result);
// CSV with header `step,node,g,h,f,parent`.
std::string trace_csv(const PlanResult& result);

}  // namespace variastar
