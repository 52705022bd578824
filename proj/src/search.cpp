#include "variastar/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "text_util.hpp"
#include "variastar/error.hpp"

namespace variastar {

namespace {

constexpr NodeId kNoParent = std::numeric_limits<NodeId>::max();
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string cell_label(const Cell& c, bool three_d) {
  std::string s = "(" + std::to_string(c.i) + "," + std::to_string(c.j);
  if (three_d) s += "," + std::to_string(c.k);
  return s + ")";
}

}  // namespace

std::string node_label(const NodeRef& ref) {
  if (const auto* c = std::get_if<Cell>(&ref)) return cell_label(*c, true);
  return "#" + std::to_string(std::get<GraphNodeId>(ref).value);
}

std::string_view to_string(PlanStatus status) {
  switch (status) {
    case PlanStatus::Found: return "found";
    case PlanStatus::Unreachable: return "unreachable";
    case PlanStatus::Aborted: return "aborted";
  }
  return "unknown";
}

Connectivity default_connectivity(const GridMap& map) {
  return map.is_3d() ? Connectivity::TwentySix : Connectivity::Eight;
}

GridDomain::GridDomain(const GridMap& map, Connectivity conn) : map_(&map), conn_(conn) {
  if (is_3d(conn) != map.is_3d()) {
    throw ConfigError("connectivity '" + std::string(to_string(conn)) +
                      "' does not match the map's dimensionality");
  }
}

void GridDomain::expand(NodeId node, std::vector<DomainEdge>& out) const {
  for (const GridNeighbor& n : neighbors(*map_, map_->cell_at(node), conn_)) {
    out.push_back({static_cast<NodeId>(map_->index(n.cell)), n.cost});
  }
}

NodeId GridDomain::id_of(const NodeRef& ref) const {
  const auto* c = std::get_if<Cell>(&ref);
  if (c == nullptr) throw InvalidNodeError("grid domain expects a cell, got a graph node");
  if (!map_->in_bounds(*c)) {
    throw InvalidNodeError("cell " + cell_label(*c, map_->is_3d()) + " is out of bounds");
  }
  return static_cast<NodeId>(map_->index(*c));
}

NodeRef GridDomain::ref_of(NodeId id) const { return map_->cell_at(id); }

std::string GridDomain::label(NodeId id) const {
  return cell_label(map_->cell_at(id), map_->is_3d());
}

HeuristicQuery GridDomain::heuristic_query(NodeId node, NodeId goal) const {
  return {cell_center(map_->cell_at(node)), cell_center(map_->cell_at(goal)), std::nullopt,
          node == goal};
}

void GridDomain::require_endpoint(NodeId id) const {
  const Cell c = map_->cell_at(id);
  if (map_->occupied(c)) {
    throw InvalidNodeError("cell " + cell_label(c, map_->is_3d()) + " is occupied");
  }
}

void GraphDomain::expand(NodeId node, std::vector<DomainEdge>& out) const {
  for (const GraphEdge& e : graph_->out_edges(GraphNodeId{node})) {
    out.push_back({e.to.value, e.cost});
  }
}

NodeId GraphDomain::id_of(const NodeRef& ref) const {
  const auto* id = std::get_if<GraphNodeId>(&ref);
  if (id == nullptr) throw InvalidNodeError("graph domain expects a graph node, got a cell");
  if (!graph_->contains(*id)) {
    throw InvalidNodeError("graph node " + std::to_string(id->value) + " does not exist");
  }
  return id->value;
}

NodeRef GraphDomain::ref_of(NodeId id) const { return GraphNodeId{id}; }

std::string GraphDomain::label(NodeId id) const { return graph_->label(GraphNodeId{id}); }

HeuristicQuery GraphDomain::heuristic_query(NodeId node, NodeId goal) const {
  HeuristicQuery q{graph_->position(GraphNodeId{node}), graph_->position(GraphNodeId{goal}),
                   std::nullopt, node == goal};
  if (graph_->has_h_table()) q.table_h = graph_->h_table()[node];
  return q;
}

bool GraphDomain::has_positions() const {
  for (std::uint32_t n = 0; n < graph_->node_count(); ++n) {
    if (!graph_->position(GraphNodeId{n})) return false;
  }
  return true;
}

void GraphDomain::require_endpoint(NodeId id) const {
  if (!graph_->contains(GraphNodeId{id})) {
    throw InvalidNodeError("graph node " + std::to_string(id) + " does not exist");
  }
}

namespace {

struct OpenEntry {
  double f;
  double h;
  std::uint64_t seq;
  NodeId node;
  double g;
};

// std::priority_queue is a max-heap; "greater" puts the smallest
// (f, h, seq) on top.
struct OpenAfter {
  bool operator()(const OpenEntry& a, const OpenEntry& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.h != b.h) return a.h > b.h;
    return a.seq > b.seq;
  }
};

using OpenList = std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenAfter>;

// Per-query mutable state plus result bookkeeping shared by both planners.
class Search {
 public:
  Search(const SearchDomain& domain, NodeId start, NodeId goal)
      : domain_(domain),
        start_(start),
        goal_(goal),
        g_(domain.node_count(), kInf),
        parent_(domain.node_count(), kNoParent),
        closed_(domain.node_count(), 0) {}

  TraceEntry entry(NodeId node, double g, double h) const {
    TraceEntry e{domain_.ref_of(node), domain_.label(node), g, h, g + h, std::nullopt, ""};
    if (parent_[node] != kNoParent) {
      e.parent = domain_.ref_of(parent_[node]);
      e.parent_label = domain_.label(parent_[node]);
    }
    return e;
  }

  void finish_found(PlanResult& r) const {
    r.status = PlanStatus::Found;
    r.cost = g_[goal_];
    std::vector<NodeRef> rev;
    for (NodeId n = goal_; n != kNoParent; n = parent_[n]) {
      rev.push_back(domain_.ref_of(n));
      if (n == start_) break;
    }
    r.path.assign(rev.rbegin(), rev.rend());
  }

  const SearchDomain& domain_;
  NodeId start_;
  NodeId goal_;
  std::vector<double> g_;
  std::vector<NodeId> parent_;
  std::vector<std::uint8_t> closed_;
};

std::pair<NodeId, NodeId> endpoints(const SearchDomain& domain, const NodeRef& start,
                                    const NodeRef& goal, const SearchOptions& opts) {
  if (opts.max_expansions && *opts.max_expansions < 1) {
    throw ConfigError("max_expansions must be at least 1");
  }
  const NodeId s = domain.id_of(start);
  const NodeId t = domain.id_of(goal);
  domain.require_endpoint(s);
  domain.require_endpoint(t);
  return {s, t};
}

}  // namespace

PlanResult dijkstra(const SearchDomain& domain, const NodeRef& start, const NodeRef& goal,
                    const SearchOptions& opts) {
  const auto [s, t] = endpoints(domain, start, goal, opts);
  Search st(domain, s, t);
  PlanResult r;
  r.cost = kInf;

  struct Entry {
    double g;
    std::uint64_t seq;
    NodeId node;
  };
  auto after = [](const Entry& a, const Entry& b) {
    return a.g != b.g ? a.g > b.g : a.seq > b.seq;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(after)> open(after);
  std::uint64_t seq = 0;
  st.g_[s] = 0.0;
  open.push({0.0, seq++, s});

  std::vector<DomainEdge> edges;
  while (!open.empty()) {
    const Entry top = open.top();
    open.pop();
    if (st.closed_[top.node] || top.g > st.g_[top.node]) continue;
    if (opts.max_expansions && r.expansions >= *opts.max_expansions) {
      r.status = PlanStatus::Aborted;
      return r;
    }
    st.closed_[top.node] = 1;
    ++r.expansions;
    r.trace.push_back(st.entry(top.node, top.g, 0.0));
    if (top.node == t) {
      st.finish_found(r);
      return r;
    }
    edges.clear();
    domain.expand(top.node, edges);
    for (const DomainEdge& e : edges) {
      const double ng = top.g + e.cost;
      if (st.closed_[e.to] || !(ng < st.g_[e.to])) continue;
      st.g_[e.to] = ng;
      st.parent_[e.to] = top.node;
      open.push({ng, seq++, e.to});
      r.discoveries.push_back(st.entry(e.to, ng, 0.0));
    }
  }
  r.status = PlanStatus::Unreachable;
  return r;
}

PlanResult astar(const SearchDomain& domain, const NodeRef& start, const NodeRef& goal,
                 const HeuristicSpec& heuristic, const SearchOptions& opts) {
  constexpr double kReopenSlack = 1e-12;
  validate(heuristic);
  if (needs_table(heuristic) && !domain.has_table()) {
    throw ConfigError("table heuristic requires a domain with a heuristic table");
  }
  if (needs_positions(heuristic) && !domain.has_positions()) {
    throw ConfigError("heuristic '" + to_string(heuristic) +
                      "' requires node positions the domain does not provide");
  }
  const auto [s, t] = endpoints(domain, start, goal, opts);
  Search st(domain, s, t);
  PlanResult r;
  r.cost = kInf;

  std::vector<double> h_cache(domain.node_count(), std::numeric_limits<double>::quiet_NaN());
  auto h_of = [&](NodeId n) {
    if (std::isnan(h_cache[n])) h_cache[n] = evaluate(heuristic, domain.heuristic_query(n, t));
    return h_cache[n];
  };

  OpenList open;
  std::uint64_t seq = 0;
  st.g_[s] = 0.0;
  const double hs = h_of(s);
  open.push({hs, hs, seq++, s, 0.0});

  std::vector<DomainEdge> edges;
  while (!open.empty()) {
    const OpenEntry top = open.top();
    open.pop();
    if (top.g > st.g_[top.node] || st.closed_[top.node]) continue;
    if (opts.max_expansions && r.expansions >= *opts.max_expansions) {
      r.status = PlanStatus::Aborted;
      return r;
    }
    st.closed_[top.node] = 1;
    ++r.expansions;
    r.trace.push_back(st.entry(top.node, top.g, top.h));
    if (top.node == t) {
      st.finish_found(r);
      return r;
    }
    edges.clear();
    domain.expand(top.node, edges);
    for (const DomainEdge& e : edges) {
      const double ng = top.g + e.cost;
      if (!(ng < st.g_[e.to])) continue;
      if (st.closed_[e.to]) {
        // Equal-cost routes summed in a different order differ in the last
        // bits; only a real improvement reopens a closed node.
        if (!opts.allow_reopen || !(ng < st.g_[e.to] - kReopenSlack * std::max(1.0, ng))) continue;
        st.closed_[e.to] = 0;
        ++r.reopenings;
      }
      st.g_[e.to] = ng;
      st.parent_[e.to] = top.node;
      const double h = h_of(e.to);
      open.push({ng + h, h, seq++, e.to, ng});
      r.discoveries.push_back(st.entry(e.to, ng, h));
    }
  }
  r.status = PlanStatus::Unreachable;
  return r;
}

PlanResult astar_velocity(const SearchDomain& domain, const NodeRef& start,
                          const NodeRef& goal, const BaseHeuristic& base,
                          const WeightParams& params, const SearchOptions& opts) {
  validate(params);
  return astar(domain, start, goal, VelocityWeightedHeuristic{base, params}, opts);
}

PlanResult dijkstra(const GridMap& map, const Cell& start, const Cell& goal,
                    const SearchOptions& opts) {
  const GridDomain domain(map, opts.connectivity.value_or(default_connectivity(map)));
  return dijkstra(domain, start, goal, opts);
}

PlanResult astar(const GridMap& map, const Cell& start, const Cell& goal,
                 const HeuristicSpec& heuristic, const SearchOptions& opts) {
  const GridDomain domain(map, opts.connectivity.value_or(default_connectivity(map)));
  return astar(domain, start, goal, heuristic, opts);
}

PlanResult astar_velocity(const GridMap& map, const Cell& start, const Cell& goal,
                          const BaseHeuristic& base, const WeightParams& params,
                          const SearchOptions& opts) {
  const GridDomain domain(map, opts.connectivity.value_or(default_connectivity(map)));
  return astar_velocity(domain, start, goal, base, params, opts);
}

double path_cost(const SearchDomain& domain, const std::vector<NodeRef>& path) {
  double total = 0.0;
  std::vector<DomainEdge> edges;
  for (std::size_t n = 1; n < path.size(); ++n) {
    const NodeId from = domain.id_of(path[n - 1]);
    const NodeId to = domain.id_of(path[n]);
    edges.clear();
    domain.expand(from, edges);
    double best = kInf;
    for (const DomainEdge& e : edges) {
      if (e.to == to && e.cost < best) best = e.cost;
    }
    if (best == kInf) {
      throw InvalidNodeError("no edge " + domain.label(from) + " -> " + domain.label(to));
    }
    total += best;
  }
  return total;
}

std::vector<TraceRow> expansion_trace(const PlanResult& result) {
  std::vector<TraceRow> rows;
  rows.reserve(result.trace.size());
  for (std::size_t n = 0; n < result.trace.size(); ++n) {
    const TraceEntry& e = result.trace[n];
    rows.push_back({n + 1, e.label, e.g, e.h, e.f, e.parent_label});
  }
  return rows;
}

std::string trace_csv(const PlanResult& result) {
  using detail::csv_field;
  using detail::format_number;
  std::string out = "step,node,g,h,f,parent\n";
  for (const TraceRow& row : expansion_trace(result)) {
    out += std::to_string(row.step) + "," + csv_field(row.node) + "," + format_number(row.g) +
           "," + format_number(row.h) + "," + format_number(row.f) + "," +
           csv_field(row.parent) + "\n";
  }
  return out;
}

}  // namespace variastar
