#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <variant>
#include <vector>

#include "variastar/vec3.hpp"

namespace variastar {

// Grid cell index: i is the column (x), j the row (y), k the layer (z).
struct Cell {
  int i = 0;
  int j = 0;
  int k = 0;

  friend constexpr bool operator==(const Cell&, const Cell&) = default;
  friend constexpr auto operator<=>(const Cell&, const Cell&) = default;
};

struct GraphNodeId {
  std::uint32_t value = 0;

  friend constexpr bool operator==(const GraphNodeId&, const GraphNodeId&) = default;
  friend constexpr auto operator<=>(const GraphNodeId&, const GraphNodeId&) = default;
};

// A node in either kind of search domain.
using NodeRef = std::variant<Cell, GraphNodeId>;

enum class Connectivity { Four, Eight, Six, TwentySix };

constexpr bool is_3d(Connectivity c) {
  return c == Connectivity::Six || c == Connectivity::TwentySix;
}

std::string_view to_string(Connectivity c);
Connectivity parse_connectivity(std::string_view text);

/// 2D or 3D occupancy grid. A 2D map is a grid with depth 1.
///
/// Cells carry an occupancy flag and a traversal multiplier (>= 1) that
/// scales the cost of every step touching the cell.
class GridMap {
 public:
  GridMap(int width, int height, int depth = 1, double cell_size = 1.0);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int depth() const noexcept { return depth_; }
  double cell_size() const noexcept { return cell_size_; }
  bool is_3d() const noexcept { return depth_ > 1; }
  std::size_t cell_count() const noexcept { return occupied_.size(); }

  bool in_bounds(const Cell& c) const noexcept {
    return c.i >= 0 && c.j >= 0 && c.k >= 0 && c.i < width_ && c.j < height_ &&
           c.k < depth_;
  }
  std::size_t index(const Cell& c) const noexcept {
    return (static_cast<std::size_t>(c.k) * height_ + c.j) * width_ + c.i;
  }
  Cell cell_at(std::size_t index) const noexcept;

  // Out-of-bounds cells count as occupied.
  bool occupied(const Cell& c) const noexcept {
    return !in_bounds(c) || occupied_[index(c)] != 0;
  }
  double multiplier(const Cell& c) const;

  void set_occupied(const Cell& c, bool occupied = true);
  void set_multiplier(const Cell& c, double multiplier);

  std::size_t occupied_count() const noexcept;

  friend bool operator==(const GridMap&, const GridMap&) = default;

 private:
  void check(const Cell& c) const;

  int width_;
  int height_;
  int depth_;
  double cell_size_;
  std::vector<std::uint8_t> occupied_;
  std::vector<double> multiplier_;
};

struct GridNeighbor {
  Cell cell;
  double cost = 0.0;
};

// Free neighbors of `cell` under `conn`. Step cost is the Euclidean step
// length in cells times the mean multiplier of the two cells. Diagonal
// steps that cut past an occupied cell are omitted.
std::vector<GridNeighbor> neighbors(const GridMap& map, const Cell& cell,
                                    Connectivity conn);

// Cell-center coordinates in meters.
Vec3 world_coords(const GridMap& map, const Cell& cell);

// Cell-center coordinates in cell units (cell_size ignored). Heuristics on
// grids are evaluated in these units so they share the edge-cost scale.
Vec3 cell_center(const Cell& cell);

// Octile map text: `type octile`, `height H`, `width W`, `map`, then H rows
// of W characters. '.' free, '@' and 'T' occupied.
GridMap parse_map_text(std::string_view text);
std::string serialize_map_text(const GridMap& map);

// Deterministic random occupancy grid. Cell (0,0,0) and the far corner are
// always free.
GridMap random_grid(std::uint64_t seed, int width, int height, int depth,
                    double obstacle_density);

struct GraphEdge {
  GraphNodeId to;
  double cost = 0.0;
};

/// Directed graph with labeled nodes, non-negative edge costs and an
/// optional per-node heuristic table.
class ExplicitGraph {
 public:
  GraphNodeId add_node(std::string label, std::optional<Vec3> position = {});
  void add_edge(GraphNodeId from, GraphNodeId to, double cost);
  void set_h_table(std::vector<double> table);

  std::size_t node_count() const noexcept { return labels_.size(); }
  bool contains(GraphNodeId id) const noexcept { return id.value < labels_.size(); }
  const std::string& label(GraphNodeId id) const;
  const std::optional<Vec3>& position(GraphNodeId id) const;
  std::optional<GraphNodeId> find(std::string_view label) const;
  std::span<const GraphEdge> out_edges(GraphNodeId id) const;
  // Cost of the cheapest edge from -> to, if any.
  std::optional<double> edge_cost(GraphNodeId from, GraphNodeId to) const;

  bool has_h_table() const noexcept { return h_table_.has_value(); }
  const std::vector<double>& h_table() const;

 private:
  std::vector<std::string> labels_;
  std::vector<std::optional<Vec3>> positions_;
  std::vector<std::vector<GraphEdge>> edges_;
  std::optional<std::vector<double>> h_table_;
};

struct Fixture {
  ExplicitGraph graph;
  GraphNodeId start;
  GraphNodeId goal;
};

// The six-node S/A/B/C/D/G worked example with its heuristic table.
Fixture figure2_fixture();

}  // namespace variastar
