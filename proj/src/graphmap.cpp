#include "variastar/graphmap.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <random>

#include "variastar/error.hpp"

namespace variastar {

std::string_view to_string(Connectivity c) {
  switch (c) {
    case Connectivity::Four: return "four";
    case Connectivity::Eight: return "eight";
    case Connectivity::Six: return "six";
    case Connectivity::TwentySix: return "twenty_six";
  }
  return "unknown";
}

Connectivity parse_connectivity(std::string_view text) {
  if (text == "four" || text == "4") return Connectivity::Four;
  if (text == "eight" || text == "8") return Connectivity::Eight;
  if (text == "six" || text == "6") return Connectivity::Six;
  if (text == "twenty_six" || text == "26") return Connectivity::TwentySix;
  throw ConfigError("unknown connectivity '" + std::string(text) + "'");
}

GridMap::GridMap(int width, int height, int depth, double cell_size)
    : width_(width), height_(height), depth_(depth), cell_size_(cell_size) {
  if (width <= 0 || height <= 0 || depth <= 0) {
    throw ConfigError("grid dimensions must be positive");
  }
  if (!(cell_size > 0.0) || !std::isfinite(cell_size)) {
    throw ConfigError("cell_size must be positive and finite");
  }
  const auto n = static_cast<std::size_t>(width) * height * depth;
  occupied_.assign(n, 0);
  multiplier_.assign(n, 1.0);
}

Cell GridMap::cell_at(std::size_t index) const noexcept {
  const auto w = static_cast<std::size_t>(width_);
  const auto h = static_cast<std::size_t>(height_);
  return Cell{static_cast<int>(index % w), static_cast<int>((index / w) % h),
              static_cast<int>(index / (w * h))};
}

void GridMap::check(const Cell& c) const {
  if (!in_bounds(c)) {
    throw InvalidNodeError("cell (" + std::to_string(c.i) + "," + std::to_string(c.j) +
                           "," + std::to_string(c.k) + ") is out of bounds");
  }
}

double GridMap::multiplier(const Cell& c) const {
  check(c);
  return multiplier_[index(c)];
}

void GridMap::set_occupied(const Cell& c, bool occupied) {
  check(c);
  occupied_[index(c)] = occupied ? 1 : 0;
}

void GridMap::set_multiplier(const Cell& c, double multiplier) {
  check(c);
  if (!(multiplier >= 1.0) || !std::isfinite(multiplier)) {
    throw ConfigError("cost multiplier must be finite and >= 1");
  }
  multiplier_[index(c)] = multiplier;
}

std::size_t GridMap::occupied_count() const noexcept {
  return static_cast<std::size_t>(std::count(occupied_.begin(), occupied_.end(), 1));
}

namespace {

struct Offset {
  int di, dj, dk;
  int axes;  // number of non-zero components
};

std::vector<Offset> make_stencil(Connectivity conn) {
  std::vector<Offset> out;
  const bool three_d = is_3d(conn);
  const bool orthogonal_only = conn == Connectivity::Four || conn == Connectivity::Six;
  for (int dk = -1; dk <= 1; ++dk) {
    if (!three_d && dk != 0) continue;
    for (int dj = -1; dj <= 1; ++dj) {
      for (int di = -1; di <= 1; ++di) {
        const int axes = (di != 0) + (dj != 0) + (dk != 0);
        if (axes == 0 || (orthogonal_only && axes != 1)) continue;
        out.push_back({di, dj, dk, axes});
      }
    }
  }
  return out;
}

const std::vector<Offset>& stencil(Connectivity conn) {
  static const std::array<std::vector<Offset>, 4> all = {
      make_stencil(Connectivity::Four), make_stencil(Connectivity::Eight),
      make_stencil(Connectivity::Six), make_stencil(Connectivity::TwentySix)};
  return all[static_cast<std::size_t>(conn)];
}

// True if some cell reached by moving along a proper subset of the
// offset's axes is occupied.
bool cuts_corner(const GridMap& map, const Cell& from, const Offset& o) {
  const std::array<int, 3> d = {o.di, o.dj, o.dk};
  for (int mask = 1; mask < 7; ++mask) {
    bool proper = false;
    bool inside = true;
    for (int a = 0; a < 3; ++a) {
      if ((mask >> a) & 1) {
        if (d[a] == 0) inside = false;
      } else if (d[a] != 0) {
        proper = true;
      }
    }
    if (!inside || !proper) continue;
    const Cell via{from.i + ((mask & 1) ? o.di : 0), from.j + ((mask & 2) ? o.dj : 0),
                   from.k + ((mask & 4) ? o.dk : 0)};
    if (map.occupied(via)) return true;
  }
  return false;
}

constexpr std::array<double, 4> kStepLength = {0.0, 1.0, 1.4142135623730951,
                                               1.7320508075688772};

}  // namespace

std::vector<GridNeighbor> neighbors(const GridMap& map, const Cell& cell,
                                    Connectivity conn) {
  if (is_3d(conn) != map.is_3d()) {
    throw ConfigError("connectivity '" + std::string(to_string(conn)) +
                      "' does not match the map's dimensionality");
  }
  if (map.occupied(cell)) {
    throw InvalidNodeError("cell (" + std::to_string(cell.i) + "," +
                           std::to_string(cell.j) + "," + std::to_string(cell.k) +
                           ") is occupied or out of bounds");
  }
  std::vector<GridNeighbor> out;
  const double m0 = map.multiplier(cell);
  for (const Offset& o : stencil(conn)) {
    const Cell next{cell.i + o.di, cell.j + o.dj, cell.k + o.dk};
    if (map.occupied(next)) continue;
    if (o.axes > 1 && cuts_corner(map, cell, o)) continue;
    const double mean = 0.5 * (m0 + map.multiplier(next));
    out.push_back({next, kStepLength[o.axes] * mean});
  }
  return out;
}

Vec3 world_coords(const GridMap& map, const Cell& cell) {
  if (!map.in_bounds(cell)) {
    throw InvalidNodeError("cell (" + std::to_string(cell.i) + "," +
                           std::to_string(cell.j) + "," + std::to_string(cell.k) +
                           ") is out of bounds");
  }
  return cell_center(cell) * map.cell_size();
}

Vec3 cell_center(const Cell& cell) {
  return {cell.i + 0.5, cell.j + 0.5, cell.k + 0.5};
}

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = end + 1;
  }
  return lines;
}

int parse_header_int(std::string_view line, std::string_view key, std::size_t lineno) {
  if (line.substr(0, key.size()) != key || line.size() <= key.size() ||
      line[key.size()] != ' ') {
    throw MapParseError(lineno, "expected '" + std::string(key) + " <n>'");
  }
  std::string_view num = line.substr(key.size() + 1);
  int value = 0;
  auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), value);
  if (ec != std::errc{} || ptr != num.data() + num.size() || value <= 0) {
    throw MapParseError(lineno, "invalid " + std::string(key) + " '" + std::string(num) + "'");
  }
  return value;
}

}  // namespace

GridMap parse_map_text(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.size() < 4) {
    throw MapParseError(lines.size() + 1, "truncated header");
  }
  if (lines[0] != "type octile") throw MapParseError(1, "expected 'type octile'");
  const int height = parse_header_int(lines[1], "height", 2);
  const int width = parse_header_int(lines[2], "width", 3);
  if (lines[3] != "map") throw MapParseError(4, "expected 'map'");

  GridMap map(width, height);
  for (int j = 0; j < height; ++j) {
    const std::size_t lineno = 5 + static_cast<std::size_t>(j);
    if (lineno - 1 >= lines.size()) {
      throw MapParseError(lineno, "missing row " + std::to_string(j));
    }
    const std::string_view row = lines[lineno - 1];
    if (row.size() != static_cast<std::size_t>(width)) {
      throw MapParseError(lineno, "ragged row: expected " + std::to_string(width) +
                                      " characters, got " + std::to_string(row.size()));
    }
    for (int i = 0; i < width; ++i) {
      switch (row[static_cast<std::size_t>(i)]) {
        case '.': break;
        case '@':
        case 'T': map.set_occupied({i, j, 0}); break;
        default:
          throw MapParseError(lineno, std::string("unknown cell character '") +
                                          row[static_cast<std::size_t>(i)] + "'");
      }
    }
  }
  for (std::size_t extra = 4 + static_cast<std::size_t>(height); extra < lines.size(); ++extra) {
    if (!lines[extra].empty()) throw MapParseError(extra + 1, "unexpected trailing row");
  }
  return map;
}

std::string serialize_map_text(const GridMap& map) {
  if (map.is_3d()) throw ConfigError("the octile text format holds 2D maps only");
  std::string out = "type octile\nheight " + std::to_string(map.height()) + "\nwidth " +
                    std::to_string(map.width()) + "\nmap\n";
  out.reserve(out.size() + map.cell_count() + static_cast<std::size_t>(map.height()));
  for (int j = 0; j < map.height(); ++j) {
    for (int i = 0; i < map.width(); ++i) out += map.occupied({i, j, 0}) ? '@' : '.';
    out += '\n';
  }
  return out;
}

GridMap random_grid(std::uint64_t seed, int width, int height, int depth,
                    double obstacle_density) {
  if (!(obstacle_density >= 0.0 && obstacle_density < 1.0)) {
    throw ConfigError("obstacle density must lie in [0, 1)");
  }
  GridMap map(width, height, depth);
  // mt19937_64 output is fixed by the standard; the [0,1) mapping is done
  // by hand because distribution objects are implementation-defined.
  std::mt19937_64 rng(seed);
  for (std::size_t idx = 0; idx < map.cell_count(); ++idx) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    if (u < obstacle_density) map.set_occupied(map.cell_at(idx));
  }
  map.set_occupied({0, 0, 0}, false);
  map.set_occupied({width - 1, height - 1, depth - 1}, false);
  return map;
}

GraphNodeId ExplicitGraph::add_node(std::string label, std::optional<Vec3> position) {
  if (find(label)) throw ConfigError("duplicate node label '" + label + "'");
  if (position && !is_finite(*position)) throw ConfigError("node position must be finite");
  labels_.push_back(std::move(label));
  positions_.push_back(position);
  edges_.emplace_back();
  if (h_table_) h_table_.reset();
  return GraphNodeId{static_cast<std::uint32_t>(labels_.size() - 1)};
}

void ExplicitGraph::add_edge(GraphNodeId from, GraphNodeId to, double cost) {
  if (!contains(from) || !contains(to)) throw ConfigError("edge endpoint does not exist");
  if (!(cost >= 0.0) || !std::isfinite(cost)) {
    throw ConfigError("edge cost must be finite and non-negative");
  }
  edges_[from.value].push_back({to, cost});
}

void ExplicitGraph::set_h_table(std::vector<double> table) {
  if (table.size() != node_count()) {
    throw ConfigError("heuristic table must cover every node");
  }
  for (double h : table) {
    if (!(h >= 0.0) || !std::isfinite(h)) {
      throw ConfigError("heuristic table entries must be finite and non-negative");
    }
  }
  h_table_ = std::move(table);
}

const std::string& ExplicitGraph::label(GraphNodeId id) const {
  if (!contains(id)) throw InvalidNodeError("graph node " + std::to_string(id.value) + " does not exist");
  return labels_[id.value];
}

const std::optional<Vec3>& ExplicitGraph::position(GraphNodeId id) const {
  if (!contains(id)) throw InvalidNodeError("graph node " + std::to_string(id.value) + " does not exist");
  return positions_[id.value];
}

std::optional<GraphNodeId> ExplicitGraph::find(std::string_view label) const {
  for (std::size_t n = 0; n < labels_.size(); ++n) {
    if (labels_[n] == label) return GraphNodeId{static_cast<std::uint32_t>(n)};
  }
  return std::nullopt;
}

std::span<const GraphEdge> ExplicitGraph::out_edges(GraphNodeId id) const {
  if (!contains(id)) throw InvalidNodeError("graph node " + std::to_string(id.value) + " does not exist");
  return edges_[id.value];
}

std::optional<double> ExplicitGraph::edge_cost(GraphNodeId from, GraphNodeId to) const {
  std::optional<double> best;
  for (const GraphEdge& e : out_edges(from)) {
    if (e.to == to && (!best || e.cost < *best)) best = e.cost;
  }
  return best;
}

const std::vector<double>& ExplicitGraph::h_table() const {
  if (!h_table_) throw ConfigError("graph has no heuristic table");
  return *h_table_;
}

Fixture figure2_fixture() {
  ExplicitGraph g;
  const auto s = g.add_node("S");
  const auto a = g.add_node("A");
  const auto b = g.add_node("B");
  const auto c = g.add_node("C");
  const auto d = g.add_node("D");
  const auto goal = g.add_node("G");
  // Edge costs and h-values are the smallest integers that reproduce the
  // f-values of the worked example: A=4, G=10, B=7, C=4, G=6, D=11.
  g.add_edge(s, a, 1);
  g.add_edge(s, goal, 10);
  g.add_edge(a, b, 2);
  g.add_edge(a, c, 2);
  g.add_edge(c, goal, 3);
  g.add_edge(c, d, 6);
  g.set_h_table({4, 3, 4, 1, 2, 0});
  return {std::move(g), s, goal};
}

}  // namespace variastar
