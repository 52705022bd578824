#include <string>

#include "variastar/bench.hpp"
#include "variastar/error.hpp"

namespace variastar {

namespace {

std::string center(int index, int px) { return std::to_string(index * px + px / 2); }

std::string marker(const Cell& c, int px, const char* cls, const char* color) {
  return "<circle class=\"" + std::string(cls) + "\" cx=\"" + center(c.i, px) + "\" cy=\"" +
         center(c.j, px) + "\" r=\"" + std::to_string(px / 3) + "\" fill=\"" + color + "\"/>\n";
}

}  // namespace

std::string render_path_svg(const GridMap& map, const PlanResult& result,
                            const SvgOptions& opts) {
  if (opts.layer < 0 || opts.layer >= map.depth()) throw ConfigError("SVG layer out of range");
  if (opts.cell_px < 2) throw ConfigError("cell_px must be at least 2");
  const int px = opts.cell_px;
  const std::string w = std::to_string(map.width() * px);
  const std::string h = std::to_string(map.height() * px);

  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + w + "\" height=\"" + h +
                    "\" viewBox=\"0 0 " + w + " " + h + "\">\n";
  out += "<rect class=\"background\" x=\"0\" y=\"0\" width=\"" + w + "\" height=\"" + h +
         "\" fill=\"#ffffff\" stroke=\"#000000\"/>\n";
  const std::string side = std::to_string(px);
  for (int j = 0; j < map.height(); ++j) {
    for (int i = 0; i < map.width(); ++i) {
      if (!map.occupied({i, j, opts.layer})) continue;
      out += "<rect class=\"cell\" x=\"" + std::to_string(i * px) + "\" y=\"" +
             std::to_string(j * px) + "\" width=\"" + side + "\" height=\"" + side +
             "\" fill=\"#404040\"/>\n";
    }
  }

  std::vector<Cell> cells;
  for (const NodeRef& ref : result.path) {
    const auto* c = std::get_if<Cell>(&ref);
    if (c == nullptr) throw ConfigError("SVG rendering needs a grid path");
    cells.push_back(*c);
  }
  if (!cells.empty()) {
    out += "<polyline class=\"path\" points=\"";
    for (std::size_t n = 0; n < cells.size(); ++n) {
      if (n > 0) out += ' ';
      out += center(cells[n].i, px) + "," + center(cells[n].j, px);
    }
    out += "\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"" + std::to_string(px / 5 + 1) +
           "\"/>\n";
  }
  const std::optional<Cell> start = cells.empty() ? opts.start : std::optional(cells.front());
  const std::optional<Cell> goal = cells.empty() ? opts.goal : std::optional(cells.back());
  if (start) out += marker(*start, px, "start", "#2ca02c");
  if (goal) out += marker(*goal, px, "goal", "#1f77b4");
  out += "</svg>\n";
  return out;
}

}  // namespace variastar
