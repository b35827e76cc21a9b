#pragma once

#include <sstream>

#include "tilesep/core.hpp"

// Standalone SVG rendering of an assembly: one 40-unit square per cell, tile
// name centered, glue labels on the sides, bonds drawn as ticks across shared
// edges (double ticks for strength 2 when requested). Output bytes are a pure
// function of the inputs.
namespace tilesep {

inline std::string render_svg(const Assembly& a, const TileSystem& sys,
                              bool show_strengths = false) {
  constexpr int kSide = 40;
  constexpr int kMargin = 10;
  int maxx = 0, maxy = 0;
  for (const Placement& p : a.cells()) {
    maxx = std::max(maxx, p.cell.x);
    maxy = std::max(maxy, p.cell.y);
  }
  int width = (maxx + 1) * kSide + 2 * kMargin;
  int height = (maxy + 1) * kSide + 2 * kMargin;

  // Lattice y grows upward; SVG y grows downward.
  auto px = [&](int x) { return kMargin + x * kSide; };
  auto py = [&](int y) { return kMargin + (maxy - y) * kSide; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<g font-family=\"monospace\" font-size=\"9\" text-anchor=\"middle\">\n";

  for (const Placement& p : a.cells()) {
    int x = px(p.cell.x), y = py(p.cell.y);
    const Tile& t = sys.tile(p.tile);
    out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << kSide << "\" height=\"" << kSide
        << "\" fill=\"white\" stroke=\"black\"/>\n";
    out << "<text x=\"" << x + kSide / 2 << "\" y=\"" << y + kSide / 2 + 3
        << "\" font-size=\"11\">" << t.name << "</text>\n";
    struct LabelPos {
      Side side;
      int dx, dy;
    };
    static constexpr LabelPos kLabels[] = {
        {N, kSide / 2, 9}, {E, kSide - 8, kSide / 2 + 3}, {S, kSide / 2, kSide - 4},
        {W, 8, kSide / 2 + 3}};
    for (const auto& lp : kLabels) {
      int g = t.glue[lp.side];
      if (g == kNullGlue) continue;
      out << "<text x=\"" << x + lp.dx << "\" y=\"" << y + lp.dy << "\" fill=\"dimgray\">"
          << sys.glue_name(g) << "</text>\n";
    }
  }

  // Bond ticks across shared edges.
  for (const BondGraph::Edge& e : bond_graph(a, sys).edges) {
    int ticks = (show_strengths && e.strength >= 2) ? 2 : 1;
    if (e.e.vertical) {
      // seam between cell and the one above: horizontal seam line
      int cx = px(e.e.cell.x) + kSide / 2;
      int cy = py(e.e.cell.y);  // top edge of the lower cell
      for (int i = 0; i < ticks; ++i) {
        int off = (ticks == 2) ? (i == 0 ? -4 : 4) : 0;
        out << "<line x1=\"" << cx + off << "\" y1=\"" << cy - 6 << "\" x2=\"" << cx + off
            << "\" y2=\"" << cy + 6 << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
      }
    } else {
      int cx = px(e.e.cell.x) + kSide;  // right edge of the west cell
      int cy = py(e.e.cell.y) + kSide / 2;
      for (int i = 0; i < ticks; ++i) {
        int off = (ticks == 2) ? (i == 0 ? -4 : 4) : 0;
        out << "<line x1=\"" << cx - 6 << "\" y1=\"" << cy + off << "\" x2=\"" << cx + 6
            << "\" y2=\"" << cy + off << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
      }
    }
  }

  out << "</g>\n</svg>\n";
  return out.str();
}

}  // namespace tilesep
