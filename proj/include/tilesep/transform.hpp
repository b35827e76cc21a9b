#pragma once

#include <climits>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "tilesep/analysis.hpp"
#include "tilesep/core.hpp"
#include "tilesep/sim.hpp"

// The constructive pipeline: treeify -> one-occurrence path rewrite ->
// 2x2 macrotile compilation at temperature 2 -> cut weakening.
namespace tilesep {

// ---------------------------------------------------------------------------
// Tile dedup (identical glue arrays merge; first name wins)

struct DedupResult {
  TileSystem system;
  Assembly assembly;
};

inline DedupResult dedup_tiles(const TileSystem& sys, const Assembly& a) {
  DedupResult res;
  res.system.temperature = sys.temperature;
  for (size_t g = 1; g < sys.glue_count(); ++g)
    res.system.intern_glue(sys.glue_name(int(g)), sys.strength(int(g)));
  std::map<std::array<int, 4>, int> canon;  // glue array -> new index
  std::vector<int> remap(sys.size(), -1);
  for (size_t i = 0; i < sys.size(); ++i) {
    const Tile& t = sys.tile(i);
    std::array<int, 4> key;
    for (Side s : kSides) key[s] = t.glue[s];
    auto it = canon.find(key);
    if (it == canon.end()) {
      Tile nt;
      nt.name = t.name;
      for (Side s : kSides)
        nt.glue[s] = t.glue[s] == kNullGlue
                         ? kNullGlue
                         : res.system.intern_glue(sys.glue_name(t.glue[s]), sys.strength(t.glue[s]));
      int idx = res.system.add_tile(std::move(nt));
      canon.emplace(key, idx);
      remap[i] = idx;
    } else {
      remap[i] = it->second;
    }
  }
  std::vector<Placement> cells = a.cells();
  for (Placement& p : cells) p.tile = remap[p.tile];
  res.assembly = Assembly::from_sorted(std::move(cells));
  return res;
}

// ---------------------------------------------------------------------------
// Treeify

struct TreeifyResult {
  TileSystem system;
  Assembly assembly;
  std::vector<std::pair<std::string, bool>> broken;  // (glue name, vertical)
};

namespace detail {

// Nulls the given glue on both sides of its axis, across every tile.
inline void null_pair(TileSystem& sys, const std::string& glue_name, bool vertical) {
  auto id = sys.find_glue(glue_name);
  if (!id) return;
  for (Tile& t : sys.tiles()) {
    if (vertical) {
      if (t.glue[N] == *id) t.glue[N] = kNullGlue;
      if (t.glue[S] == *id) t.glue[S] = kNullGlue;
    } else {
      if (t.glue[E] == *id) t.glue[E] = kNullGlue;
      if (t.glue[W] == *id) t.glue[W] = kNullGlue;
    }
  }
}

}  // namespace detail

// Repeatedly nulls the canonical-least edge of the first fundamental cycle
// until the bond graph is a tree. Requires a clean lint.
inline TreeifyResult treeify(const TileSystem& sys, const Assembly& a) {
  auto diags = lint_umfta(sys, a);
  if (!diags.empty()) {
    std::ostringstream msg;
    msg << "lint reported " << diags.size() << " diagnostic(s):";
    for (const auto& d : diags) msg << "\n  " << d.str();
    fail(Errc::PreconditionFailed, msg.str());
  }
  TreeifyResult res{sys, a, {}};
  for (;;) {
    BondGraph g = bond_graph(res.assembly, res.system);
    auto cycles = find_simple_cycles(g);
    if (cycles.empty()) break;
    int least = *std::min_element(cycles[0].begin(), cycles[0].end(), [&](int x, int y) {
      return g.edges[x].e < g.edges[y].e;
    });
    const auto& edge = g.edges[least];
    std::string glue_name = res.system.glue_name(edge.glue);
    detail::null_pair(res.system, glue_name, edge.e.vertical);
    res.broken.emplace_back(glue_name, edge.e.vertical);
    DedupResult d = dedup_tiles(res.system, res.assembly);
    res.system = std::move(d.system);
    res.assembly = std::move(d.assembly);
  }
  return res;
}

// ---------------------------------------------------------------------------
// Boundary walk

struct WalkStep {
  bool is_cross = false;
  // cross fields
  BondEdge edge;
  Side dir = N;  // direction of travel when crossing
  // sweep fields
  Cell cell;
  Corner corner = Corner::NE;
};

struct Crossing {
  BondEdge edge;
  Side dir;
  size_t sweeps_before;  // cumulative sweep count when this crossing happens
};

struct BoundaryWalk {
  std::vector<WalkStep> steps;
  BondEdge start;
  Cell first_endpoint;

  size_t sweep_count() const {
    size_t n = 0;
    for (const auto& s : steps)
      if (!s.is_cross) ++n;
    return n;
  }

  std::vector<Crossing> crossings() const {
    std::vector<Crossing> out;
    size_t sweeps = 0;
    for (const auto& s : steps) {
      if (s.is_cross)
        out.push_back({s.edge, s.dir, sweeps});
      else
        ++sweeps;
    }
    return out;
  }
};

// Ribbon outline of a tree bond graph: cross e' from first_endpoint, then on
// entering a tile via side d sweep corners counterclockwise (side order
// N -> W -> S -> E) until the next bonded side, cross it, and repeat until
// the starting crossing recurs. Each bond edge is crossed exactly twice and
// each (cell, corner) swept exactly once, for 4|A| sweeps total.
inline BoundaryWalk boundary_walk(const Assembly& a, const TileSystem& sys, const BondEdge& e_prime,
                                  Cell first_endpoint) {
  BondGraph g = bond_graph(a, sys);
  if (!is_tree(g)) fail(Errc::NotATree, "boundary walk requires a tree bond graph");
  if (!g.edge_index(e_prime)) fail(Errc::NoSuchEdge, "e' is not a bond edge");
  if (first_endpoint != e_prime.cell && first_endpoint != e_prime.other())
    fail(Errc::NoSuchEdge, "first_endpoint is not an endpoint of e'");

  std::unordered_map<Cell, std::array<bool, 4>, CellHash> bonded;
  for (Cell c : g.nodes) bonded[c] = {false, false, false, false};
  for (const auto& ed : g.edges) {
    Side s = ed.e.vertical ? N : E;
    bonded[ed.e.cell][s] = true;
    bonded[ed.e.other()][opposite(s)] = true;
  }

  auto edge_at = [](Cell c, Side s) -> BondEdge {
    switch (s) {
      case N: return {c, true};
      case S: return {{c.x, c.y - 1}, true};
      case E: return {c, false};
      case W: return {{c.x - 1, c.y}, false};
    }
    return {c, false};
  };

  BoundaryWalk walk;
  walk.start = e_prime;
  walk.first_endpoint = first_endpoint;
  Side d0;
  if (first_endpoint == e_prime.cell)
    d0 = e_prime.vertical ? N : E;
  else
    d0 = e_prime.vertical ? S : W;

  walk.steps.push_back({true, e_prime, d0, {}, Corner::NE});
  Cell cur = step(first_endpoint, d0);
  Side enter = opposite(d0);

  // Single tiles never reach here (a tree edge exists), and the tour closes
  // after exactly 4n sweeps; the bound is a safety net.
  size_t limit = 8 * a.size() + 8;
  for (size_t guard = 0; guard < limit; ++guard) {
    Side s = enter;
    for (;;) {
      walk.steps.push_back({false, {}, N, cur, corner_after(s)});
      s = ccw_next(s);
      if (bonded[cur][s]) break;
    }
    BondEdge out_edge = edge_at(cur, s);
    if (out_edge == e_prime && s == d0) return walk;  // tour closed
    walk.steps.push_back({true, out_edge, s, {}, Corner::NE});
    cur = step(cur, s);
    enter = opposite(s);
  }
  fail(Errc::NotATree, "boundary walk failed to close");
}

// Structural invariants of a walk; used by tests and asserted in the
// pipeline.
inline void validate_walk(const BoundaryWalk& w, size_t assembly_size) {
  if (w.sweep_count() != 4 * assembly_size) fail(Errc::NotATree, "walk sweep count != 4n");
  std::map<std::pair<std::pair<int, int>, bool>, std::set<int>> crossed;
  std::set<std::pair<std::pair<int, int>, int>> corners;
  for (const auto& s : w.steps) {
    if (s.is_cross) {
      crossed[{{s.edge.cell.x, s.edge.cell.y}, s.edge.vertical}].insert(int(s.dir));
    } else {
      if (!corners.insert({{s.cell.x, s.cell.y}, int(s.corner)}).second)
        fail(Errc::NotATree, "corner swept twice");
    }
  }
  for (const auto& [e, dirs] : crossed)
    if (dirs.size() != 2) fail(Errc::NotATree, "edge not crossed exactly twice");
  if (corners.size() != 4 * assembly_size) fail(Errc::NotATree, "corner coverage incomplete");
}

// ---------------------------------------------------------------------------
// Halfway edge

struct HalfwayEdge {
  BondEdge edge;
  long long imbalance = 0;   // sweeps_before - 2n
  size_t crossing_index = 0; // index into walk.crossings()
  Side dir = N;
};

// Among the walk's crossings, the one whose preceding sweep count is nearest
// to 2n (ties broken toward the smaller count).
inline HalfwayEdge halfway_edge(const BoundaryWalk& w) {
  auto crossings = w.crossings();
  long long half = int64_t(w.sweep_count()) / 2;
  size_t best = 0;
  long long best_dist = LLONG_MAX;
  for (size_t i = 0; i < crossings.size(); ++i) {
    long long d = std::llabs(int64_t(crossings[i].sweeps_before) - half);
    if (d < best_dist) {
      best_dist = d;
      best = i;
    }
  }
  return {crossings[best].edge, int64_t(crossings[best].sweeps_before) - half, best,
          crossings[best].dir};
}

// ---------------------------------------------------------------------------
// Path between two edges of a tree

// Cell path from e' to e, inclusive of both edges' endpoints, ordered from
// the e' side.
inline std::vector<Cell> edge_path(const Assembly& a, const TileSystem& sys, const BondEdge& e1,
                                   const BondEdge& e2) {
  BondGraph g = bond_graph(a, sys);
  if (!is_tree(g)) fail(Errc::NotATree, "edge path requires a tree");
  if (e1 == e2) return {e1.cell, e1.other()};

  auto tree_path = [&](Cell from, Cell to) {
    std::vector<int> prev(g.nodes.size(), -1);
    int src = g.node_index(from), dst = g.node_index(to);
    std::vector<int> queue = {src};
    prev[src] = src;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
      int u = queue[qi];
      for (int ei : g.adjacent[u]) {
        const auto& ed = g.edges[ei];
        int v = g.node_index(ed.e.cell == g.nodes[u] ? ed.e.other() : ed.e.cell);
        if (prev[v] == -1) {
          prev[v] = u;
          queue.push_back(v);
        }
      }
    }
    std::vector<Cell> path;
    for (int v = dst; v != src; v = prev[v]) path.push_back(g.nodes[v]);
    path.push_back(g.nodes[src]);
    std::reverse(path.begin(), path.end());
    return path;
  };

  std::array<Cell, 2> ends1 = {e1.cell, e1.other()};
  std::array<Cell, 2> ends2 = {e2.cell, e2.other()};
  std::vector<Cell> best;
  for (Cell a1 : ends1)
    for (Cell a2 : ends2) {
      auto p = tree_path(a1, a2);
      if (best.empty() || p.size() < best.size()) best = p;
    }
  // Extend to include the far endpoints of both edges.
  Cell far1 = (best.front() == e1.cell) ? e1.other() : e1.cell;
  Cell far2 = (best.back() == e2.cell) ? e2.other() : e2.cell;
  std::vector<Cell> path;
  if (far1 != best.front()) path.push_back(far1);
  path.insert(path.end(), best.begin(), best.end());
  if (far2 != best.back()) path.push_back(far2);
  return path;
}

// ---------------------------------------------------------------------------
// Path uniquification

struct UniquifyResult {
  TileSystem system;
  Assembly assembly;
  std::vector<Cell> path;
};

// Gives every bond edge on the e'-to-e path except e' itself a fresh glue id
// (same strength), turning every path tile into a 1-occurrence type. Tiles
// whose type also occurs off the path are forked into fresh types.
inline UniquifyResult uniquify_path(const TileSystem& sys, const Assembly& a,
                                    const BondEdge& e_prime, const BondEdge& e) {
  std::vector<Cell> path = edge_path(a, sys, e_prime, e);
  UniquifyResult res{sys, a, path};
  if (e_prime == e) return res;  // nothing to rewrite

  BondGraph g = bond_graph(a, sys);
  std::map<int, int> counts = occurrence_counts(a);

  // Fresh glue per path edge beyond e'.
  struct EdgeRewrite {
    BondEdge edge;
    int new_glue;
  };
  std::vector<EdgeRewrite> rewrites;
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    Cell u = path[i], v = path[i + 1];
    BondEdge edge = u < v ? BondEdge{u, u.x == v.x} : BondEdge{v, u.x == v.x};
    if (edge == e_prime) continue;
    auto ei = g.edge_index(edge);
    if (!ei) fail(Errc::NoSuchEdge, "path step is not a bond edge");
    const std::string base = sys.glue_name(g.edges[*ei].glue);
    std::string fresh = base + "~p" + std::to_string(i + 1);
    while (res.system.find_glue(fresh)) fresh += "'";
    int id = res.system.intern_glue(fresh, sys.strength(g.edges[*ei].glue));
    rewrites.push_back({edge, id});
  }
  if (rewrites.empty()) return res;

  auto rewrite_for = [&](Cell c, Side s) -> std::optional<int> {
    BondEdge e1 = (s == N || s == E) ? BondEdge{c, s == N}
                                     : BondEdge{step(c, s), s == S};
    for (const auto& r : rewrites)
      if (r.edge == e1) return r.new_glue;
    return std::nullopt;
  };

  std::set<Cell> on_path(path.begin(), path.end());
  std::vector<Placement> cells = res.assembly.cells();
  for (size_t pi = 0; pi < path.size(); ++pi) {
    Cell c = path[pi];
    auto old_tile = *a.tile_at(c);
    Tile nt = res.system.tile(old_tile);
    bool changed = false;
    for (Side s : kSides) {
      auto gl = rewrite_for(c, s);
      if (gl) {
        nt.glue[s] = *gl;
        changed = true;
      }
    }
    if (!changed) continue;
    int new_index;
    if (counts[old_tile] == 1) {
      res.system.tiles()[old_tile] = nt;  // keep the name; type stays unique
      new_index = old_tile;
    } else {
      nt.name = nt.name + "~p" + std::to_string(pi);
      while (res.system.find_tile(nt.name)) nt.name += "'";
      new_index = res.system.add_tile(std::move(nt));
    }
    for (Placement& p : cells)
      if (p.cell == c) p.tile = new_index;
  }
  res.assembly = Assembly::from_sorted(std::move(cells));
  res.system.validate();
  return res;
}

// ---------------------------------------------------------------------------
// BFS orientation

struct Orientation {
  Cell root;
  std::map<BondEdge, Cell> parent;            // edge -> its parent endpoint
  std::map<int, std::optional<Side>> incoming;  // tile type -> incoming side
  std::map<int, std::set<Side>> outgoing;       // tile type -> outgoing sides
};

// Directs every tree edge parent->child by BFS from root (neighbor order
// N, W, S, E). Occurrences of one tile type must agree on their incoming
// side and outgoing side set; disagreement means the input is not a UMFTA.
inline Orientation bfs_orientation(const Assembly& a, const TileSystem& sys, Cell root) {
  BondGraph g = bond_graph(a, sys);
  if (!is_tree(g)) fail(Errc::NotATree, "orientation requires a tree");
  Orientation o;
  o.root = root;

  std::unordered_map<Cell, std::array<bool, 4>, CellHash> bonded;
  for (Cell c : g.nodes) bonded[c] = {false, false, false, false};
  for (const auto& ed : g.edges) {
    Side s = ed.e.vertical ? N : E;
    bonded[ed.e.cell][s] = true;
    bonded[ed.e.other()][opposite(s)] = true;
  }
  auto edge_at = [](Cell c, Side s) -> BondEdge {
    switch (s) {
      case N: return {c, true};
      case S: return {{c.x, c.y - 1}, true};
      case E: return {c, false};
      case W: return {{c.x - 1, c.y}, false};
    }
    return {c, false};
  };

  std::map<Cell, std::optional<Side>> in_side;
  std::map<Cell, std::set<Side>> out_sides;
  std::set<Cell> seen = {root};
  std::vector<Cell> queue = {root};
  in_side[root] = std::nullopt;
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    Cell u = queue[qi];
    for (Side s : {N, W, S, E}) {
      if (!bonded[u][s]) continue;
      Cell v = step(u, s);
      if (seen.count(v)) continue;
      seen.insert(v);
      o.parent[edge_at(u, s)] = u;
      in_side[v] = opposite(s);
      out_sides[u].insert(s);
      queue.push_back(v);
    }
  }

  for (const Placement& p : a.cells()) {
    auto in_it = o.incoming.find(p.tile);
    if (in_it == o.incoming.end()) {
      o.incoming[p.tile] = in_side[p.cell];
      o.outgoing[p.tile] = out_sides[p.cell];
    } else {
      if (in_it->second != in_side[p.cell] || o.outgoing[p.tile] != out_sides[p.cell])
        fail(Errc::InconsistentOrientation,
             "occurrences of tile " + sys.tile(p.tile).name +
                 " disagree on incoming/outgoing sides");
    }
  }
  return o;
}

// ---------------------------------------------------------------------------
// Macrotile compilation

enum class Quadrant : int { NW = 0, NE = 1, SW = 2, SE = 3 };

inline const char* quadrant_name(Quadrant q) {
  switch (q) {
    case Quadrant::NW: return "NW";
    case Quadrant::NE: return "NE";
    case Quadrant::SW: return "SW";
    case Quadrant::SE: return "SE";
  }
  return "?";
}

struct MacrotileSpec {
  int source_tile = 0;
  std::array<int, 4> unit = {0, 0, 0, 0};          // Quadrant -> system2 tile index
  std::array<int, 4> internal_glue = {0, 0, 0, 0};  // nearest Side -> glue id (0 = absent)
};

struct CompileResult {
  TileSystem system;   // temperature 2
  Assembly assembly;   // each original cell replaced by a 2x2 macrotile
  std::vector<MacrotileSpec> specs;
  // Per glue-side pair of the source system: which seam half carries the
  // strength-2 sub-edge glue. Horizontal pairs: half 0 = lower, 1 = upper.
  // Vertical pairs: half 0 = west, 1 = east.
  std::map<GlueSidePair, int> hi_half;
};

namespace detail {

// The seam half a crossing in direction d runs along: the walker keeps the
// interior on its left, so it hugs the clockwise-adjacent half.
inline int crossing_half(Side d) {
  switch (d) {
    case E: return 0;  // lower
    case W: return 1;  // upper
    case N: return 1;  // east
    case S: return 0;  // west
  }
  return 0;
}

}  // namespace detail

// Builds the temperature-2 macrotile system. For each bonded glue-side pair
// the seam half crossed first in the walk carries the strength-2 sub-edge
// glue and the other half the strength-1 glue. Internal glues sit on the
// three (four, for the root) macrotile edges whose nearest macroside is not
// the incoming side; they are strength 2 when that macroside is unbonded and
// strength 1 otherwise.
inline CompileResult compile_macrotiles(const TileSystem& sys, const Assembly& a,
                                        const BoundaryWalk& walk, const Orientation& orient) {
  BondGraph g = bond_graph(a, sys);
  if (!is_tree(g)) fail(Errc::NotATree, "macrotile compilation requires a tree");

  CompileResult res;
  res.system.temperature = 2;

  // First crossing direction per edge, then per pair (asserted uniform).
  std::map<BondEdge, Side> first_dir;
  for (const auto& c : walk.crossings())
    if (!first_dir.count(c.edge)) first_dir[c.edge] = c.dir;
  for (const auto& ed : g.edges) {
    auto it = first_dir.find(ed.e);
    if (it == first_dir.end()) fail(Errc::InconsistentOrientation, "walk missed a bond edge");
    int half = detail::crossing_half(it->second);
    auto [pit, fresh] = res.hi_half.emplace(pair_of(ed), half);
    if (!fresh && pit->second != half)
      fail(Errc::InconsistentOrientation,
           "glue-side pair (" + sys.glue_name(ed.glue) +
               ") is first-crossed on different seam halves");
  }

  // Bonded sides per tile type (uniform across occurrences; orientation
  // construction already validated agreement).
  std::map<int, std::array<bool, 4>> bonded_side;
  for (const Placement& p : a.cells()) {
    auto& b = bonded_side.emplace(p.tile, std::array<bool, 4>{false, false, false, false})
                  .first->second;
    for (Side s : kSides) {
      auto eidx = g.edge_index(s == N || s == E
                                   ? BondEdge{p.cell, s == N}
                                   : BondEdge{step(p.cell, s), s == S});
      if (eidx) b[s] = true;
    }
  }

  auto sub_glues = [&](int glue, bool vertical) -> std::pair<int, int> {
    // returns (glue at half 0, glue at half 1)
    const std::string base = sys.glue_name(glue);
    int hi = res.system.intern_glue(base + "#hi", 2);
    res.system.set_strength(hi, 2);
    int lo = res.system.intern_glue(base + "#lo", 1);
    auto it = res.hi_half.find({glue, vertical});
    int half = it != res.hi_half.end() ? it->second
                                       : detail::crossing_half(vertical ? N : E);
    return half == 0 ? std::make_pair(hi, lo) : std::make_pair(lo, hi);
  };

  // Build the four unit tiles of each macrotile type.
  std::map<int, int> type_of_cell;  // original tile -> spec index
  for (size_t ti = 0; ti < sys.size(); ++ti) {
    const Tile& t = sys.tile(ti);
    auto bnd_it = bonded_side.find(int(ti));
    if (bnd_it == bonded_side.end()) continue;  // type unused in the assembly
    const auto& bnd = bnd_it->second;
    std::optional<Side> incoming = orient.incoming.at(int(ti));

    MacrotileSpec spec;
    spec.source_tile = int(ti);

    std::array<Tile, 4> unit;  // by Quadrant
    for (int q = 0; q < 4; ++q)
      unit[q].name = t.name + "." + quadrant_name(Quadrant(q));

    // Internal glues.
    for (Side m : kSides) {
      bool present = !(incoming && *incoming == m);
      if (!present) continue;
      int strength = bnd[m] ? 1 : 2;
      int gid = res.system.intern_glue(t.name + "!" + side_name(m), strength);
      res.system.set_strength(gid, strength);
      spec.internal_glue[m] = gid;
      switch (m) {
        case N:
          unit[int(Quadrant::NW)].glue[E] = gid;
          unit[int(Quadrant::NE)].glue[W] = gid;
          break;
        case S:
          unit[int(Quadrant::SW)].glue[E] = gid;
          unit[int(Quadrant::SE)].glue[W] = gid;
          break;
        case W:
          unit[int(Quadrant::NW)].glue[S] = gid;
          unit[int(Quadrant::SW)].glue[N] = gid;
          break;
        case E:
          unit[int(Quadrant::NE)].glue[S] = gid;
          unit[int(Quadrant::SE)].glue[N] = gid;
          break;
      }
    }

    // External sub-edge glues on every side carrying a non-null glue.
    for (Side s : kSides) {
      int gl = t.glue[s];
      if (gl == kNullGlue) continue;
      auto [half0, half1] = sub_glues(gl, s == N || s == S);
      switch (s) {
        case E:  // half 0 = lower (SE), half 1 = upper (NE)
          unit[int(Quadrant::SE)].glue[E] = half0;
          unit[int(Quadrant::NE)].glue[E] = half1;
          break;
        case W:
          unit[int(Quadrant::SW)].glue[W] = half0;
          unit[int(Quadrant::NW)].glue[W] = half1;
          break;
        case N:  // half 0 = west (NW), half 1 = east (NE)
          unit[int(Quadrant::NW)].glue[N] = half0;
          unit[int(Quadrant::NE)].glue[N] = half1;
          break;
        case S:
          unit[int(Quadrant::SW)].glue[S] = half0;
          unit[int(Quadrant::SE)].glue[S] = half1;
          break;
      }
    }

    for (int q = 0; q < 4; ++q) spec.unit[q] = res.system.add_tile(unit[q]);
    type_of_cell[int(ti)] = int(res.specs.size());
    res.specs.push_back(spec);
  }

  std::vector<Placement> cells;
  for (const Placement& p : a.cells()) {
    const MacrotileSpec& spec = res.specs[type_of_cell[p.tile]];
    int bx = 2 * p.cell.x, by = 2 * p.cell.y;
    cells.push_back({{bx, by}, spec.unit[int(Quadrant::SW)]});
    cells.push_back({{bx + 1, by}, spec.unit[int(Quadrant::SE)]});
    cells.push_back({{bx, by + 1}, spec.unit[int(Quadrant::NW)]});
    cells.push_back({{bx + 1, by + 1}, spec.unit[int(Quadrant::NE)]});
  }
  std::sort(cells.begin(), cells.end(),
            [](const Placement& x, const Placement& y) { return x.cell < y.cell; });
  res.assembly = Assembly::from_sorted(std::move(cells));
  res.system.validate();
  return res;
}

// ---------------------------------------------------------------------------
// Cut weakening

struct WeakenResult {
  TileSystem system;
  Assembly assembly;
  std::string cut_glue_eprime;  // designated strength-1 glue at e'
  std::string cut_glue_e;       // designated strength-1 glue at e
};

// Along the path: raises each macroedge's strength-1 sub-edge glue to 2 and
// deletes the internal glue nearest that macroside in the parent macrotile
// (the child side has none). Then the sub-edge crossed at the walk start and
// the sub-edge crossed at the halfway crossing drop to strength 1, forming
// the 2-edge cut.
inline WeakenResult weaken_cut(const CompileResult& compiled, const TileSystem& sys,
                               const Assembly& a, const std::vector<Cell>& path,
                               const BondEdge& e_prime, const HalfwayEdge& e,
                               const BoundaryWalk& walk, const Orientation& orient) {
  WeakenResult res{compiled.system, compiled.assembly, "", ""};
  BondGraph g = bond_graph(a, sys);
  auto pair_index = glue_side_pair_index(a, sys);

  auto edge_between = [](Cell u, Cell v) -> BondEdge {
    return u < v ? BondEdge{u, u.x == v.x} : BondEdge{v, u.x == v.x};
  };

  std::map<int, int> spec_of_tile;
  for (size_t i = 0; i < compiled.specs.size(); ++i)
    spec_of_tile[compiled.specs[i].source_tile] = int(i);

  for (size_t i = 0; i + 1 < path.size(); ++i) {
    BondEdge edge = edge_between(path[i], path[i + 1]);
    auto ei = g.edge_index(edge);
    if (!ei) fail(Errc::NoSuchEdge, "path step is not a bond edge");
    GlueSidePair pair = pair_of(g.edges[*ei]);
    if (pair_index[pair].size() != 1)
      fail(Errc::PathNotUnique, "glue-side pair (" + sys.glue_name(pair.glue) +
                                    ") occurs " + std::to_string(pair_index[pair].size()) +
                                    " times; the path rewrite should have made it unique");

    // Raise the strength-1 sub-edge glue to 2.
    int lo = *res.system.find_glue(sys.glue_name(pair.glue) + "#lo");
    res.system.set_strength(lo, 2);

    // Delete the parent's internal glue nearest this macroside.
    Cell parent = orient.parent.at(edge);
    Side toward;
    if (edge.vertical)
      toward = (parent == edge.cell) ? N : S;
    else
      toward = (parent == edge.cell) ? E : W;
    const MacrotileSpec& spec = compiled.specs[spec_of_tile.at(*a.tile_at(parent))];
    auto null_slot = [&](Quadrant q, Side s) {
      res.system.tiles()[spec.unit[int(q)]].glue[s] = kNullGlue;
    };
    switch (toward) {
      case N: null_slot(Quadrant::NW, E); null_slot(Quadrant::NE, W); break;
      case S: null_slot(Quadrant::SW, E); null_slot(Quadrant::SE, W); break;
      case W: null_slot(Quadrant::NW, S); null_slot(Quadrant::SW, N); break;
      case E: null_slot(Quadrant::NE, S); null_slot(Quadrant::SE, N); break;
    }
  }

  // Designated cut sub-edges: the walk's first crossing (always e') and the
  // halfway crossing (e). Each designation drops that sub-edge's glue to 1.
  auto designate = [&](const BondEdge& edge, Side dir) -> std::string {
    auto ei = g.edge_index(edge);
    GlueSidePair pair = pair_of(g.edges[*ei]);
    int half = detail::crossing_half(dir);
    bool is_hi = compiled.hi_half.at(pair) == half;
    std::string name = sys.glue_name(pair.glue) + (is_hi ? "#hi" : "#lo");
    res.system.set_strength(*res.system.find_glue(name), 1);
    return name;
  };
  auto crossings = walk.crossings();
  res.cut_glue_eprime = designate(crossings[0].edge, crossings[0].dir);
  res.cut_glue_e = designate(e.edge, e.dir);
  res.system.validate();
  return res;
}

// ---------------------------------------------------------------------------
// Full pipeline

struct PipelineStage {
  std::string name;
  TileSystem system;
  Assembly assembly;
};

struct PipelineTrace {
  std::vector<PipelineStage> stages;
  std::vector<std::pair<std::string, bool>> treeify_breaks;
  BondEdge e_prime;
  Cell first_endpoint;
  BondEdge e;
  long long imbalance = 0;
  std::vector<Cell> path;
  std::string cut_glue_eprime;
  std::string cut_glue_e;
};

struct PipelineResult {
  TileSystem system;
  PipelineTrace trace;
};

namespace detail {

// Greater endpoint of an edge in canonical cell order; the walk crosses e'
// from here first.
inline Cell walk_start(const BondEdge& e) { return e.cell < e.other() ? e.other() : e.cell; }

inline Cell bfs_root(const BondEdge& e) { return e.cell < e.other() ? e.cell : e.other(); }

struct TreeChoice {
  TileSystem system;
  Assembly assembly;
  std::vector<std::pair<std::string, bool>> breaks;
  BondEdge e_prime;
  BoundaryWalk walk;
  HalfwayEdge halfway;
};

// Enumerates the ways of breaking glue-side pairs until the bond graph is a
// tree and keeps the choice whose halfway crossing is nearest to the exact
// half. Any cycle-breaking choice preserves the unique terminal assembly, so
// this only selects among equally valid trees; the standalone treeify
// operation keeps its fixed canonical rule.
inline TreeChoice choose_treeification(const TileSystem& sys, const Assembly& a) {
  BondGraph g = bond_graph(a, sys);
  size_t rank = g.edges.size() + 1 - g.nodes.size();

  std::vector<std::pair<std::string, bool>> pairs;
  {
    std::set<std::pair<std::string, bool>> set;
    for (const auto& ed : g.edges) set.insert({sys.glue_name(ed.glue), ed.e.vertical});
    pairs.assign(set.begin(), set.end());
  }

  std::optional<TreeChoice> best;
  auto consider = [&](const std::vector<int>& subset) {
    TileSystem s2 = sys;
    for (int pi : subset) null_pair(s2, pairs[pi].first, pairs[pi].second);
    DedupResult d = dedup_tiles(s2, a);
    BondGraph g2 = bond_graph(d.assembly, d.system);
    if (!is_tree(g2)) return;
    TreeChoice choice;
    choice.system = std::move(d.system);
    choice.assembly = std::move(d.assembly);
    for (int pi : subset) choice.breaks.push_back(pairs[pi]);
    try {
      choice.e_prime = find_one_occurrence_edge(choice.assembly, choice.system);
      choice.walk = boundary_walk(choice.assembly, choice.system, choice.e_prime,
                                  walk_start(choice.e_prime));
      choice.halfway = halfway_edge(choice.walk);
    } catch (const Error&) {
      return;
    }
    if (!best || std::llabs(choice.halfway.imbalance) < std::llabs(best->halfway.imbalance))
      best = std::move(choice);
  };

  // Subsets in canonical order, sizes 0..rank.
  std::vector<int> subset;
  auto rec = [&](auto&& self, size_t start, size_t want) -> void {
    if (want == 0) {
      consider(subset);
      return;
    }
    for (size_t i = start; i + want <= pairs.size() + 0 && i < pairs.size(); ++i) {
      subset.push_back(int(i));
      self(self, i + 1, want - 1);
      subset.pop_back();
    }
  };
  for (size_t size = 0; size <= rank; ++size) {
    rec(rec, 0, size);
    if (best && best->halfway.imbalance == 0) break;
  }
  if (!best) fail(Errc::PreconditionFailed, "no treeification found");
  return *best;
}

}  // namespace detail

// lint -> treeify -> e' -> boundary walk -> halfway edge -> path rewrite ->
// orientation -> macrotile compile -> cut weakening.
inline PipelineResult size_separable_compile(const TileSystem& sys, const ClosureCaps& caps = {}) {
  UmftaResult u = is_umfta(sys, caps);
  if (u.verdict == Verdict::Unknown)
    fail(Errc::UnknownUnderCaps, "closure hit a cap; UMFTA status unknown");
  if (u.verdict == Verdict::No) fail(Errc::NotUMFTA, "system has no unique mismatch-free terminal: " + u.detail);
  Assembly terminal = *u.witness;
  if (terminal.size() < 2) fail(Errc::TrivialAssembly, "terminal assembly has a single tile");

  auto diags = lint_umfta(sys, terminal);
  if (!diags.empty()) {
    std::ostringstream msg;
    msg << "lint reported " << diags.size() << " diagnostic(s)";
    for (const auto& d : diags) msg << "\n  " << d.str();
    fail(Errc::PreconditionFailed, msg.str());
  }

  PipelineResult res;
  res.trace.stages.push_back({"input", sys, terminal});

  detail::TreeChoice tree = detail::choose_treeification(sys, terminal);
  res.trace.treeify_breaks = tree.breaks;
  res.trace.stages.push_back({"treeify", tree.system, tree.assembly});
  res.trace.e_prime = tree.e_prime;
  res.trace.first_endpoint = detail::walk_start(tree.e_prime);
  res.trace.e = tree.halfway.edge;
  res.trace.imbalance = tree.halfway.imbalance;
  validate_walk(tree.walk, tree.assembly.size());

  UniquifyResult uniq = uniquify_path(tree.system, tree.assembly, tree.e_prime, tree.halfway.edge);
  res.trace.path = uniq.path;
  res.trace.stages.push_back({"uniquify", uniq.system, uniq.assembly});

  Orientation orient = bfs_orientation(uniq.assembly, uniq.system, detail::bfs_root(tree.e_prime));
  CompileResult compiled = compile_macrotiles(uniq.system, uniq.assembly, tree.walk, orient);
  res.trace.stages.push_back({"compile", compiled.system, compiled.assembly});

  WeakenResult weak = weaken_cut(compiled, uniq.system, uniq.assembly, uniq.path, tree.e_prime,
                                 tree.halfway, tree.walk, orient);
  res.trace.cut_glue_eprime = weak.cut_glue_eprime;
  res.trace.cut_glue_e = weak.cut_glue_e;

  DedupResult final_dedup = dedup_tiles(weak.system, weak.assembly);
  res.trace.stages.push_back({"weaken", final_dedup.system, final_dedup.assembly});
  res.system = final_dedup.system;
  return res;
}

}  // namespace tilesep
