#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

// Core domain types for two-handed tile self-assembly: tile systems,
// assemblies in canonical translation, bond graphs, and tau-stability.
namespace tilesep {

// ---------------------------------------------------------------------------
// Errors

enum class Errc {
  EmptyAssembly,
  Disconnected,
  DuplicateTile,
  DuplicateCell,
  BadSystem,
  NotConnected,
  NoSuchEdge,
  NotATree,
  PreconditionFailed,
  InconsistentOrientation,
  PathNotUnique,
  NotUMFTA,
  TrivialAssembly,
  UnknownUnderCaps,
  ParseError,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

// ---------------------------------------------------------------------------
// Sides and corners

enum Side : int { N = 0, E = 1, S = 2, W = 3 };

constexpr std::array<Side, 4> kSides = {N, E, S, W};

inline Side opposite(Side s) { return Side((int(s) + 2) % 4); }

// Counterclockwise side order is N -> W -> S -> E.
inline Side ccw_next(Side s) {
  switch (s) {
    case N: return W;
    case W: return S;
    case S: return E;
    case E: return N;
  }
  return N;
}

// Clockwise: N -> E -> S -> W.
inline Side cw_next(Side s) {
  switch (s) {
    case N: return E;
    case E: return S;
    case S: return W;
    case W: return N;
  }
  return N;
}

inline const char* side_name(Side s) {
  switch (s) {
    case N: return "N";
    case E: return "E";
    case S: return "S";
    case W: return "W";
  }
  return "?";
}

enum class Corner : int { NE = 0, NW = 1, SW = 2, SE = 3 };

inline const char* corner_name(Corner c) {
  switch (c) {
    case Corner::NE: return "NE";
    case Corner::NW: return "NW";
    case Corner::SW: return "SW";
    case Corner::SE: return "SE";
  }
  return "?";
}

// Corner shared by side s and ccw_next(s).
inline Corner corner_after(Side s) {
  switch (s) {
    case N: return Corner::NW;
    case W: return Corner::SW;
    case S: return Corner::SE;
    case E: return Corner::NE;
  }
  return Corner::NE;
}

struct Cell {
  int x = 0;
  int y = 0;

  friend bool operator==(const Cell& a, const Cell& b) { return a.x == b.x && a.y == b.y; }
  friend bool operator!=(const Cell& a, const Cell& b) { return !(a == b); }
  // Canonical cell order is row-major: (y, x).
  friend bool operator<(const Cell& a, const Cell& b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
  }
};

inline Cell step(Cell c, Side s) {
  switch (s) {
    case N: return {c.x, c.y + 1};
    case E: return {c.x + 1, c.y};
    case S: return {c.x, c.y - 1};
    case W: return {c.x - 1, c.y};
  }
  return c;
}

struct CellHash {
  size_t operator()(const Cell& c) const {
    return std::hash<int64_t>()((int64_t(c.x) << 32) ^ uint32_t(c.y));
  }
};

// ---------------------------------------------------------------------------
// Tile system

// Glue ids are indices into TileSystem::glue_names; id 0 is always the null
// glue "-" with strength 0.
constexpr int kNullGlue = 0;

struct Tile {
  std::string name;
  std::array<int, 4> glue = {kNullGlue, kNullGlue, kNullGlue, kNullGlue};  // by Side

  friend bool operator==(const Tile& a, const Tile& b) {
    return a.name == b.name && a.glue == b.glue;
  }
};

class TileSystem {
 public:
  TileSystem() {
    glue_names_.push_back("-");
    glue_strengths_.push_back(0);
  }

  int temperature = 1;

  int intern_glue(const std::string& name, int strength = 1) {
    auto it = glue_ids_.find(name);
    if (it != glue_ids_.end()) return it->second;
    int id = int(glue_names_.size());
    glue_names_.push_back(name);
    glue_strengths_.push_back(name == "-" ? 0 : strength);
    glue_ids_.emplace(name, id);
    return id;
  }

  std::optional<int> find_glue(const std::string& name) const {
    if (name == "-") return kNullGlue;
    auto it = glue_ids_.find(name);
    if (it == glue_ids_.end()) return std::nullopt;
    return it->second;
  }

  void set_strength(int glue, int strength) {
    if (glue == kNullGlue) fail(Errc::BadSystem, "null glue strength is fixed at 0");
    glue_strengths_[glue] = strength;
  }

  int strength(int glue) const { return glue_strengths_[glue]; }
  const std::string& glue_name(int glue) const { return glue_names_[glue]; }
  size_t glue_count() const { return glue_names_.size(); }

  int add_tile(Tile t) {
    tiles_.push_back(std::move(t));
    return int(tiles_.size()) - 1;
  }

  const std::vector<Tile>& tiles() const { return tiles_; }
  std::vector<Tile>& tiles() { return tiles_; }
  const Tile& tile(int i) const { return tiles_[i]; }
  size_t size() const { return tiles_.size(); }

  std::optional<int> find_tile(const std::string& name) const {
    for (size_t i = 0; i < tiles_.size(); ++i)
      if (tiles_[i].name == name) return int(i);
    return std::nullopt;
  }

  // Checks the system invariants: at least one tile, positive temperature,
  // non-null glues carried by tiles have strength >= 1, and no two tiles
  // share the same 4-array of glues.
  void validate() const {
    if (tiles_.empty()) fail(Errc::BadSystem, "tile system has no tiles");
    if (temperature < 1) fail(Errc::BadSystem, "temperature must be >= 1");
    for (const Tile& t : tiles_)
      for (Side s : kSides) {
        int g = t.glue[s];
        if (g < 0 || g >= int(glue_names_.size()))
          fail(Errc::BadSystem, "tile " + t.name + " references unknown glue");
        if (g != kNullGlue && glue_strengths_[g] < 1)
          fail(Errc::BadSystem, "glue " + glue_names_[g] + " has strength < 1");
      }
    std::map<std::array<int, 4>, std::string> seen;
    for (const Tile& t : tiles_) {
      auto [it, fresh] = seen.emplace(t.glue, t.name);
      if (!fresh)
        fail(Errc::DuplicateTile,
             "tiles " + it->second + " and " + t.name + " have identical glue arrays");
    }
  }

 private:
  std::vector<Tile> tiles_;
  std::vector<std::string> glue_names_;
  std::vector<int> glue_strengths_;
  std::unordered_map<std::string, int> glue_ids_;
};

// ---------------------------------------------------------------------------
// Assembly: canonical partial map from cells to tile indices

struct Placement {
  Cell cell;
  int tile = 0;

  friend bool operator==(const Placement& a, const Placement& b) {
    return a.cell == b.cell && a.tile == b.tile;
  }
  friend bool operator<(const Placement& a, const Placement& b) {
    return a.cell != b.cell ? a.cell < b.cell : a.tile < b.tile;
  }
};

class Assembly {
 public:
  Assembly() = default;

  // Placements sorted by canonical cell order; translation with
  // min x = min y = 0. Construct via canonicalize().
  const std::vector<Placement>& cells() const { return cells_; }
  size_t size() const { return cells_.size(); }

  std::optional<int> tile_at(Cell c) const {
    auto it = std::lower_bound(cells_.begin(), cells_.end(), c,
                               [](const Placement& p, const Cell& q) { return p.cell < q; });
    if (it != cells_.end() && it->cell == c) return it->tile;
    return std::nullopt;
  }

  bool occupied(Cell c) const { return tile_at(c).has_value(); }

  friend bool operator==(const Assembly& a, const Assembly& b) { return a.cells_ == b.cells_; }
  friend bool operator!=(const Assembly& a, const Assembly& b) { return !(a == b); }
  friend bool operator<(const Assembly& a, const Assembly& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.cells_ < b.cells_;
  }

  size_t hash() const {
    size_t h = 1469598103934665603ull;
    for (const Placement& p : cells_) {
      auto mix = [&h](uint64_t v) {
        h ^= v;
        h *= 1099511628211ull;
      };
      mix(uint64_t(uint32_t(p.cell.x)));
      mix(uint64_t(uint32_t(p.cell.y)));
      mix(uint64_t(p.tile));
    }
    return h;
  }

  static Assembly from_sorted(std::vector<Placement> cells) {
    Assembly a;
    a.cells_ = std::move(cells);
    return a;
  }

 private:
  std::vector<Placement> cells_;
};

struct AssemblyHash {
  size_t operator()(const Assembly& a) const { return a.hash(); }
};

namespace detail {

inline bool cells_connected(const std::vector<Placement>& cells) {
  if (cells.empty()) return false;
  std::unordered_map<Cell, int, CellHash> index;
  for (size_t i = 0; i < cells.size(); ++i) index.emplace(cells[i].cell, int(i));
  std::vector<char> seen(cells.size(), 0);
  std::vector<int> stack = {0};
  seen[0] = 1;
  size_t reached = 1;
  while (!stack.empty()) {
    int i = stack.back();
    stack.pop_back();
    for (Side s : kSides) {
      auto it = index.find(step(cells[i].cell, s));
      if (it != index.end() && !seen[it->second]) {
        seen[it->second] = 1;
        ++reached;
        stack.push_back(it->second);
      }
    }
  }
  return reached == cells.size();
}

}  // namespace detail

// Translates to the unique representative with min x = min y = 0.
// Rejects empty or lattice-disconnected inputs.
inline Assembly canonicalize(const std::map<std::pair<int, int>, int>& raw_cells) {
  if (raw_cells.empty()) fail(Errc::EmptyAssembly, "assembly has no cells");
  int minx = raw_cells.begin()->first.first, miny = raw_cells.begin()->first.second;
  for (const auto& [xy, t] : raw_cells) {
    minx = std::min(minx, xy.first);
    miny = std::min(miny, xy.second);
  }
  std::vector<Placement> cells;
  cells.reserve(raw_cells.size());
  for (const auto& [xy, t] : raw_cells)
    cells.push_back({{xy.first - minx, xy.second - miny}, t});
  std::sort(cells.begin(), cells.end(),
            [](const Placement& a, const Placement& b) { return a.cell < b.cell; });
  if (!detail::cells_connected(cells)) fail(Errc::Disconnected, "assembly domain is not edge-connected");
  return Assembly::from_sorted(std::move(cells));
}

inline Assembly canonicalize(const std::vector<Placement>& raw) {
  std::map<std::pair<int, int>, int> m;
  for (const Placement& p : raw) {
    if (!m.emplace(std::make_pair(p.cell.x, p.cell.y), p.tile).second)
      fail(Errc::DuplicateCell, "duplicate cell in assembly");
  }
  return canonicalize(m);
}

inline Assembly translate(const Assembly& a, int dx, int dy) {
  std::vector<Placement> cells = a.cells();
  for (Placement& p : cells) {
    p.cell.x += dx;
    p.cell.y += dy;
  }
  return Assembly::from_sorted(std::move(cells));
}

// ---------------------------------------------------------------------------
// Bond graph

// A bond edge is identified by its west (horizontal) or south (vertical)
// endpoint plus the axis. Ordering is (cell, axis) with horizontal first.
struct BondEdge {
  Cell cell;
  bool vertical = false;

  Cell other() const { return vertical ? Cell{cell.x, cell.y + 1} : Cell{cell.x + 1, cell.y}; }

  friend bool operator==(const BondEdge& a, const BondEdge& b) {
    return a.cell == b.cell && a.vertical == b.vertical;
  }
  friend bool operator!=(const BondEdge& a, const BondEdge& b) { return !(a == b); }
  friend bool operator<(const BondEdge& a, const BondEdge& b) {
    if (a.cell != b.cell) return a.cell < b.cell;
    return a.vertical < b.vertical;
  }
};

struct BondEdgeHash {
  size_t operator()(const BondEdge& e) const {
    return CellHash()(e.cell) * 2 + (e.vertical ? 1 : 0);
  }
};

// Glue-side pair: a glue id plus the axis ({E,W} or {N,S}) it bonds across.
struct GlueSidePair {
  int glue = kNullGlue;
  bool vertical = false;

  friend bool operator==(const GlueSidePair& a, const GlueSidePair& b) {
    return a.glue == b.glue && a.vertical == b.vertical;
  }
  friend bool operator<(const GlueSidePair& a, const GlueSidePair& b) {
    if (a.glue != b.glue) return a.glue < b.glue;
    return a.vertical < b.vertical;
  }
};

struct BondGraph {
  struct Edge {
    BondEdge e;
    int glue = kNullGlue;
    int strength = 0;
  };

  // Node order follows the assembly's canonical cell order.
  std::vector<Cell> nodes;
  std::vector<Edge> edges;                 // sorted by BondEdge order
  std::vector<std::vector<int>> adjacent;  // node -> incident edge indices

  int node_index(Cell c) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), c);
    if (it == nodes.end() || *it != c) fail(Errc::NoSuchEdge, "cell not in bond graph");
    return int(it - nodes.begin());
  }

  std::optional<int> edge_index(const BondEdge& e) const {
    auto it = std::lower_bound(edges.begin(), edges.end(), e,
                               [](const Edge& a, const BondEdge& b) { return a.e < b; });
    if (it != edges.end() && it->e == e) return int(it - edges.begin());
    return std::nullopt;
  }

  bool connected() const {
    if (nodes.empty()) return false;
    std::vector<char> seen(nodes.size(), 0);
    std::vector<int> stack = {0};
    seen[0] = 1;
    size_t reached = 1;
    while (!stack.empty()) {
      int i = stack.back();
      stack.pop_back();
      for (int ei : adjacent[i]) {
        const Edge& ed = edges[ei];
        int j = node_index(ed.e.cell == nodes[i] ? ed.e.other() : ed.e.cell);
        if (!seen[j]) {
          seen[j] = 1;
          ++reached;
          stack.push_back(j);
        }
      }
    }
    return reached == nodes.size();
  }
};

// Builds the weighted bond graph: an edge per lattice-adjacent pair whose
// facing glues are equal and non-null.
inline BondGraph bond_graph(const Assembly& a, const TileSystem& sys) {
  BondGraph g;
  g.nodes.reserve(a.size());
  for (const Placement& p : a.cells()) {
    if (p.tile < 0 || p.tile >= int(sys.size())) fail(Errc::BadSystem, "tile index out of range");
    g.nodes.push_back(p.cell);
  }
  for (const Placement& p : a.cells()) {
    const Tile& t = sys.tile(p.tile);
    // Each unordered adjacency is visited once via its E/N endpoint owner.
    for (Side s : {E, N}) {
      auto nb = a.tile_at(step(p.cell, s));
      if (!nb) continue;
      int mine = t.glue[s];
      int theirs = sys.tile(*nb).glue[opposite(s)];
      if (mine != kNullGlue && mine == theirs)
        g.edges.push_back({BondEdge{p.cell, s == N}, mine, sys.strength(mine)});
    }
  }
  std::sort(g.edges.begin(), g.edges.end(),
            [](const BondGraph::Edge& a, const BondGraph::Edge& b) { return a.e < b.e; });
  g.adjacent.assign(g.nodes.size(), {});
  for (size_t i = 0; i < g.edges.size(); ++i) {
    g.adjacent[g.node_index(g.edges[i].e.cell)].push_back(int(i));
    g.adjacent[g.node_index(g.edges[i].e.other())].push_back(int(i));
  }
  return g;
}

inline GlueSidePair pair_of(const BondGraph::Edge& e) { return {e.glue, e.e.vertical}; }

// True iff every lattice-adjacent pair of occupied cells has equal facing
// glues. Null vs non-null counts as a mismatch.
inline bool is_mismatch_free(const Assembly& a, const TileSystem& sys) {
  for (const Placement& p : a.cells()) {
    const Tile& t = sys.tile(p.tile);
    for (Side s : {E, N}) {
      auto nb = a.tile_at(step(p.cell, s));
      if (nb && t.glue[s] != sys.tile(*nb).glue[opposite(s)]) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Global minimum cut (Stoer-Wagner) and tau-stability

namespace detail {

// Classic O(n^3) Stoer-Wagner on an adjacency matrix. Requires a connected
// graph with n >= 2; returns the weight of the global minimum cut.
inline int64_t stoer_wagner(std::vector<std::vector<int64_t>> w) {
  size_t n = w.size();
  std::vector<int> active(n);
  for (size_t i = 0; i < n; ++i) active[i] = int(i);
  int64_t best = INT64_MAX;
  while (active.size() > 1) {
    size_t m = active.size();
    std::vector<int64_t> key(m, 0);
    std::vector<char> in(m, 0);
    int prev = -1, last = -1;
    for (size_t round = 0; round < m; ++round) {
      int pick = -1;
      for (size_t i = 0; i < m; ++i)
        if (!in[i] && (pick < 0 || key[i] > key[pick])) pick = int(i);
      in[pick] = 1;
      prev = last;
      last = pick;
      for (size_t i = 0; i < m; ++i)
        if (!in[i]) key[i] += w[active[pick]][active[i]];
    }
    best = std::min(best, key[last]);
    // merge last into prev
    int a = active[prev], b = active[last];
    for (size_t i = 0; i < n; ++i) {
      w[a][i] += w[b][i];
      w[i][a] += w[i][b];
    }
    active.erase(active.begin() + last);
  }
  return best;
}

}  // namespace detail

inline int64_t min_cut(const BondGraph& g) {
  size_t n = g.nodes.size();
  if (n < 2) fail(Errc::BadSystem, "min cut needs >= 2 nodes");
  std::vector<std::vector<int64_t>> w(n, std::vector<int64_t>(n, 0));
  for (const BondGraph::Edge& e : g.edges) {
    int a = g.node_index(e.e.cell), b = g.node_index(e.e.other());
    w[a][b] += e.strength;
    w[b][a] += e.strength;
  }
  return detail::stoer_wagner(std::move(w));
}

// tau-stable: bond graph connected and global min cut >= tau. Single-tile
// assemblies are stable at every temperature.
inline bool is_tau_stable(const Assembly& a, const TileSystem& sys, int tau) {
  if (a.size() == 1) return true;
  BondGraph g = bond_graph(a, sys);
  if (!g.connected()) return false;
  if (tau <= 1) return true;
  return min_cut(g) >= tau;
}

inline bool is_tau_stable(const Assembly& a, const TileSystem& sys) {
  return is_tau_stable(a, sys, sys.temperature);
}

// ---------------------------------------------------------------------------
// Occurrence counts and shapes

inline std::map<int, int> occurrence_counts(const Assembly& a) {
  std::map<int, int> counts;
  for (const Placement& p : a.cells()) ++counts[p.tile];
  return counts;
}

struct Shape {
  std::vector<Cell> cells;  // canonical: sorted, min x = min y = 0

  friend bool operator==(const Shape& a, const Shape& b) { return a.cells == b.cells; }
  friend bool operator!=(const Shape& a, const Shape& b) { return !(a == b); }
  size_t size() const { return cells.size(); }
};

inline Shape shape_of(const Assembly& a) {
  Shape s;
  s.cells.reserve(a.size());
  for (const Placement& p : a.cells()) s.cells.push_back(p.cell);
  return s;
}

inline Shape scale_shape(const Shape& s, int k) {
  if (k < 1) fail(Errc::BadSystem, "scale factor must be >= 1");
  Shape out;
  out.cells.reserve(s.cells.size() * size_t(k) * size_t(k));
  for (Cell c : s.cells)
    for (int dy = 0; dy < k; ++dy)
      for (int dx = 0; dx < k; ++dx) out.cells.push_back({c.x * k + dx, c.y * k + dy});
  std::sort(out.cells.begin(), out.cells.end());
  return out;
}

}  // namespace tilesep
