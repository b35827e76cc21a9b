#pragma once

#include <map>
#include <set>
#include <sstream>

#include "tilesep/core.hpp"

// Structural analyses of a claimed UMFTA instance: glue-side-pair statistics,
// cycle machinery, and a linter for the necessary conditions a temperature-1
// unique mismatch-free terminal assembly must satisfy. Every check here is
// necessary, not sufficient; callers combine with sim::is_umfta.
namespace tilesep {

enum class DiagCode {
  RepeatedPairOnCycle,
  PairOnAndOffCycle,
  OneOccDisconnected,
  TwoOccDifferentGlueSide,
  Mismatch,
  MultipleTerminals,
  Growth,
};

inline const char* diag_code_name(DiagCode c) {
  switch (c) {
    case DiagCode::RepeatedPairOnCycle: return "RepeatedPairOnCycle";
    case DiagCode::PairOnAndOffCycle: return "PairOnAndOffCycle";
    case DiagCode::OneOccDisconnected: return "OneOccDisconnected";
    case DiagCode::TwoOccDifferentGlueSide: return "TwoOccDifferentGlueSide";
    case DiagCode::Mismatch: return "Mismatch";
    case DiagCode::MultipleTerminals: return "MultipleTerminals";
    case DiagCode::Growth: return "Growth";
  }
  return "?";
}

struct Diagnostic {
  DiagCode code;
  std::vector<Cell> locations;
  std::string message;

  std::string str() const {
    std::ostringstream out;
    out << diag_code_name(code);
    for (Cell c : locations) out << " (" << c.x << "," << c.y << ")";
    out << " " << message;
    return out.str();
  }
};

// ---------------------------------------------------------------------------
// Glue-side-pair index

inline std::map<GlueSidePair, std::vector<BondEdge>> glue_side_pair_index(const Assembly& a,
                                                                          const TileSystem& sys) {
  std::map<GlueSidePair, std::vector<BondEdge>> index;
  for (const BondGraph::Edge& e : bond_graph(a, sys).edges) index[pair_of(e)].push_back(e.e);
  return index;
}

// ---------------------------------------------------------------------------
// Cycle machinery

inline bool is_tree(const BondGraph& g) {
  return g.connected() && g.edges.size() + 1 == g.nodes.size();
}

// Fundamental cycles of the canonical spanning tree (edges admitted in
// BondEdge order). Each cycle is returned as a list of edge indices.
inline std::vector<std::vector<int>> find_simple_cycles(const BondGraph& g) {
  size_t n = g.nodes.size();
  std::vector<int> parent_edge(n, -1), parent(n, -1), depth(n, 0);
  std::vector<char> in_tree(g.edges.size(), 0), seen(n, 0);
  // BFS over edges in canonical order per node builds a deterministic tree.
  std::vector<int> queue = {0};
  seen[0] = 1;
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    int u = queue[qi];
    std::vector<int> inc = g.adjacent[u];
    std::sort(inc.begin(), inc.end());
    for (int ei : inc) {
      const auto& ed = g.edges[ei];
      int v = g.node_index(ed.e.cell == g.nodes[u] ? ed.e.other() : ed.e.cell);
      if (seen[v]) continue;
      seen[v] = 1;
      in_tree[ei] = 1;
      parent[v] = u;
      parent_edge[v] = ei;
      depth[v] = depth[u] + 1;
      queue.push_back(v);
    }
  }
  std::vector<std::vector<int>> cycles;
  for (size_t ei = 0; ei < g.edges.size(); ++ei) {
    if (in_tree[ei]) continue;
    int u = g.node_index(g.edges[ei].e.cell);
    int v = g.node_index(g.edges[ei].e.other());
    std::vector<int> left, right;
    int a = u, b = v;
    while (depth[a] > depth[b]) {
      left.push_back(parent_edge[a]);
      a = parent[a];
    }
    while (depth[b] > depth[a]) {
      right.push_back(parent_edge[b]);
      b = parent[b];
    }
    while (a != b) {
      left.push_back(parent_edge[a]);
      right.push_back(parent_edge[b]);
      a = parent[a];
      b = parent[b];
    }
    std::reverse(right.begin(), right.end());
    std::vector<int> cycle = {int(ei)};
    cycle.insert(cycle.end(), left.begin(), left.end());
    cycle.insert(cycle.end(), right.begin(), right.end());
    cycles.push_back(std::move(cycle));
  }
  return cycles;
}

// Bridge edges by DFS lowlink. An edge lies on a simple cycle iff it is not
// a bridge.
inline std::vector<char> bridge_edges(const BondGraph& g) {
  size_t n = g.nodes.size();
  std::vector<char> bridge(g.edges.size(), 0);
  std::vector<int> disc(n, -1), low(n, 0);
  int timer = 0;
  // iterative DFS
  struct Frame {
    int node;
    int via_edge;
    size_t next = 0;
  };
  for (size_t root = 0; root < n; ++root) {
    if (disc[root] != -1) continue;
    std::vector<Frame> stack = {{int(root), -1}};
    disc[root] = low[root] = timer++;
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next < g.adjacent[f.node].size()) {
        int ei = g.adjacent[f.node][f.next++];
        if (ei == f.via_edge) continue;
        const auto& ed = g.edges[ei];
        int v = g.node_index(ed.e.cell == g.nodes[f.node] ? ed.e.other() : ed.e.cell);
        if (disc[v] == -1) {
          disc[v] = low[v] = timer++;
          stack.push_back({v, ei});
        } else {
          low[f.node] = std::min(low[f.node], disc[v]);
        }
      } else {
        int child = f.node, via = f.via_edge;
        stack.pop_back();
        if (!stack.empty()) {
          int parent = stack.back().node;
          low[parent] = std::min(low[parent], low[child]);
          if (low[child] > disc[parent]) bridge[via] = 1;
        }
      }
    }
  }
  return bridge;
}

namespace detail {

// Two fully vertex-disjoint paths between the endpoint sets of two disjoint
// edges, via max-flow with unit vertex capacities. With the edges themselves
// removed, flow >= 2 iff some simple cycle passes through both edges.
inline bool two_vertex_disjoint_paths(const BondGraph& g, int e1, int e2) {
  size_t n = g.nodes.size();
  int u1 = g.node_index(g.edges[e1].e.cell), v1 = g.node_index(g.edges[e1].e.other());
  int u2 = g.node_index(g.edges[e2].e.cell), v2 = g.node_index(g.edges[e2].e.other());

  // Shared-vertex case: edges (a,x),(x,b) lie on a common simple cycle iff
  // a path from a to b avoids x (and both edges).
  std::vector<int> shared;
  for (int p : {u1, v1})
    for (int q : {u2, v2})
      if (p == q) shared.push_back(p);
  if (!shared.empty()) {
    int x = shared[0];
    int a = (u1 == x) ? v1 : u1;
    int b = (u2 == x) ? v2 : u2;
    std::vector<char> seen(n, 0);
    seen[x] = 1;
    std::vector<int> stack = {a};
    seen[a] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      if (u == b) return true;
      for (int ei : g.adjacent[u]) {
        if (ei == e1 || ei == e2) continue;
        const auto& ed = g.edges[ei];
        int v = g.node_index(ed.e.cell == g.nodes[u] ? ed.e.other() : ed.e.cell);
        if (!seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
    return false;
  }

  // Vertex-split flow network: node i -> (in=2i, out=2i+1), capacity 1.
  // Source feeds u1,v1; u2,v2 feed the sink. Need flow >= 2, so at most two
  // BFS augmentations.
  int source = int(2 * n), sink = int(2 * n) + 1, V = sink + 1;
  std::map<std::pair<int, int>, int> cap;
  auto add = [&](int a, int b, int c) { cap[{a, b}] += c; };
  for (size_t i = 0; i < n; ++i) add(int(2 * i), int(2 * i + 1), 1);
  for (size_t ei = 0; ei < g.edges.size(); ++ei) {
    if (int(ei) == e1 || int(ei) == e2) continue;
    int a = g.node_index(g.edges[ei].e.cell), b = g.node_index(g.edges[ei].e.other());
    add(2 * a + 1, 2 * b, 1);
    add(2 * b + 1, 2 * a, 1);
  }
  add(source, 2 * u1, 1);
  add(source, 2 * v1, 1);
  add(2 * u2 + 1, sink, 1);
  add(2 * v2 + 1, sink, 1);

  int flow = 0;
  while (flow < 2) {
    std::vector<int> prev(V, -1);
    std::vector<int> queue = {source};
    prev[source] = source;
    for (size_t qi = 0; qi < queue.size() && prev[sink] == -1; ++qi) {
      int u = queue[qi];
      for (auto& [key, c] : cap) {
        if (key.first != u || c <= 0 || prev[key.second] != -1) continue;
        prev[key.second] = u;
        queue.push_back(key.second);
      }
    }
    if (prev[sink] == -1) break;
    for (int v = sink; v != source; v = prev[v]) {
      cap[{prev[v], v}] -= 1;
      cap[{v, prev[v]}] += 1;
    }
    ++flow;
  }
  return flow >= 2;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Linter

// Necessary conditions for a temperature-1 UMFTA, each mapped to one
// diagnostic code:
//   (a) mismatch-free                                    -> Mismatch
//   (b) no glue-side pair twice on a simple cycle        -> RepeatedPairOnCycle
//   (c) per pair: edges all on cycles or all bridges     -> PairOnAndOffCycle
//   (d) tree with >= 2 cells has >= 2 one-occurrence     -> Growth
//       tile types (their absence lets the assembly
//       replicate without bound)
//   (e) one-occurrence cells induce a connected subgraph -> OneOccDisconnected
//   (f) a pair joining two one-occurrence tiles occurs   -> MultipleTerminals
//       exactly once (reuse yields a second terminal)
//   (g) tree paths between same-tile occurrences enter   -> TwoOccDifferentGlueSide
//       both via the same glue-side
inline std::vector<Diagnostic> lint_umfta(const TileSystem& sys, const Assembly& a) {
  std::vector<Diagnostic> out;
  BondGraph g = bond_graph(a, sys);

  // (a)
  for (const Placement& p : a.cells()) {
    const Tile& t = sys.tile(p.tile);
    for (Side s : {E, N}) {
      auto nb = a.tile_at(step(p.cell, s));
      if (nb && t.glue[s] != sys.tile(*nb).glue[opposite(s)])
        out.push_back({DiagCode::Mismatch,
                       {p.cell, step(p.cell, s)},
                       "facing glues " + sys.glue_name(t.glue[s]) + " vs " +
                           sys.glue_name(sys.tile(*nb).glue[opposite(s)]) + " differ"});
    }
  }

  std::map<GlueSidePair, std::vector<int>> pair_edges;
  for (size_t ei = 0; ei < g.edges.size(); ++ei)
    pair_edges[pair_of(g.edges[ei])].push_back(int(ei));

  // (b): for each pair of edges carrying the same glue-side pair, test for a
  // common simple cycle via two vertex-disjoint paths.
  for (const auto& [pair, edges] : pair_edges) {
    if (edges.size() < 2) continue;
    bool reported = false;
    for (size_t i = 0; i < edges.size() && !reported; ++i)
      for (size_t j = i + 1; j < edges.size() && !reported; ++j)
        if (detail::two_vertex_disjoint_paths(g, edges[i], edges[j])) {
          out.push_back({DiagCode::RepeatedPairOnCycle,
                         {g.edges[edges[i]].e.cell, g.edges[edges[j]].e.cell},
                         "glue-side pair (" + sys.glue_name(pair.glue) + "," +
                             (pair.vertical ? "vertical" : "horizontal") +
                             ") appears twice on a simple cycle"});
          reported = true;
        }
  }

  // (c)
  std::vector<char> bridge = bridge_edges(g);
  for (const auto& [pair, edges] : pair_edges) {
    bool any_bridge = false, any_cycle = false;
    for (int ei : edges) (bridge[ei] ? any_bridge : any_cycle) = true;
    if (any_bridge && any_cycle) {
      std::vector<Cell> locs;
      for (int ei : edges) locs.push_back(g.edges[ei].e.cell);
      out.push_back({DiagCode::PairOnAndOffCycle, locs,
                     "glue-side pair (" + sys.glue_name(pair.glue) + "," +
                         (pair.vertical ? "vertical" : "horizontal") +
                         ") lies both on and off simple cycles"});
    }
  }

  bool tree = is_tree(g);
  std::map<int, int> counts = occurrence_counts(a);

  // (d)
  if (tree && a.size() >= 2) {
    int ones = 0;
    for (const auto& [t, k] : counts)
      if (k == 1) ++ones;
    if (ones < 2)
      out.push_back({DiagCode::Growth,
                     {},
                     "tree assembly has " + std::to_string(ones) +
                         " one-occurrence tile type(s); at least two are required"});
  }

  // (e): one-occurrence cells must induce a connected subgraph of G(A).
  {
    std::vector<int> one_cells;
    for (size_t i = 0; i < a.cells().size(); ++i)
      if (counts[a.cells()[i].tile] == 1) one_cells.push_back(int(i));
    if (one_cells.size() > 1) {
      std::set<int> members(one_cells.begin(), one_cells.end());
      std::set<int> seen = {one_cells[0]};
      std::vector<int> stack = {one_cells[0]};
      while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int ei : g.adjacent[u]) {
          const auto& ed = g.edges[ei];
          int v = g.node_index(ed.e.cell == g.nodes[u] ? ed.e.other() : ed.e.cell);
          if (members.count(v) && !seen.count(v)) {
            seen.insert(v);
            stack.push_back(v);
          }
        }
      }
      if (seen.size() != members.size()) {
        std::vector<Cell> locs;
        for (int i : one_cells) locs.push_back(a.cells()[i].cell);
        out.push_back({DiagCode::OneOccDisconnected, locs,
                       "one-occurrence tiles do not form a connected subassembly"});
      }
    }
  }

  // (f)
  for (const auto& [pair, edges] : pair_edges) {
    if (edges.size() < 2) continue;
    for (int ei : edges) {
      const auto& ed = g.edges[ei];
      int ta = *a.tile_at(ed.e.cell), tb = *a.tile_at(ed.e.other());
      if (counts[ta] == 1 && counts[tb] == 1) {
        out.push_back({DiagCode::MultipleTerminals,
                       {ed.e.cell, ed.e.other()},
                       "glue-side pair (" + sys.glue_name(pair.glue) + "," +
                           (pair.vertical ? "vertical" : "horizontal") +
                           ") joins two one-occurrence tiles but occurs " +
                           std::to_string(edges.size()) + " times"});
        break;
      }
    }
  }

  // (g): tree paths between two occurrences of one tile type must use the
  // same glue-side of that tile at both ends.
  if (tree) {
    std::map<int, std::vector<int>> occ;  // tile -> node indices
    for (size_t i = 0; i < a.cells().size(); ++i) occ[a.cells()[i].tile].push_back(int(i));
    for (const auto& [t, nodes] : occ) {
      if (nodes.size() < 2) continue;
      bool reported = false;
      for (size_t i = 0; i < nodes.size() && !reported; ++i)
        for (size_t j = i + 1; j < nodes.size() && !reported; ++j) {
          // BFS path in the tree between the two occurrences.
          std::vector<int> prev(g.nodes.size(), -1), prev_edge(g.nodes.size(), -1);
          std::vector<int> queue = {nodes[i]};
          prev[nodes[i]] = nodes[i];
          for (size_t qi = 0; qi < queue.size(); ++qi) {
            int u = queue[qi];
            for (int ei : g.adjacent[u]) {
              const auto& ed = g.edges[ei];
              int v = g.node_index(ed.e.cell == g.nodes[u] ? ed.e.other() : ed.e.cell);
              if (prev[v] == -1) {
                prev[v] = u;
                prev_edge[v] = ei;
                queue.push_back(v);
              }
            }
          }
          auto entry_side = [&](int node, int ei) -> Side {
            const auto& ed = g.edges[ei];
            bool lower = g.nodes[node] == ed.e.cell;  // west/south endpoint
            if (ed.e.vertical) return lower ? N : S;
            return lower ? E : W;
          };
          int last_edge = prev_edge[nodes[j]];
          // first edge out of nodes[i] along the path
          int walk = nodes[j];
          while (prev[walk] != nodes[i]) walk = prev[walk];
          int first_edge = prev_edge[walk];
          Side si = entry_side(nodes[i], first_edge);
          Side sj = entry_side(nodes[j], last_edge);
          if (si != sj) {
            out.push_back({DiagCode::TwoOccDifferentGlueSide,
                           {g.nodes[nodes[i]], g.nodes[nodes[j]]},
                           "tile " + sys.tile(t).name + " is entered via side " +
                               side_name(si) + " at one occurrence and side " + side_name(sj) +
                               " at another"});
            reported = true;
          }
        }
    }
  }

  return out;
}

// ---------------------------------------------------------------------------
// One-occurrence structure

// Restriction of the assembly to cells holding 1-occurrence tiles. Requires
// lint item (e): the restriction must be connected.
inline Assembly one_occurrence_subassembly(const Assembly& a, const TileSystem& sys) {
  std::map<int, int> counts = occurrence_counts(a);
  std::vector<Placement> cells;
  for (const Placement& p : a.cells())
    if (counts[p.tile] == 1) cells.push_back(p);
  if (cells.empty()) fail(Errc::NotConnected, "no one-occurrence tiles");
  // Connectivity must hold within the bond graph, not just the lattice.
  BondGraph g = bond_graph(a, sys);
  std::set<Cell> members;
  for (const Placement& p : cells) members.insert(p.cell);
  std::set<Cell> seen = {cells[0].cell};
  std::vector<Cell> stack = {cells[0].cell};
  while (!stack.empty()) {
    Cell u = stack.back();
    stack.pop_back();
    for (int ei : g.adjacent[g.node_index(u)]) {
      const auto& ed = g.edges[ei];
      Cell v = ed.e.cell == u ? ed.e.other() : ed.e.cell;
      if (members.count(v) && !seen.count(v)) {
        seen.insert(v);
        stack.push_back(v);
      }
    }
  }
  if (seen.size() != members.size())
    fail(Errc::NotConnected, "one-occurrence tiles do not form a connected subassembly");
  return canonicalize(cells);
}

// The lexicographically least bond edge joining two 1-occurrence tiles.
inline BondEdge find_one_occurrence_edge(const Assembly& a, const TileSystem& sys) {
  BondGraph g = bond_graph(a, sys);
  if (!is_tree(g)) fail(Errc::NoSuchEdge, "bond graph is not a tree");
  if (a.size() < 2) fail(Errc::NoSuchEdge, "assembly has fewer than two cells");
  std::map<int, int> counts = occurrence_counts(a);
  for (const BondGraph::Edge& e : g.edges) {
    int ta = *a.tile_at(e.e.cell), tb = *a.tile_at(e.e.other());
    if (counts[ta] == 1 && counts[tb] == 1) return e.e;
  }
  fail(Errc::NoSuchEdge, "no bond edge joins two one-occurrence tiles");
}

}  // namespace tilesep
