#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "tilesep/core.hpp"

// Shared desk-scale fixtures. Each gives a tile system plus (where
// meaningful) the assembly the tests treat as the claimed terminal.
namespace fixtures {

using tilesep::Assembly;
using tilesep::Placement;
using tilesep::Tile;
using tilesep::TileSystem;

struct TileSpec {
  std::string name;
  std::string n, e, s, w;
};

inline TileSystem make_system(int temperature, std::initializer_list<TileSpec> tiles) {
  TileSystem sys;
  sys.temperature = temperature;
  for (const TileSpec& ts : tiles) {
    Tile t;
    t.name = ts.name;
    t.glue[tilesep::N] = ts.n == "-" ? tilesep::kNullGlue : sys.intern_glue(ts.n);
    t.glue[tilesep::E] = ts.e == "-" ? tilesep::kNullGlue : sys.intern_glue(ts.e);
    t.glue[tilesep::S] = ts.s == "-" ? tilesep::kNullGlue : sys.intern_glue(ts.s);
    t.glue[tilesep::W] = ts.w == "-" ? tilesep::kNullGlue : sys.intern_glue(ts.w);
    sys.add_tile(t);
  }
  sys.validate();
  return sys;
}

struct CellSpec {
  int x, y;
  std::string tile;
};

inline Assembly make_assembly(const TileSystem& sys, std::initializer_list<CellSpec> cells) {
  std::vector<Placement> placements;
  for (const CellSpec& cs : cells) placements.push_back({{cs.x, cs.y}, *sys.find_tile(cs.tile)});
  return tilesep::canonicalize(placements);
}

struct Fixture {
  TileSystem system;
  Assembly terminal;
};

// a -g- b
inline Fixture domino() {
  TileSystem sys = make_system(1, {{"a", "-", "g", "-", "-"}, {"b", "-", "-", "-", "g"}});
  return {sys, make_assembly(sys, {{0, 0, "a"}, {1, 0, "b"}})};
}

// a -g- b -h- c
inline Fixture path3() {
  TileSystem sys = make_system(
      1, {{"a", "-", "g", "-", "-"}, {"b", "-", "h", "-", "g"}, {"c", "-", "-", "-", "h"}});
  return {sys, make_assembly(sys, {{0, 0, "a"}, {1, 0, "b"}, {2, 0, "c"}})};
}

// 2x2 ring: bottom h1, right v2, top h2, left v1.
inline Fixture square4() {
  TileSystem sys = make_system(1, {{"a", "v1", "h1", "-", "-"},
                                   {"b", "v2", "-", "-", "h1"},
                                   {"c", "-", "-", "v2", "h2"},
                                   {"d", "-", "h2", "v1", "-"}});
  return {sys,
          make_assembly(sys, {{0, 0, "a"}, {1, 0, "b"}, {1, 1, "c"}, {0, 1, "d"}})};
}

// T-shaped star: center with west/east/north leaves.
inline Fixture star4() {
  TileSystem sys = make_system(1, {{"l1", "-", "g1", "-", "-"},
                                   {"c", "g3", "g2", "-", "g1"},
                                   {"l2", "-", "-", "-", "g2"},
                                   {"l3", "-", "-", "g3", "-"}});
  return {sys,
          make_assembly(sys, {{0, 0, "l1"}, {1, 0, "c"}, {2, 0, "l2"}, {1, 1, "l3"}})};
}

// 2x3 block, distinct glues on all 7 bonded edges.
inline Fixture block2x3() {
  TileSystem sys = make_system(1, {{"p0", "v1", "b1", "-", "-"},
                                   {"p1", "v2", "b2", "-", "b1"},
                                   {"p2", "v3", "-", "-", "b2"},
                                   {"q0", "-", "t1", "v1", "-"},
                                   {"q1", "-", "t2", "v2", "t1"},
                                   {"q2", "-", "-", "v3", "t2"}});
  return {sys, make_assembly(sys, {{0, 0, "p0"},
                                   {1, 0, "p1"},
                                   {2, 0, "p2"},
                                   {0, 1, "q0"},
                                   {1, 1, "q1"},
                                   {2, 1, "q2"}})};
}

// L-tromino: a at the corner, b east, c north.
inline Fixture ltromino() {
  TileSystem sys = make_system(
      1, {{"a", "h", "g", "-", "-"}, {"b", "-", "-", "-", "g"}, {"c", "-", "-", "h", "-"}});
  return {sys, make_assembly(sys, {{0, 0, "a"}, {1, 0, "b"}, {0, 1, "c"}})};
}

// Single self-stacking tile: infinite vertical growth.
inline Fixture stack() {
  TileSystem sys = make_system(1, {{"t", "g", "-", "g", "-"}});
  return {sys, make_assembly(sys, {{0, 0, "t"}, {0, 1, "t"}})};
}

// Single tile bonding nothing: its own terminal.
inline Fixture lone() {
  TileSystem sys = make_system(1, {{"z", "-", "-", "-", "-"}});
  return {sys, make_assembly(sys, {{0, 0, "z"}})};
}

// Tree UMFTA with a 2-occurrence tile type: two t leaves on a 2-cell base.
inline Fixture tcomb() {
  TileSystem sys = make_system(
      1, {{"c1", "g", "h", "-", "-"}, {"c2", "g", "-", "-", "h"}, {"t", "-", "-", "g", "-"}});
  return {sys, make_assembly(sys, {{0, 0, "c1"}, {1, 0, "c2"}, {0, 1, "t"}, {1, 1, "t"}})};
}

// --- Adversarial linter fixtures -------------------------------------------
// Each violates exactly one lint check; sim confirms the failure mode.

// (a) Mismatch: square with one mismatched seam plus an unattachable tile.
inline Fixture lint_mismatch() {
  TileSystem sys = make_system(1, {{"a", "p4", "g1", "-", "-"},
                                   {"b", "g2", "-", "-", "g1"},
                                   {"c", "-", "-", "g2", "m1"},
                                   {"d", "-", "m2", "p4", "-"},
                                   {"z", "zz", "-", "-", "-"}});
  return {sys,
          make_assembly(sys, {{0, 0, "a"}, {1, 0, "b"}, {1, 1, "c"}, {0, 1, "d"}})};
}

// (b) RepeatedPairOnCycle: pair (va, vertical) twice on the outer cycle of a
// 2x3 block whose corners reuse tile u.
inline Fixture lint_repeated_pair_on_cycle() {
  TileSystem sys = make_system(1, {{"u", "va", "g1", "-", "g0"},
                                   {"m", "vm", "g0", "-", "g1"},
                                   {"t4", "-", "h1", "va", "-"},
                                   {"t5", "-", "h2", "vm", "h1"},
                                   {"t6", "-", "-", "va", "h2"}});
  return {sys, make_assembly(sys, {{0, 0, "u"},
                                   {1, 0, "m"},
                                   {2, 0, "u"},
                                   {0, 1, "t4"},
                                   {1, 1, "t5"},
                                   {2, 1, "t6"}})};
}

// (c) PairOnAndOffCycle: pair (g, horizontal) once on the square cycle and
// once on the tail bridge.
inline Fixture lint_pair_on_and_off_cycle() {
  TileSystem sys = make_system(1, {{"u", "v2", "g", "-", "g"},
                                   {"t2", "v1", "g", "-", "g"},
                                   {"t3", "-", "-", "v1", "h"},
                                   {"t4", "-", "h", "v2", "-"}});
  return {sys, make_assembly(sys, {{0, 0, "u"},
                                   {1, 0, "t2"},
                                   {1, 1, "t3"},
                                   {0, 1, "t4"},
                                   {2, 0, "u"}})};
}

// (e) OneOccDisconnected: a hook whose repeated tiles pass the same-side
// check, with an extra leaf z far from the other 1-occurrence tiles.
inline Fixture lint_one_occ_disconnected() {
  TileSystem sys = make_system(1, {{"t", "-", "g", "zz", "-"},
                                   {"p", "a", "-", "-", "g"},
                                   {"q1", "-", "b", "a", "-"},
                                   {"q2", "-", "c", "-", "b"},
                                   {"q3", "-", "-", "a", "c"},
                                   {"z", "zz", "-", "-", "-"}});
  return {sys, make_assembly(sys, {{0, -1, "z"},
                                   {0, 0, "t"},
                                   {1, 0, "p"},
                                   {2, 0, "t"},
                                   {3, 0, "p"},
                                   {1, 1, "q1"},
                                   {2, 1, "q2"},
                                   {3, 1, "q3"}})};
}

// (f) MultipleTerminals: pair (g, horizontal) joins 1-occurrence tiles a,b
// and recurs between c,d, so the short assembly a-d is a second terminal.
inline Fixture lint_pair_reuse() {
  TileSystem sys = make_system(1, {{"a", "-", "g", "-", "-"},
                                   {"b", "-", "h", "-", "g"},
                                   {"c", "-", "g", "-", "h"},
                                   {"d", "-", "-", "-", "g"}});
  return {sys,
          make_assembly(sys, {{0, 0, "a"}, {1, 0, "b"}, {2, 0, "c"}, {3, 0, "d"}})};
}

// (g) TwoOccDifferentGlueSide: tile t self-chains horizontally, so its two
// occurrences are entered via E and W.
inline Fixture lint_two_occ_sides() {
  TileSystem sys = make_system(
      1,
      {{"t", "-", "g", "-", "g"}, {"b", "-", "j", "-", "g"}, {"c", "-", "-", "-", "j"}});
  return {sys,
          make_assembly(sys, {{0, 0, "t"}, {1, 0, "t"}, {2, 0, "b"}, {3, 0, "c"}})};
}

// (d) Growth: tree assembly with fewer than two 1-occurrence tile types.
// A single self-stacking tile pair also violates the same-side check (g);
// see the acceptance notes on why check (d) cannot fire alone.
inline Fixture lint_too_few_one_occ() { return stack(); }

}  // namespace fixtures
