#include <functional>
#include <random>

#include "catch2/catch_amalgamated.hpp"
#include "fixtures.hpp"
#include "tilesep/core.hpp"

using namespace tilesep;

namespace {

// Brute-force global min cut: minimum crossing weight over all 2-partitions
// of the node set. Independent of the Stoer-Wagner path.
int64_t brute_min_cut(const BondGraph& g) {
  size_t n = g.nodes.size();
  REQUIRE(n >= 2);
  REQUIRE(n <= 16);
  int64_t best = INT64_MAX;
  for (uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
    int64_t cut = 0;
    for (const auto& e : g.edges) {
      int a = g.node_index(e.e.cell), b = g.node_index(e.e.other());
      if (((mask >> a) & 1) != ((mask >> b) & 1)) cut += e.strength;
    }
    best = std::min(best, cut);
  }
  return best;
}

// Random connected assembly over a throwaway system: one tile type per cell,
// spanning-tree adjacencies always bonded, the rest bonded with probability
// 1/2, random strengths in 1..3.
struct RandomFixture {
  TileSystem sys;
  Assembly assembly;
};

RandomFixture random_assembly(std::mt19937& rng, int cells) {
  std::vector<Cell> shape = {{0, 0}};
  std::set<std::pair<int, int>> used = {{0, 0}};
  while (int(shape.size()) < cells) {
    Cell base = shape[rng() % shape.size()];
    Side s = Side(rng() % 4);
    Cell nb = step(base, s);
    if (used.insert({nb.x, nb.y}).second) shape.push_back(nb);
  }

  TileSystem sys;
  sys.temperature = 1;
  std::map<std::pair<int, int>, int> index;
  std::vector<Tile> tiles(shape.size());
  for (size_t i = 0; i < shape.size(); ++i) {
    index[{shape[i].x, shape[i].y}] = int(i);
    tiles[i].name = "t" + std::to_string(i);
  }

  // spanning tree over the shape via BFS, then optional extra bonds
  std::set<int> reached = {0};
  std::vector<int> queue = {0};
  std::vector<std::pair<int, int>> tree_edges, extra_edges;
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    int u = queue[qi];
    for (Side s : kSides) {
      Cell nb = step(shape[u], s);
      auto it = index.find({nb.x, nb.y});
      if (it == index.end()) continue;
      if (!reached.count(it->second)) {
        reached.insert(it->second);
        queue.push_back(it->second);
        tree_edges.push_back({u, it->second});
      } else if (u < it->second) {
        extra_edges.push_back({u, it->second});
      }
    }
  }
  int glue_seq = 0;
  auto bond = [&](int u, int v) {
    Cell cu = shape[u], cv = shape[v];
    Side s;
    if (cv.x == cu.x + 1) s = E;
    else if (cv.x == cu.x - 1) s = W;
    else if (cv.y == cu.y + 1) s = N;
    else s = S;
    int strength = 1 + int(rng() % 3);
    int id = sys.intern_glue("e" + std::to_string(glue_seq++), strength);
    sys.set_strength(id, strength);
    tiles[u].glue[s] = id;
    tiles[v].glue[opposite(s)] = id;
  };
  for (auto [u, v] : tree_edges) bond(u, v);
  for (auto [u, v] : extra_edges)
    if (rng() % 2) bond(u, v);

  std::vector<Placement> placements;
  for (size_t i = 0; i < shape.size(); ++i) {
    sys.add_tile(tiles[i]);
    placements.push_back({shape[i], int(i)});
  }
  sys.validate();
  return {sys, canonicalize(placements)};
}

}  // namespace

TEST_CASE("canonicalize translates to min x = min y = 0") {
  TileSystem sys = fixtures::make_system(1, {{"t0", "-", "g", "-", "-"}, {"t1", "-", "-", "-", "g"},
                                             {"t2", "-", "-", "g2", "-"}});

  SECTION("single cell") {
    Assembly a = canonicalize(std::vector<Placement>{{{5, 7}, 0}});
    REQUIRE(a.cells().size() == 1);
    CHECK(a.cells()[0].cell == Cell{0, 0});
  }

  SECTION("already canonical is unchanged") {
    std::vector<Placement> raw = {{{0, 0}, 0}, {{1, 0}, 1}};
    Assembly a = canonicalize(raw);
    CHECK(a.cells() == raw);
  }

  SECTION("uniform shift") {
    Assembly a = canonicalize(std::vector<Placement>{{{-2, 3}, 0}, {{-1, 3}, 1}, {{-1, 4}, 2}});
    REQUIRE(a.size() == 3);
    CHECK(a.tile_at({0, 0}) == 0);
    CHECK(a.tile_at({1, 0}) == 1);
    CHECK(a.tile_at({1, 1}) == 2);
  }

  SECTION("errors") {
    CHECK_THROWS_AS(canonicalize(std::map<std::pair<int, int>, int>{}), Error);
    CHECK_THROWS_AS(canonicalize(std::vector<Placement>{{{0, 0}, 0}, {{2, 0}, 1}}), Error);
  }
}

TEST_CASE("canonicalize is idempotent and translation-invariant") {
  std::mt19937 rng(7);
  for (int round = 0; round < 30; ++round) {
    auto fx = random_assembly(rng, 2 + int(rng() % 9));
    const Assembly& a = fx.assembly;
    // idempotence
    CHECK(canonicalize(a.cells()) == a);
    // translation invariance
    int dx = int(rng() % 21) - 10, dy = int(rng() % 21) - 10;
    std::vector<Placement> moved = a.cells();
    for (Placement& p : moved) {
      p.cell.x += dx;
      p.cell.y += dy;
    }
    CHECK(canonicalize(moved) == a);
  }
}

TEST_CASE("bond_graph on fixtures") {
  SECTION("domino: 2 nodes, 1 edge of strength 1") {
    auto fx = fixtures::domino();
    BondGraph g = bond_graph(fx.terminal, fx.system);
    CHECK(g.nodes.size() == 2);
    REQUIRE(g.edges.size() == 1);
    CHECK(g.edges[0].e == BondEdge{{0, 0}, false});
    CHECK(g.edges[0].strength == 1);
  }

  SECTION("square4: 4 nodes, 4 edges forming a cycle") {
    auto fx = fixtures::square4();
    BondGraph g = bond_graph(fx.terminal, fx.system);
    CHECK(g.nodes.size() == 4);
    CHECK(g.edges.size() == 4);
    for (const auto& adj : g.adjacent) CHECK(adj.size() == 2);
  }

  SECTION("null-null adjacency contributes no edge") {
    TileSystem sys = fixtures::make_system(
        1, {{"a", "g", "-", "-", "-"}, {"b", "-", "-", "g", "-"}, {"x", "-", "-", "-", "-"}});
    // vertical domino a/b bonded, x to the east of a touching with null sides
    Assembly a = fixtures::make_assembly(sys, {{0, 0, "a"}, {0, 1, "b"}, {1, 0, "x"}});
    BondGraph g = bond_graph(a, sys);
    CHECK(g.nodes.size() == 3);
    CHECK(g.edges.size() == 1);
  }
}

TEST_CASE("is_mismatch_free") {
  auto fx = fixtures::domino();
  CHECK(is_mismatch_free(fx.terminal, fx.system));

  SECTION("differing facing glues are a mismatch") {
    TileSystem sys =
        fixtures::make_system(1, {{"a", "-", "g1", "-", "-"}, {"b", "-", "-", "-", "g2"},
                                  {"l", "-", "k", "-", "-"}, {"r", "-", "-", "-", "k"}});
    // connect a-b via an unrelated bonded row below to keep the domain valid
    Assembly two = Assembly::from_sorted({{{0, 0}, 0}, {{1, 0}, 1}});
    CHECK_FALSE(is_mismatch_free(two, sys));
  }

  SECTION("square4 is mismatch-free") {
    auto sq = fixtures::square4();
    CHECK(is_mismatch_free(sq.terminal, sq.system));
  }

  SECTION("null vs non-null is a mismatch") {
    TileSystem sys =
        fixtures::make_system(1, {{"a", "-", "g", "-", "g"}, {"b", "-", "-", "-", "g"}});
    Assembly a = fixtures::make_assembly(sys, {{0, 0, "a"}, {1, 0, "b"}});
    CHECK(is_mismatch_free(a, sys));  // the bonded seam itself matches
    Assembly b = Assembly::from_sorted({{{0, 0}, 1}, {{1, 0}, 0}});  // b west of a
    CHECK_FALSE(is_mismatch_free(b, sys));  // b.E null vs a.W=g
  }
}

TEST_CASE("is_tau_stable") {
  SECTION("domino: stable at tau=1, unstable at tau=2") {
    auto fx = fixtures::domino();
    CHECK(is_tau_stable(fx.terminal, fx.system, 1));
    CHECK_FALSE(is_tau_stable(fx.terminal, fx.system, 2));
  }

  SECTION("square4 at tau=2 with unit strengths") {
    auto fx = fixtures::square4();
    CHECK(is_tau_stable(fx.terminal, fx.system, 2));
    BondGraph g = bond_graph(fx.terminal, fx.system);
    CHECK(min_cut(g) == 2);
    CHECK(brute_min_cut(g) == 2);
  }

  SECTION("single tile is stable at every temperature") {
    auto fx = fixtures::lone();
    CHECK(is_tau_stable(fx.terminal, fx.system, 5));
  }

  SECTION("tau=1 reduces to connectivity (union-find oracle)") {
    std::mt19937 rng(11);
    for (int round = 0; round < 25; ++round) {
      auto fx = random_assembly(rng, 2 + int(rng() % 9));
      BondGraph g = bond_graph(fx.assembly, fx.sys);
      // independent union-find over edges
      std::vector<int> parent(g.nodes.size());
      for (size_t i = 0; i < parent.size(); ++i) parent[i] = int(i);
      std::function<int(int)> find = [&](int x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
      };
      for (const auto& e : g.edges)
        parent[find(g.node_index(e.e.cell))] = find(g.node_index(e.e.other()));
      bool connected = true;
      for (size_t i = 0; i < parent.size(); ++i)
        if (find(int(i)) != find(0)) connected = false;
      CHECK(is_tau_stable(fx.assembly, fx.sys, 1) == connected);
    }
  }

  SECTION("min cut matches brute force on random assemblies") {
    std::mt19937 rng(23);
    for (int round = 0; round < 40; ++round) {
      auto fx = random_assembly(rng, 2 + int(rng() % 11));
      BondGraph g = bond_graph(fx.assembly, fx.sys);
      if (!g.connected()) continue;
      CHECK(min_cut(g) == brute_min_cut(g));
    }
  }
}

TEST_CASE("occurrence_counts") {
  auto fx = fixtures::domino();
  auto counts = occurrence_counts(fx.terminal);
  CHECK(counts == std::map<int, int>{{0, 1}, {1, 1}});

  auto p3 = fixtures::path3();
  CHECK(occurrence_counts(p3.terminal) == std::map<int, int>{{0, 1}, {1, 1}, {2, 1}});

  auto st = fixtures::stack();
  Assembly three = Assembly::from_sorted({{{0, 0}, 0}, {{0, 1}, 0}, {{0, 2}, 0}});
  CHECK(occurrence_counts(three) == std::map<int, int>{{0, 3}});
}

TEST_CASE("shapes and scaling") {
  SECTION("unit square scales to a 2x2 block") {
    Shape s{{{0, 0}}};
    Shape scaled = scale_shape(s, 2);
    CHECK(scaled.cells == std::vector<Cell>{{0, 0}, {1, 0}, {0, 1}, {1, 1}});
  }

  SECTION("L-tromino scales to 12 cells") {
    Shape l{{{0, 0}, {1, 0}, {0, 1}}};
    Shape scaled = scale_shape(l, 2);
    CHECK(scaled.size() == 12);
    CHECK(scaled.cells == std::vector<Cell>{{0, 0}, {1, 0}, {2, 0}, {3, 0}, {0, 1}, {1, 1},
                                            {2, 1}, {3, 1}, {0, 2}, {1, 2}, {0, 3}, {1, 3}});
  }

  SECTION("k=1 is the identity") {
    auto fx = fixtures::block2x3();
    Shape s = shape_of(fx.terminal);
    CHECK(scale_shape(s, 1) == s);
  }

  SECTION("|scale(s,k)| = k^2 |s| on random shapes") {
    std::mt19937 rng(31);
    for (int round = 0; round < 20; ++round) {
      auto fx = random_assembly(rng, 1 + int(rng() % 10));
      Shape s = shape_of(fx.assembly);
      for (int k : {1, 2, 3}) CHECK(scale_shape(s, k).size() == size_t(k) * size_t(k) * s.size());
    }
  }
}

TEST_CASE("tile system validation") {
  SECTION("duplicate glue arrays are rejected") {
    TileSystem sys;
    sys.temperature = 1;
    Tile a, b;
    a.name = "a";
    b.name = "b";
    a.glue[E] = b.glue[E] = sys.intern_glue("g");
    sys.add_tile(a);
    sys.add_tile(b);
    CHECK_THROWS_AS(sys.validate(), Error);
  }
}
