#include <set>

#include "catch2/catch_amalgamated.hpp"
#include "fixtures.hpp"
#include "tilesep/sim.hpp"

using namespace tilesep;

namespace {

Assembly single(const TileSystem& sys, const std::string& name) {
  return canonicalize(std::vector<Placement>{{{0, 0}, *sys.find_tile(name)}});
}

// Independent oracle for the producible set of a temperature-1 system: every
// 1-stable assembly over T arises by growing single tiles one at a time, so
// enumerate exactly that, sharing no code with attachment_offsets.
std::set<Assembly> seeded_growth_enumeration(const TileSystem& sys, size_t max_size) {
  REQUIRE(sys.temperature == 1);
  std::set<Assembly> out;
  std::vector<Assembly> frontier;
  for (size_t t = 0; t < sys.size(); ++t) {
    Assembly a = canonicalize(std::vector<Placement>{{{0, 0}, int(t)}});
    out.insert(a);
    frontier.push_back(a);
  }
  while (!frontier.empty()) {
    Assembly a = frontier.back();
    frontier.pop_back();
    if (a.size() >= max_size) continue;
    for (const Placement& p : a.cells()) {
      for (Side s : kSides) {
        Cell spot = step(p.cell, s);
        if (a.occupied(spot)) continue;
        for (size_t t = 0; t < sys.size(); ++t) {
          // the new tile must bond at least once with its occupied neighbors
          int bonds = 0;
          for (Side d : kSides) {
            auto nb = a.tile_at(step(spot, d));
            if (!nb) continue;
            int g = sys.tile(t).glue[d];
            if (g != kNullGlue && g == sys.tile(*nb).glue[opposite(d)]) bonds += sys.strength(g);
          }
          if (bonds < 1) continue;
          std::vector<Placement> cells = a.cells();
          cells.push_back({spot, int(t)});
          Assembly grown = canonicalize(cells);
          if (out.insert(grown).second) frontier.push_back(grown);
        }
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("attachment_offsets") {
  SECTION("two singles of the domino system attach in exactly one way") {
    auto fx = fixtures::domino();
    auto offsets = attachment_offsets(single(fx.system, "a"), single(fx.system, "b"), fx.system);
    REQUIRE(offsets.size() == 1);
    CHECK(offsets[0].offset == std::pair<int, int>{1, 0});
    CHECK(offsets[0].combined == fx.terminal);
  }

  SECTION("the domino terminal accepts no further single tile") {
    auto fx = fixtures::domino();
    CHECK(attachment_offsets(fx.terminal, single(fx.system, "a"), fx.system).empty());
    CHECK(attachment_offsets(fx.terminal, single(fx.system, "b"), fx.system).empty());
  }

  SECTION("a strength-1 seam does not meet temperature 2") {
    TileSystem sys = fixtures::make_system(
        2, {{"a", "-", "g", "-", "-"}, {"b", "-", "-", "-", "g"}});
    CHECK(attachment_offsets(single(sys, "a"), single(sys, "b"), sys).empty());
  }
}

TEST_CASE("enumerate_producibles on the fixtures") {
  SECTION("domino: {a, b, ab}, terminal ab") {
    auto fx = fixtures::domino();
    ClosureResult closure = enumerate_producibles(fx.system, {10, 100});
    CHECK(closure.saturated);
    REQUIRE(closure.producibles.size() == 3);
    REQUIRE(closure.terminals.size() == 1);
    CHECK(closure.producibles[closure.terminals[0]] == fx.terminal);
  }

  SECTION("path3: 3 singles, 2 dominoes, 1 terminal") {
    auto fx = fixtures::path3();
    ClosureResult closure = enumerate_producibles(fx.system, {10, 100});
    CHECK(closure.saturated);
    CHECK(closure.producibles.size() == 6);
    REQUIRE(closure.terminals.size() == 1);
    CHECK(closure.producibles[closure.terminals[0]] == fx.terminal);
  }

  SECTION("square4: unique terminal is the full square") {
    auto fx = fixtures::square4();
    ClosureResult closure = enumerate_producibles(fx.system, {10, 1000});
    CHECK(closure.saturated);
    REQUIRE(closure.terminals.size() == 1);
    CHECK(closure.producibles[closure.terminals[0]] == fx.terminal);
  }

  SECTION("self-stacking tile: lines up to the cap, unsaturated") {
    auto fx = fixtures::stack();
    ClosureResult closure = enumerate_producibles(fx.system, {6, 100});
    CHECK_FALSE(closure.saturated);
    CHECK(closure.cap_hits.size_rejects > 0);
    CHECK(closure.producibles.size() == 6);  // vertical lines of length 1..6
    CHECK(closure.terminals.empty());
  }
}

TEST_CASE("is_umfta verdicts") {
  SECTION("domino: yes, witness is the domino") {
    auto fx = fixtures::domino();
    UmftaResult r = is_umfta(fx.system, {10, 100});
    CHECK(r.verdict == Verdict::Yes);
    REQUIRE(r.witness);
    CHECK(*r.witness == fx.terminal);
  }

  SECTION("stacking system: unknown with a growth witness") {
    auto fx = fixtures::stack();
    UmftaResult r = is_umfta(fx.system, {6, 100});
    CHECK(r.verdict == Verdict::Unknown);
    REQUIRE(r.witness);
    CHECK(r.witness->size() == 6);
  }

  SECTION("domino plus an unattachable tile: two terminals") {
    TileSystem sys = fixtures::make_system(
        1, {{"a", "-", "g", "-", "-"}, {"b", "-", "-", "-", "g"}, {"z", "zz", "-", "-", "-"}});
    UmftaResult r = is_umfta(sys, {10, 100});
    CHECK(r.verdict == Verdict::No);
    CHECK(r.detail == "2 terminals");
  }
}

TEST_CASE("closure equals the seeded-growth enumeration at temperature 1") {
  for (const auto& fx :
       {fixtures::domino(), fixtures::path3(), fixtures::square4(), fixtures::star4(),
        fixtures::block2x3(), fixtures::ltromino(), fixtures::tcomb(), fixtures::stack(),
        fixtures::lint_pair_reuse()}) {
    size_t cap = 10;
    ClosureResult closure = enumerate_producibles(fx.system, {cap, 100000});
    std::set<Assembly> expected = seeded_growth_enumeration(fx.system, cap);
    std::set<Assembly> actual(closure.producibles.begin(), closure.producibles.end());
    CHECK(actual == expected);
  }
}

TEST_CASE("closure is confluent under shuffled worklist orders") {
  for (const auto& fx : {fixtures::domino(), fixtures::path3(), fixtures::square4(),
                         fixtures::star4(), fixtures::ltromino(), fixtures::tcomb()}) {
    ClosureResult base = enumerate_producibles(fx.system, {12, 100000});
    for (uint32_t seed = 1; seed <= 20; ++seed) {
      ClosureCaps caps{12, 100000, false, seed};
      ClosureResult shuffled = enumerate_producibles(fx.system, caps);
      REQUIRE(shuffled.producibles == base.producibles);
    }
  }
}

TEST_CASE("seeded and unseeded closures agree on terminals at temperature 1") {
  for (const auto& fx : {fixtures::domino(), fixtures::path3(), fixtures::square4(),
                         fixtures::star4(), fixtures::block2x3(), fixtures::ltromino(),
                         fixtures::tcomb()}) {
    ClosureResult unseeded = enumerate_producibles(fx.system, {12, 100000});
    ClosureCaps caps{12, 100000, true, {}};
    ClosureResult seeded = enumerate_producibles(fx.system, caps);
    REQUIRE(unseeded.terminals.size() == seeded.terminals.size());
    for (size_t i = 0; i < unseeded.terminals.size(); ++i)
      CHECK(unseeded.producibles[unseeded.terminals[i]] ==
            seeded.producibles[seeded.terminals[i]]);
  }
}

TEST_CASE("no terminal is a proper subassembly of any producible") {
  for (const auto& fx : {fixtures::domino(), fixtures::path3(), fixtures::square4(),
                         fixtures::star4(), fixtures::block2x3(), fixtures::ltromino(),
                         fixtures::tcomb()}) {
    ClosureResult closure = enumerate_producibles(fx.system, {12, 100000});
    REQUIRE(closure.saturated);
    for (size_t ti : closure.terminals) {
      const Assembly& t = closure.producibles[ti];
      for (const Assembly& p : closure.producibles) {
        if (p.size() <= t.size()) continue;
        CHECK_FALSE(is_subassembly(t, p));
      }
    }
  }
}

TEST_CASE("is_subassembly basics") {
  auto fx = fixtures::path3();
  Assembly ab = canonicalize(std::vector<Placement>{{{0, 0}, 0}, {{1, 0}, 1}});
  CHECK(is_subassembly(ab, fx.terminal));
  CHECK_FALSE(is_subassembly(fx.terminal, ab));
  Assembly ba = canonicalize(std::vector<Placement>{{{0, 0}, 1}, {{1, 0}, 0}});
  CHECK_FALSE(is_subassembly(ba, fx.terminal));
}
