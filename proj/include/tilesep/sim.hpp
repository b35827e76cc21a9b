#pragma once

#include <atomic>
#include <cstdlib>
#include <deque>
#include <optional>
#include <random>
#include <thread>

#include "tilesep/core.hpp"

// Brute-force 2HAM producibility closure and terminal detection. This module
// is the oracle every transform is checked against, so it stays simple and
// deterministic: the final producible set is independent of worklist order
// and of the worker count.
namespace tilesep {

struct ClosureCaps {
  size_t max_size = 64;        // largest assembly admitted to the set
  size_t max_count = 100000;   // largest number of distinct producibles
  bool seeded = false;         // one operand of every combination is a single tile
  std::optional<uint32_t> shuffle_seed;  // randomize worklist order (tests)
};

struct CapHits {
  long long size_rejects = 0;
  bool count_cap = false;
};

struct ClosureResult {
  std::vector<Assembly> producibles;  // canonical order: by size, then cells
  std::vector<size_t> terminals;      // indices into producibles
  bool saturated = false;
  CapHits cap_hits;

  bool is_terminal(size_t i) const {
    return std::find(terminals.begin(), terminals.end(), i) != terminals.end();
  }
};

namespace detail {

// Exposed glue-sides of an assembly: non-null glue on a side facing an empty
// cell. Attachments must form at least one bond, so candidate translations
// come from aligning an exposed (g, s) of A with an exposed (g, s^-1) of B.
struct ExposedSite {
  Cell cell;
  Side side;
  int glue;
};

inline std::vector<ExposedSite> exposed_sites(const Assembly& a, const TileSystem& sys) {
  std::vector<ExposedSite> out;
  for (const Placement& p : a.cells()) {
    const Tile& t = sys.tile(p.tile);
    for (Side s : kSides) {
      int g = t.glue[s];
      if (g != kNullGlue && !a.occupied(step(p.cell, s))) out.push_back({p.cell, s, g});
    }
  }
  return out;
}

struct OffsetHash {
  size_t operator()(const std::pair<int, int>& o) const {
    return std::hash<int64_t>()((int64_t(o.first) << 32) ^ uint32_t(o.second));
  }
};

}  // namespace detail

struct Attachment {
  std::pair<int, int> offset;  // translation applied to B
  Assembly combined;           // canonical union
};

// All translations of B producing a valid combination with A: disjoint
// domains, connected union, seam bond strength >= tau. Mismatched seam
// adjacencies are permitted by the model; they contribute no strength.
namespace detail {

inline std::vector<std::pair<int, int>> candidate_offsets(const Assembly& a, const Assembly& b,
                                                          const TileSystem& sys) {
  auto ea = exposed_sites(a, sys);
  auto eb = exposed_sites(b, sys);
  std::unordered_set<std::pair<int, int>, OffsetHash> set;
  for (const auto& sa : ea)
    for (const auto& sb : eb) {
      if (sa.glue != sb.glue || sb.side != opposite(sa.side)) continue;
      Cell target = step(sa.cell, sa.side);  // where sb.cell must land
      set.insert({target.x - sb.cell.x, target.y - sb.cell.y});
    }
  return {set.begin(), set.end()};
}

// Disjointness plus seam strength for placing B at the given offset.
inline bool offset_valid(const Assembly& a, const Assembly& b, const TileSystem& sys,
                         std::pair<int, int> off) {
  int64_t seam = 0;
  for (const Placement& pb : b.cells()) {
    Cell c{pb.cell.x + off.first, pb.cell.y + off.second};
    if (a.occupied(c)) return false;
    const Tile& tb = sys.tile(pb.tile);
    for (Side s : kSides) {
      auto ta = a.tile_at(step(c, s));
      if (!ta) continue;
      int g = tb.glue[s];
      if (g != kNullGlue && g == sys.tile(*ta).glue[opposite(s)]) seam += sys.strength(g);
    }
  }
  return seam >= sys.temperature;
}

}  // namespace detail

inline std::vector<Attachment> attachment_offsets(const Assembly& a, const Assembly& b,
                                                  const TileSystem& sys) {
  std::vector<Attachment> out;
  for (const auto& off : detail::candidate_offsets(a, b, sys)) {
    if (!detail::offset_valid(a, b, sys, off)) continue;
    std::vector<Placement> cells = a.cells();
    for (const Placement& pb : b.cells())
      cells.push_back({{pb.cell.x + off.first, pb.cell.y + off.second}, pb.tile});
    out.push_back({off, canonicalize(cells)});
  }
  std::sort(out.begin(), out.end(), [](const Attachment& x, const Attachment& y) {
    if (x.offset.second != y.offset.second) return x.offset.second < y.offset.second;
    return x.offset.first < y.offset.first;
  });
  return out;
}

inline bool can_attach(const Assembly& a, const Assembly& b, const TileSystem& sys) {
  for (const auto& off : detail::candidate_offsets(a, b, sys))
    if (detail::offset_valid(a, b, sys, off)) return true;
  return false;
}

namespace detail {

inline int worker_count() {
  if (const char* env = std::getenv("TILESEP_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

}  // namespace detail

// Fixed-point closure from all single tiles. Assemblies above max_size are
// rejected (counted in cap_hits); exceeding max_count aborts the closure.
// saturated is true only when neither cap interfered.
inline ClosureResult enumerate_producibles(const TileSystem& sys, const ClosureCaps& caps = {}) {
  sys.validate();
  ClosureResult res;
  std::unordered_set<Assembly, AssemblyHash> seen;
  std::vector<Assembly> discovered;
  std::deque<size_t> pending;

  auto admit = [&](const Assembly& a) {
    if (a.size() > caps.max_size) {
      ++res.cap_hits.size_rejects;
      return;
    }
    if (seen.count(a)) return;
    if (discovered.size() >= caps.max_count) {
      res.cap_hits.count_cap = true;
      return;
    }
    seen.insert(a);
    discovered.push_back(a);
    pending.push_back(discovered.size() - 1);
  };

  for (size_t i = 0; i < sys.size(); ++i)
    admit(canonicalize(std::vector<Placement>{{{0, 0}, int(i)}}));

  std::mt19937 rng(caps.shuffle_seed.value_or(0));
  const int workers = detail::worker_count();

  while (!pending.empty() && !res.cap_hits.count_cap) {
    if (caps.shuffle_seed) {
      std::shuffle(pending.begin(), pending.end(), rng);
    }
    size_t cur = pending.front();
    pending.pop_front();

    // Pair `cur` against every assembly discovered so far (including itself).
    // In seeded mode one operand must be a single tile.
    size_t partners = discovered.size();
    auto eligible = [&](size_t j) {
      return !caps.seeded || discovered[cur].size() == 1 || discovered[j].size() == 1;
    };

    if (workers <= 1 || partners < 16) {
      for (size_t j = 0; j < partners && !res.cap_hits.count_cap; ++j) {
        if (!eligible(j)) continue;
        for (const Attachment& at : attachment_offsets(discovered[cur], discovered[j], sys))
          admit(at.combined);
      }
    } else {
      // Wave-parallel evaluation with a deterministic sequential merge.
      std::vector<std::vector<Assembly>> results(partners);
      std::atomic<size_t> next{0};
      auto run = [&]() {
        for (size_t j = next.fetch_add(1); j < partners; j = next.fetch_add(1)) {
          if (!eligible(j)) continue;
          for (const Attachment& at : attachment_offsets(discovered[cur], discovered[j], sys))
            results[j].push_back(at.combined);
        }
      };
      std::vector<std::thread> pool;
      for (int w = 0; w < workers; ++w) pool.emplace_back(run);
      for (auto& th : pool) th.join();
      for (size_t j = 0; j < partners; ++j)
        for (const Assembly& a : results[j]) admit(a);
    }
  }

  res.saturated = !res.cap_hits.count_cap && res.cap_hits.size_rejects == 0;
  res.producibles = std::move(discovered);
  std::sort(res.producibles.begin(), res.producibles.end());

  // Terminal iff the assembly combines with no producible, including a
  // translate of itself.
  for (size_t i = 0; i < res.producibles.size(); ++i) {
    bool terminal = true;
    for (size_t j = 0; j < res.producibles.size() && terminal; ++j)
      if (can_attach(res.producibles[i], res.producibles[j], sys)) terminal = false;
    if (terminal) res.terminals.push_back(i);
  }
  return res;
}

// ---------------------------------------------------------------------------
// UMFTA verdict

enum class Verdict { Yes, No, Unknown };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Unknown: return "unknown";
  }
  return "?";
}

struct UmftaResult {
  Verdict verdict = Verdict::Unknown;
  std::optional<Assembly> witness;
  std::string detail;
  ClosureResult closure;
};

// yes: closure saturated, exactly one terminal, no mismatched producible.
// unknown: a cap was hit (witness = largest producible).
// no: >= 2 terminals or a mismatched producible (witness included).
inline UmftaResult is_umfta(const TileSystem& sys, const ClosureCaps& caps = {}) {
  UmftaResult r;
  r.closure = enumerate_producibles(sys, caps);
  const auto& prods = r.closure.producibles;
  if (!r.closure.saturated) {
    r.verdict = Verdict::Unknown;
    if (!prods.empty()) r.witness = prods.back();
    r.detail = r.closure.cap_hits.count_cap ? "count cap" : "size cap";
    return r;
  }
  for (const Assembly& a : prods) {
    if (!is_mismatch_free(a, sys)) {
      r.verdict = Verdict::No;
      r.witness = a;
      r.detail = "mismatched producible";
      return r;
    }
  }
  if (r.closure.terminals.size() == 1) {
    r.verdict = Verdict::Yes;
    r.witness = prods[r.closure.terminals[0]];
    r.detail = "unique mismatch-free terminal";
  } else if (r.closure.terminals.size() > 1) {
    r.verdict = Verdict::No;
    r.witness = prods[r.closure.terminals[1]];
    r.detail = std::to_string(r.closure.terminals.size()) + " terminals";
  } else {
    r.verdict = Verdict::No;
    r.detail = "no terminal under saturation";
  }
  return r;
}

// True iff sub appears as a sub-map of super at some translation.
inline bool is_subassembly(const Assembly& sub, const Assembly& super) {
  if (sub.size() > super.size()) return false;
  for (const Placement& anchor : super.cells()) {
    int dx = anchor.cell.x - sub.cells()[0].cell.x;
    int dy = anchor.cell.y - sub.cells()[0].cell.y;
    bool ok = true;
    for (const Placement& p : sub.cells()) {
      auto t = super.tile_at({p.cell.x + dx, p.cell.y + dy});
      if (!t || *t != p.tile) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace tilesep
