#pragma once

#include <sstream>

#include "tilesep/rational.hpp"
#include "tilesep/sim.hpp"
#include "tilesep/transform.hpp"

// Independent verification of pipeline outputs: separability factor, shape,
// tile-count bound, temperature, and UMFTA status, all from a fresh closure.
namespace tilesep {

enum class FactorKind { Undefined, Finite, Infinite };

struct Factor {
  FactorKind kind = FactorKind::Undefined;
  Rational value;

  std::string str() const {
    switch (kind) {
      case FactorKind::Undefined: return "undefined";
      case FactorKind::Infinite: return "inf";
      case FactorKind::Finite: return value.str();
    }
    return "?";
  }
};

// Min terminal size over max non-terminal producible size. Undefined for
// unsaturated closures; infinite when every producible is terminal.
inline Factor separability_factor(const ClosureResult& closure) {
  if (!closure.saturated) return {FactorKind::Undefined, {}};
  int64_t min_terminal = INT64_MAX, max_other = 0;
  std::set<size_t> terminal_set(closure.terminals.begin(), closure.terminals.end());
  for (size_t i = 0; i < closure.producibles.size(); ++i) {
    int64_t sz = int64_t(closure.producibles[i].size());
    if (terminal_set.count(i))
      min_terminal = std::min(min_terminal, sz);
    else
      max_other = std::max(max_other, sz);
  }
  if (min_terminal == INT64_MAX) return {FactorKind::Undefined, {}};
  if (max_other == 0) return {FactorKind::Infinite, {}};
  return {FactorKind::Finite, Rational(min_terminal, max_other)};
}

enum class ReportStatus { Pass, Fail, Unknown };

struct VerificationReport {
  Verdict umfta_verdict = Verdict::Unknown;
  size_t terminal_size = 0;
  size_t max_nonterminal_size = 0;
  Factor factor;
  bool shape_ok = false;
  bool tile_bound_ok = false;
  bool temperature_ok = false;
  bool mismatch_free_ok = false;
  bool saturated = false;
  long long imbalance = 0;
  ReportStatus status = ReportStatus::Unknown;

  std::string str() const {
    auto flag = [this](bool b) { return saturated ? (b ? "ok" : "FAIL") : "unknown"; };
    std::ostringstream out;
    out << "umfta: " << verdict_name(umfta_verdict) << "\n";
    out << "terminal_size: " << terminal_size << "\n";
    out << "max_nonterminal_size: " << max_nonterminal_size << "\n";
    out << "factor: " << factor.str() << "\n";
    out << "shape: " << flag(shape_ok) << "\n";
    out << "tile_bound: " << flag(tile_bound_ok) << "\n";
    out << "temperature: " << flag(temperature_ok) << "\n";
    out << "mismatch_free: " << flag(mismatch_free_ok) << "\n";
    out << "saturated: " << (saturated ? "yes" : "no") << "\n";
    out << "imbalance: " << imbalance << "\n";
    out << "result: "
        << (status == ReportStatus::Pass ? "PASS"
                                         : status == ReportStatus::Fail ? "FAIL" : "UNKNOWN")
        << "\n";
    return out.str();
  }
};

// Runs fresh closures over both systems and fills every report field.
// PASS requires: factor >= 2, scale-2 shape match, |S'| <= 8|S|, tau' = 2,
// mismatch-free unique terminal, and full saturation.
inline VerificationReport verify_pipeline(const TileSystem& original, const TileSystem& compiled,
                                          long long imbalance, const ClosureCaps& caps = {}) {
  VerificationReport rep;
  rep.imbalance = imbalance;

  UmftaResult orig = is_umfta(original, caps);
  UmftaResult comp = is_umfta(compiled, caps);
  rep.umfta_verdict = comp.verdict;
  rep.saturated = comp.closure.saturated && orig.closure.saturated;

  rep.temperature_ok = compiled.temperature == 2;
  rep.tile_bound_ok = compiled.size() <= 8 * original.size();

  if (comp.verdict == Verdict::Yes) {
    const Assembly& terminal = *comp.witness;
    rep.terminal_size = terminal.size();
    rep.mismatch_free_ok = is_mismatch_free(terminal, compiled);
    for (size_t i = 0; i < comp.closure.producibles.size(); ++i)
      if (!comp.closure.is_terminal(i))
        rep.max_nonterminal_size =
            std::max(rep.max_nonterminal_size, comp.closure.producibles[i].size());
    rep.factor = separability_factor(comp.closure);
    if (orig.verdict == Verdict::Yes)
      rep.shape_ok = scale_shape(shape_of(*orig.witness), 2) == shape_of(terminal);
  }

  if (!rep.saturated) {
    rep.status = ReportStatus::Unknown;
  } else {
    bool factor_ok = rep.factor.kind == FactorKind::Infinite ||
                     (rep.factor.kind == FactorKind::Finite && rep.factor.value >= Rational(2));
    bool pass = factor_ok && rep.shape_ok && rep.tile_bound_ok && rep.temperature_ok &&
                rep.mismatch_free_ok && rep.umfta_verdict == Verdict::Yes;
    rep.status = pass ? ReportStatus::Pass : ReportStatus::Fail;
  }
  return rep;
}

// Destructive cross-check: removing one designated cut glue must leave the
// two halves as the only terminals.
inline size_t terminals_after_cut_glue_removal(const TileSystem& compiled,
                                               const std::string& cut_glue,
                                               const ClosureCaps& caps = {}) {
  TileSystem sys = compiled;
  auto id = sys.find_glue(cut_glue);
  if (!id) fail(Errc::BadSystem, "unknown cut glue: " + cut_glue);
  for (Tile& t : sys.tiles())
    for (Side s : kSides)
      if (t.glue[s] == *id) t.glue[s] = kNullGlue;
  ClosureResult closure = enumerate_producibles(sys, caps);
  return closure.terminals.size();
}

}  // namespace tilesep
