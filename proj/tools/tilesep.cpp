// tilesep: compile temperature-1 mismatch-free 2HAM systems with a unique
// terminal assembly into factor-2 size-separable temperature-2 systems, and
// verify the result with a brute-force producibility closure.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "tilesep/analysis.hpp"
#include "tilesep/io.hpp"
#include "tilesep/render.hpp"
#include "tilesep/sim.hpp"
#include "tilesep/transform.hpp"
#include "tilesep/verify.hpp"

namespace {

using namespace tilesep;

constexpr int kExitViolation = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitCountCap = 3;
constexpr int kExitParse = 64;
constexpr int kExitTrivial = 65;

struct CapOptions {
  size_t max_size = 64;
  size_t max_count = 100000;

  ClosureCaps caps(bool seeded = false) const { return {max_size, max_count, seeded, {}}; }
};

void add_cap_options(CLI::App* cmd, CapOptions& caps) {
  cmd->add_option("--max-size", caps.max_size, "largest assembly admitted to the closure")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-count", caps.max_count, "largest number of distinct producibles")
      ->check(CLI::PositiveNumber);
}

SystemParseResult load_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path);
  auto res = parse_system(in);
  for (const std::string& w : res.warnings) std::cerr << "warning: " << w << "\n";
  return res;
}

Assembly load_assembly(const std::string& path, const TileSystem& sys) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path);
  return parse_assembly(in, sys);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::BadSystem, "cannot write " + path);
  out << content;
}

std::string format_edge(const BondEdge& e) {
  std::ostringstream out;
  out << e.cell.x << " " << e.cell.y << " " << (e.vertical ? "V" : "H");
  return out.str();
}

BondEdge parse_edge(const std::string& text) {
  std::istringstream in(text);
  BondEdge e;
  std::string axis;
  in >> e.cell.x >> e.cell.y >> axis;
  e.vertical = axis == "V";
  return e;
}

std::string format_trace(const PipelineTrace& t) {
  std::ostringstream out;
  out << "e_prime: " << format_edge(t.e_prime) << "\n";
  out << "first_endpoint: " << t.first_endpoint.x << " " << t.first_endpoint.y << "\n";
  out << "e: " << format_edge(t.e) << "\n";
  out << "imbalance: " << t.imbalance << "\n";
  out << "path:";
  for (Cell c : t.path) out << " " << c.x << "," << c.y;
  out << "\n";
  out << "cut_glue_eprime: " << t.cut_glue_eprime << "\n";
  out << "cut_glue_e: " << t.cut_glue_e << "\n";
  out << "treeify_breaks:";
  for (const auto& [g, vertical] : t.treeify_breaks) out << " " << g << ":" << (vertical ? "V" : "H");
  out << "\n";
  for (const auto& stage : t.stages)
    out << "stage_" << stage.name << "_tiles: " << stage.system.size() << "\n";
  return out.str();
}

std::map<std::string, std::string> parse_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    auto colon = line.find(": ");
    if (colon == std::string::npos) continue;
    kv[line.substr(0, colon)] = line.substr(colon + 2);
  }
  return kv;
}

int cmd_lint(const std::string& system_path, const std::string& assembly_path,
             const CapOptions& caps) {
  auto sys = load_system(system_path).system;
  UmftaResult u = is_umfta(sys, caps.caps());

  std::optional<Assembly> claimed;
  if (!assembly_path.empty())
    claimed = load_assembly(assembly_path, sys);
  else if (u.witness && u.verdict != Verdict::Unknown)
    claimed = u.witness;

  std::vector<Diagnostic> diags;
  if (claimed) diags = lint_umfta(sys, *claimed);
  for (const auto& d : diags) std::cout << d.str() << "\n";

  switch (u.verdict) {
    case Verdict::Yes: std::cout << "UMFTA: yes\n"; break;
    case Verdict::No: std::cout << "UMFTA: no (" << u.detail << ")\n"; break;
    case Verdict::Unknown: std::cout << "UMFTA: unknown (" << u.detail << ")\n"; break;
  }
  if (!diags.empty() || u.verdict == Verdict::No) return kExitViolation;
  if (u.verdict == Verdict::Unknown) return kExitUnknown;
  return 0;
}

int cmd_simulate(const std::string& system_path, bool seeded, const CapOptions& caps,
                 const std::string& dump_dir, int shuffle_check, uint32_t seed) {
  auto sys = load_system(system_path).system;
  ClosureResult closure = enumerate_producibles(sys, caps.caps(seeded));

  std::cout << "producibles: " << closure.producibles.size() << "\n";
  std::cout << "terminals: " << closure.terminals.size() << "\n";
  std::map<size_t, size_t> histogram;
  for (const Assembly& a : closure.producibles) ++histogram[a.size()];
  for (const auto& [size, count] : histogram)
    std::cout << "size " << size << ": " << count << "\n";
  Factor factor = separability_factor(closure);
  std::cout << "factor: " << factor.str() << "\n";
  if (!closure.saturated)
    std::cout << "saturated: no ("
              << (closure.cap_hits.count_cap ? "count cap" : "size cap") << ")\n";

  if (!dump_dir.empty()) {
    std::filesystem::create_directories(dump_dir);
    for (const Assembly& a : closure.producibles) {
      std::ostringstream name;
      name << std::hex << std::setw(16) << std::setfill('0') << a.hash() << ".asm";
      write_file((std::filesystem::path(dump_dir) / name.str()).string(),
                 serialize_assembly(a, sys));
    }
  }

  if (shuffle_check > 0) {
    for (int k = 0; k < shuffle_check; ++k) {
      ClosureCaps shuffled = caps.caps(seeded);
      shuffled.shuffle_seed = seed + uint32_t(k);
      ClosureResult other = enumerate_producibles(sys, shuffled);
      if (other.producibles != closure.producibles) {
        std::cout << "shuffle-check: FAILED at seed " << (seed + uint32_t(k)) << "\n";
        return kExitViolation;
      }
    }
    std::cout << "shuffle-check: ok (" << shuffle_check << " orders)\n";
  }

  return closure.cap_hits.count_cap ? kExitCountCap : 0;
}

// Shared front half of treeify/compile: closure, UMFTA gate, lint gate.
Assembly gated_terminal(const TileSystem& sys, const CapOptions& caps, int& exit_code) {
  UmftaResult u = is_umfta(sys, caps.caps());
  if (u.verdict == Verdict::Unknown) {
    std::cerr << "UMFTA: unknown (" << u.detail << ")\n";
    exit_code = kExitUnknown;
    return {};
  }
  if (u.verdict == Verdict::No) {
    std::cerr << "UMFTA: no (" << u.detail << ")\n";
    exit_code = kExitViolation;
    return {};
  }
  auto diags = lint_umfta(sys, *u.witness);
  if (!diags.empty()) {
    for (const auto& d : diags) std::cerr << d.str() << "\n";
    exit_code = kExitViolation;
    return {};
  }
  exit_code = 0;
  return *u.witness;
}

int cmd_treeify(const std::string& system_path, const std::string& out_path,
                const CapOptions& caps) {
  auto sys = load_system(system_path).system;
  int exit_code = 0;
  Assembly terminal = gated_terminal(sys, caps, exit_code);
  if (exit_code != 0) return exit_code;
  TreeifyResult res = treeify(sys, terminal);
  write_file(out_path, serialize_system(res.system));
  std::cout << "broken pairs: " << res.broken.size() << "\n";
  std::cout << "tiles: " << res.system.size() << "\n";
  return 0;
}

int cmd_compile(const std::string& system_path, const std::string& out_path,
                const std::string& trace_path, const CapOptions& caps) {
  auto sys = load_system(system_path).system;
  try {
    PipelineResult res = size_separable_compile(sys, caps.caps());
    write_file(out_path, serialize_system(res.system));
    if (!trace_path.empty()) write_file(trace_path, format_trace(res.trace));
    std::cout << "tiles: " << res.system.size() << "\n";
    std::cout << "imbalance: " << res.trace.imbalance << "\n";
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.code() == Errc::TrivialAssembly) return kExitTrivial;
    if (e.code() == Errc::UnknownUnderCaps) return kExitUnknown;
    return kExitViolation;
  }
}

int cmd_verify(const std::string& orig_path, const std::string& compiled_path,
               const std::string& trace_path, const CapOptions& caps) {
  auto orig = load_system(orig_path).system;
  auto compiled = load_system(compiled_path).system;
  long long imbalance = 0;
  if (!trace_path.empty()) {
    auto kv = parse_trace(trace_path);
    if (kv.count("imbalance")) imbalance = std::stoll(kv["imbalance"]);
  }
  VerificationReport rep = verify_pipeline(orig, compiled, imbalance, caps.caps());
  std::cout << rep.str();
  switch (rep.status) {
    case ReportStatus::Pass: return 0;
    case ReportStatus::Fail: return kExitViolation;
    case ReportStatus::Unknown: return kExitUnknown;
  }
  return kExitUnknown;
}

int cmd_render(const std::string& assembly_path, const std::string& system_path,
               const std::string& out_path, bool show_strengths) {
  auto sys = load_system(system_path).system;
  Assembly a = load_assembly(assembly_path, sys);
  write_file(out_path, render_svg(a, sys, show_strengths));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"size-separable tile self-assembly compiler"};
  app.require_subcommand(1);

  // lint
  auto* lint = app.add_subcommand("lint", "check UMFTA necessary conditions");
  std::string lint_system, lint_assembly;
  CapOptions lint_caps;
  lint->add_option("system", lint_system)->required();
  lint->add_option("--assembly", lint_assembly, "claimed terminal assembly");
  add_cap_options(lint, lint_caps);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "run the producibility closure");
  std::string sim_system, sim_dump;
  bool sim_seeded = false;
  int sim_shuffle = 0;
  uint32_t sim_seed = 1;
  CapOptions sim_caps;
  simulate->add_option("system", sim_system)->required();
  simulate->add_flag("--seeded", sim_seeded, "single-tile attachments only");
  simulate->add_option("--dump-producibles", sim_dump, "write each producible to DIR");
  simulate->add_option("--shuffle-check", sim_shuffle, "re-run K shuffled closures");
  simulate->add_option("--seed", sim_seed, "seed for --shuffle-check");
  add_cap_options(simulate, sim_caps);

  // treeify
  auto* tree = app.add_subcommand("treeify", "break bond-graph cycles");
  std::string tree_system, tree_out;
  CapOptions tree_caps;
  tree->add_option("system", tree_system)->required();
  tree->add_option("-o,--output", tree_out)->required();
  add_cap_options(tree, tree_caps);

  // compile
  auto* compile = app.add_subcommand("compile", "full size-separable compilation");
  std::string compile_system, compile_out, compile_trace;
  CapOptions compile_caps;
  compile->add_option("system", compile_system)->required();
  compile->add_option("-o,--output", compile_out)->required();
  compile->add_option("--trace", compile_trace, "write the pipeline trace");
  add_cap_options(compile, compile_caps);

  // verify
  auto* verify = app.add_subcommand("verify", "verify a compiled system");
  std::string verify_orig, verify_compiled, verify_trace;
  CapOptions verify_caps;
  verify->add_option("original", verify_orig)->required();
  verify->add_option("compiled", verify_compiled)->required();
  verify->add_option("--trace", verify_trace, "trace written by compile");
  add_cap_options(verify, verify_caps);

  // render
  auto* render = app.add_subcommand("render", "render an assembly as SVG");
  std::string render_assembly, render_system, render_out;
  bool render_strengths = false;
  render->add_option("assembly", render_assembly)->required();
  render->add_option("--system", render_system)->required();
  render->add_option("-o,--output", render_out)->required();
  render->add_flag("--show-strengths", render_strengths, "double ticks for strength 2");

  CLI11_PARSE(app, argc, argv);

  try {
    if (lint->parsed()) return cmd_lint(lint_system, lint_assembly, lint_caps);
    if (simulate->parsed())
      return cmd_simulate(sim_system, sim_seeded, sim_caps, sim_dump, sim_shuffle, sim_seed);
    if (tree->parsed()) return cmd_treeify(tree_system, tree_out, tree_caps);
    if (compile->parsed())
      return cmd_compile(compile_system, compile_out, compile_trace, compile_caps);
    if (verify->parsed()) return cmd_verify(verify_orig, verify_compiled, verify_trace, verify_caps);
    if (render->parsed())
      return cmd_render(render_assembly, render_system, render_out, render_strengths);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitViolation;
  }
  return 0;
}
