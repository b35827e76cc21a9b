#pragma once

#include <cctype>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tilesep/core.hpp"

// Line-oriented text formats for tile systems (.tds) and assemblies (.asm).
namespace tilesep {

struct ParseError : Error {
  ParseError(int line, const std::string& what)
      : Error(Errc::ParseError, "line " + std::to_string(line) + ": " + what), line(line) {}
  int line;
};

namespace detail {

inline std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) {
    if (tok[0] == '#') break;
    out.push_back(tok);
  }
  return out;
}

inline bool parse_int(const std::string& s, long long& out) {
  try {
    size_t pos = 0;
    out = std::stoll(s, &pos);
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

}  // namespace detail

struct SystemParseResult {
  TileSystem system;
  std::vector<std::string> warnings;
};

// SystemFile format:
//   temperature <n>
//   glue <id> <strength>
//   tile <name> N=<glue> E=<glue> S=<glue> W=<glue>
// "-" is the null glue; "#" starts a comment. Glues referenced by tiles but
// never declared default to strength 1 (with a warning).
inline SystemParseResult parse_system(std::istream& in) {
  SystemParseResult res;
  TileSystem& sys = res.system;
  std::set<std::string> declared;
  std::string line;
  int lineno = 0;
  bool have_temp = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto tok = detail::tokenize(line);
    if (tok.empty()) continue;
    if (tok[0] == "temperature") {
      long long t;
      if (tok.size() != 2 || !detail::parse_int(tok[1], t) || t < 1)
        throw ParseError(lineno, "expected: temperature <positive integer>");
      sys.temperature = int(t);
      have_temp = true;
    } else if (tok[0] == "glue") {
      long long s;
      if (tok.size() != 3 || !detail::parse_int(tok[2], s) || s < 0)
        throw ParseError(lineno, "expected: glue <id> <strength>");
      if (tok[1] == "-") {
        if (s != 0) throw ParseError(lineno, "the null glue has strength 0");
        continue;
      }
      if (s < 1) throw ParseError(lineno, "non-null glue strength must be >= 1");
      int id = sys.intern_glue(tok[1], int(s));
      sys.set_strength(id, int(s));
      declared.insert(tok[1]);
    } else if (tok[0] == "tile") {
      if (tok.size() != 6) throw ParseError(lineno, "expected: tile <name> N=.. E=.. S=.. W=..");
      Tile t;
      t.name = tok[1];
      for (int i = 0; i < 4; ++i) {
        const std::string& field = tok[2 + i];
        if (field.size() < 3 || field[1] != '=')
          throw ParseError(lineno, "bad glue field: " + field);
        Side side;
        switch (field[0]) {
          case 'N': side = N; break;
          case 'E': side = E; break;
          case 'S': side = S; break;
          case 'W': side = W; break;
          default: throw ParseError(lineno, "bad side in field: " + field);
        }
        std::string glue = field.substr(2);
        if (glue == "-") {
          t.glue[side] = kNullGlue;
        } else {
          if (!declared.count(glue) && !sys.find_glue(glue))
            res.warnings.push_back("glue " + glue + " undeclared; defaulting to strength 1");
          t.glue[side] = sys.intern_glue(glue, 1);
        }
      }
      if (sys.find_tile(t.name)) throw ParseError(lineno, "duplicate tile name: " + t.name);
      sys.add_tile(std::move(t));
    } else {
      throw ParseError(lineno, "unknown directive: " + tok[0]);
    }
  }
  if (!have_temp) throw ParseError(lineno, "missing temperature header");
  try {
    sys.validate();
  } catch (const Error& e) {
    throw ParseError(lineno, e.what());
  }
  return res;
}

inline SystemParseResult parse_system(const std::string& text) {
  std::istringstream in(text);
  return parse_system(in);
}

// Serializer: glues sorted by id name, tiles in declaration order.
inline std::string serialize_system(const TileSystem& sys) {
  std::ostringstream out;
  out << "temperature " << sys.temperature << "\n";
  std::set<std::string> used;
  for (const Tile& t : sys.tiles())
    for (Side s : kSides)
      if (t.glue[s] != kNullGlue) used.insert(sys.glue_name(t.glue[s]));
  for (const std::string& g : used) out << "glue " << g << " " << sys.strength(*sys.find_glue(g)) << "\n";
  for (const Tile& t : sys.tiles()) {
    out << "tile " << t.name;
    for (Side s : kSides)
      out << " " << side_name(s) << "=" << sys.glue_name(t.glue[s]);
    out << "\n";
  }
  return out.str();
}

// AssemblyFile format: one "<x> <y> <tilename>" line per cell.
inline Assembly parse_assembly(std::istream& in, const TileSystem& sys) {
  std::map<std::pair<int, int>, int> cells;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto tok = detail::tokenize(line);
    if (tok.empty()) continue;
    long long x, y;
    if (tok.size() != 3 || !detail::parse_int(tok[0], x) || !detail::parse_int(tok[1], y))
      throw ParseError(lineno, "expected: <x> <y> <tilename>");
    auto tile = sys.find_tile(tok[2]);
    if (!tile) throw ParseError(lineno, "unknown tile: " + tok[2]);
    if (!cells.emplace(std::make_pair(int(x), int(y)), *tile).second)
      throw ParseError(lineno, "duplicate cell");
  }
  if (cells.empty()) throw ParseError(lineno, "empty assembly");
  try {
    return canonicalize(cells);
  } catch (const Error& e) {
    throw ParseError(lineno, e.what());
  }
}

inline Assembly parse_assembly(const std::string& text, const TileSystem& sys) {
  std::istringstream in(text);
  return parse_assembly(in, sys);
}

inline std::string serialize_assembly(const Assembly& a, const TileSystem& sys) {
  std::ostringstream out;
  for (const Placement& p : a.cells())
    out << p.cell.x << " " << p.cell.y << " " << sys.tile(p.tile).name << "\n";
  return out.str();
}

}  // namespace tilesep
