#pragma once

#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hyperqsat/formula.hpp"

namespace hyperqsat {

// Parsed QDIMACS file: quantifier lines in order, clauses as signed ids.
// Used by the bundled solver binary and by round-trip tests.
struct qdimacs_file {
  int nvars = 0;
  std::vector<std::pair<quantifier, std::vector<int>>> blocks;
  std::vector<std::vector<int>> clauses;
};

inline qdimacs_file parse_qdimacs(std::istream& in) {
  qdimacs_file out;
  int nclauses = -1;
  bool header_seen = false;
  std::string tok;
  auto fail = [](const std::string& msg) -> void {
    throw std::runtime_error("qdimacs: " + msg);
  };
  std::vector<int> clause;
  while (in >> tok) {
    if (tok == "c") {
      std::string rest;
      std::getline(in, rest);
      continue;
    }
    if (tok == "p") {
      std::string kind;
      if (!(in >> kind >> out.nvars >> nclauses) || kind != "cnf") fail("bad header");
      if (out.nvars < 0 || nclauses < 0) fail("bad header counts");
      header_seen = true;
      continue;
    }
    if (tok == "e" || tok == "a") {
      if (!header_seen) fail("quantifier line before header");
      if (!clause.empty()) fail("quantifier line inside clause");
      if (!out.clauses.empty()) fail("quantifier line after clauses");
      std::vector<int> vars;
      int v;
      while (in >> v && v != 0) {
        if (v < 0 || v > out.nvars) fail("quantified variable out of range");
        vars.push_back(v);
      }
      if (v != 0) fail("unterminated quantifier line");
      out.blocks.push_back({tok == "e" ? quantifier::exists : quantifier::forall,
                            std::move(vars)});
      continue;
    }
    int lit;
    try {
      size_t pos = 0;
      lit = std::stoi(tok, &pos);
      if (pos != tok.size()) fail("bad token '" + tok + "'");
    } catch (const std::logic_error&) {
      fail("bad token '" + tok + "'");
      return out;  // unreachable
    }
    if (!header_seen) fail("literal before header");
    if (lit == 0) {
      out.clauses.push_back(std::move(clause));
      clause.clear();
    } else {
      if (lit > out.nvars || -lit > out.nvars) fail("literal out of range");
      clause.push_back(lit);
    }
  }
  if (!clause.empty()) fail("unterminated clause");
  if (nclauses >= 0 && static_cast<int>(out.clauses.size()) != nclauses)
    fail("clause count mismatch");
  return out;
}

inline qdimacs_file parse_qdimacs(const std::string& text) {
  std::istringstream in(text);
  return parse_qdimacs(in);
}

}  // namespace hyperqsat
