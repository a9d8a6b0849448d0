#pragma once

#include <sstream>
#include <string>

#include "hyperqsat/formula.hpp"

namespace hyperqsat {

namespace detail {

inline int precedence(ltl_op op) {
  switch (op) {
    case ltl_op::iff: return 1;
    case ltl_op::implies: return 2;
    case ltl_op::or_: return 3;
    case ltl_op::and_: return 4;
    case ltl_op::until:
    case ltl_op::weak_until:
    case ltl_op::release: return 5;
    case ltl_op::not_:
    case ltl_op::next:
    case ltl_op::eventually:
    case ltl_op::always: return 6;
    default: return 7;  // atoms and constants
  }
}

// Emits n with parentheses only where the grammar requires them. min_level
// is the loosest precedence the surrounding context accepts.
inline void print_ltl(std::ostringstream& os, const ltl& n, int min_level) {
  int lv = precedence(n->op);
  bool paren = lv < min_level;
  if (paren) os << '(';
  switch (n->op) {
    case ltl_op::tt: os << "true"; break;
    case ltl_op::ff: os << "false"; break;
    case ltl_op::atom: os << n->ap << '_' << n->tvar; break;
    case ltl_op::not_:
      os << '~';
      print_ltl(os, n->lhs, 6);
      break;
    case ltl_op::next:
    case ltl_op::eventually:
    case ltl_op::always:
      os << (n->op == ltl_op::next ? 'X' : n->op == ltl_op::eventually ? 'F' : 'G') << ' ';
      print_ltl(os, n->lhs, 6);
      break;
    case ltl_op::until:
    case ltl_op::weak_until:
    case ltl_op::release:
      // right-associative: a bare binary on the left would re-parse wrong
      print_ltl(os, n->lhs, 6);
      os << (n->op == ltl_op::until ? " U " : n->op == ltl_op::weak_until ? " W " : " R ");
      print_ltl(os, n->rhs, 5);
      break;
    case ltl_op::and_:
      print_ltl(os, n->lhs, 4);
      os << " & ";
      print_ltl(os, n->rhs, 5);
      break;
    case ltl_op::or_:
      print_ltl(os, n->lhs, 3);
      os << " | ";
      print_ltl(os, n->rhs, 4);
      break;
    case ltl_op::implies:
      print_ltl(os, n->lhs, 3);
      os << " -> ";
      print_ltl(os, n->rhs, 2);
      break;
    case ltl_op::iff:
      print_ltl(os, n->lhs, 1);
      os << " <-> ";
      print_ltl(os, n->rhs, 2);
      break;
  }
  if (paren) os << ')';
}

}  // namespace detail

inline std::string print(const ltl& body) {
  std::ostringstream os;
  detail::print_ltl(os, body, 0);
  return os.str();
}

// Round-trip printer: parse(print(f)) is structurally equal to f.
inline std::string print(const formula& f) {
  std::ostringstream os;
  for (const auto& g : f.prefix) {
    os << (g.quant == quantifier::forall ? "forall" : "exists");
    for (const auto& v : g.vars) os << ' ' << v;
    os << ". ";
  }
  os << print(f.body);
  return os.str();
}

}  // namespace hyperqsat
