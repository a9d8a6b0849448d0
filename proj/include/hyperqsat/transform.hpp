#pragma once

#include <set>
#include <string>
#include <unordered_map>

#include "hyperqsat/formula.hpp"

namespace hyperqsat {

namespace detail {

// Negation normal form with an explicit polarity. Implies/Iff/F/G/W are
// eliminated (F a == true U a, G a == false R a, a W b == b R (a | b)) and
// negations pushed to the atoms via the U/R and X duals.
inline ltl nnf_rec(const ltl& n, bool neg) {
  switch (n->op) {
    case ltl_op::tt: return neg ? mk::ff() : mk::tt();
    case ltl_op::ff: return neg ? mk::tt() : mk::ff();
    case ltl_op::atom: return neg ? mk::not_(n) : n;
    case ltl_op::not_: return nnf_rec(n->lhs, !neg);
    case ltl_op::and_:
      return neg ? mk::or_(nnf_rec(n->lhs, true), nnf_rec(n->rhs, true))
                 : mk::and_(nnf_rec(n->lhs, false), nnf_rec(n->rhs, false));
    case ltl_op::or_:
      return neg ? mk::and_(nnf_rec(n->lhs, true), nnf_rec(n->rhs, true))
                 : mk::or_(nnf_rec(n->lhs, false), nnf_rec(n->rhs, false));
    case ltl_op::implies:
      return neg ? mk::and_(nnf_rec(n->lhs, false), nnf_rec(n->rhs, true))
                 : mk::or_(nnf_rec(n->lhs, true), nnf_rec(n->rhs, false));
    case ltl_op::iff:
      // (a & b) | (~a & ~b); negated: (a & ~b) | (~a & b)
      return mk::or_(mk::and_(nnf_rec(n->lhs, false), nnf_rec(n->rhs, neg)),
                     mk::and_(nnf_rec(n->lhs, true), nnf_rec(n->rhs, !neg)));
    case ltl_op::next: return mk::next(nnf_rec(n->lhs, neg));
    case ltl_op::eventually:
      return neg ? mk::release(mk::ff(), nnf_rec(n->lhs, true))
                 : mk::until(mk::tt(), nnf_rec(n->lhs, false));
    case ltl_op::always:
      return neg ? mk::until(mk::tt(), nnf_rec(n->lhs, true))
                 : mk::release(mk::ff(), nnf_rec(n->lhs, false));
    case ltl_op::until:
      return neg ? mk::release(nnf_rec(n->lhs, true), nnf_rec(n->rhs, true))
                 : mk::until(nnf_rec(n->lhs, false), nnf_rec(n->rhs, false));
    case ltl_op::release:
      return neg ? mk::until(nnf_rec(n->lhs, true), nnf_rec(n->rhs, true))
                 : mk::release(nnf_rec(n->lhs, false), nnf_rec(n->rhs, false));
    case ltl_op::weak_until:
      // a W b == b R (a | b)
      return neg ? mk::until(nnf_rec(n->rhs, true),
                             mk::and_(nnf_rec(n->lhs, true), nnf_rec(n->rhs, true)))
                 : mk::release(nnf_rec(n->rhs, false),
                               mk::or_(nnf_rec(n->lhs, false), nnf_rec(n->rhs, false)));
  }
  throw std::logic_error("unreachable");
}

}  // namespace detail

inline ltl nnf(const ltl& body) { return detail::nnf_rec(body, false); }

// NNF bodies contain negation only directly on atoms and no derived
// operators.
inline bool is_nnf(const ltl& n) {
  switch (n->op) {
    case ltl_op::tt:
    case ltl_op::ff:
    case ltl_op::atom:
      return true;
    case ltl_op::not_:
      return n->lhs->op == ltl_op::atom;
    case ltl_op::and_:
    case ltl_op::or_:
    case ltl_op::until:
    case ltl_op::release:
      return is_nnf(n->lhs) && is_nnf(n->rhs);
    case ltl_op::next:
      return is_nnf(n->lhs);
    default:
      return false;
  }
}

// Negation of a prenex formula: flip every quantifier, negate the body.
inline formula negate(const formula& f) {
  formula out;
  for (const auto& g : f.prefix) out.prefix.push_back({dual(g.quant), g.vars});
  out.body = mk::not_(f.body);
  return out;
}

namespace detail {

inline ltl rename_atoms(const ltl& n, const std::unordered_map<std::string, std::string>& map) {
  if (!n) return n;
  if (n->op == ltl_op::atom) {
    auto it = map.find(n->tvar);
    return it == map.end() ? n : mk::atom(n->ap, it->second);
  }
  if (n->op == ltl_op::tt || n->op == ltl_op::ff) return n;
  if (is_unary(n->op)) return mk::unary(n->op, rename_atoms(n->lhs, map));
  return mk::binary(n->op, rename_atoms(n->lhs, map), rename_atoms(n->rhs, map));
}

}  // namespace detail

// Prenex conjunction: g's trace variables are renamed apart from f's (by
// numeric suffix), g's prefix is appended after f's, bodies are conjoined.
inline formula conjoin(const formula& f, const formula& g) {
  std::set<std::string> taken;
  for (const auto& v : prefix_vars(f)) taken.insert(v);

  std::unordered_map<std::string, std::string> ren;
  formula out;
  out.prefix = f.prefix;
  for (const auto& grp : g.prefix) {
    quant_group ng{grp.quant, {}};
    for (const auto& v : grp.vars) {
      std::string fresh = v;
      for (int i = 2; taken.count(fresh); ++i) fresh = v + std::to_string(i);
      taken.insert(fresh);
      if (fresh != v) ren[v] = fresh;
      ng.vars.push_back(fresh);
    }
    out.prefix.push_back(std::move(ng));
  }
  out.body = mk::and_(f.body, detail::rename_atoms(g.body, ren));
  return out;
}

}  // namespace hyperqsat
