#pragma once

#include <algorithm>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hyperqsat {

enum class quantifier { forall, exists };

inline quantifier dual(quantifier q) {
  return q == quantifier::forall ? quantifier::exists : quantifier::forall;
}

// One block of the quantifier prefix: a quantifier applied to a vector of
// trace variables, e.g. "forall p0 p1."
struct quant_group {
  quantifier quant;
  std::vector<std::string> vars;
};

enum class ltl_op {
  tt,
  ff,
  atom,  // ap observed on a trace variable
  not_,
  and_,
  or_,
  implies,
  iff,
  next,
  eventually,
  always,
  until,
  weak_until,
  release,
};

struct ltl_node;
using ltl = std::shared_ptr<const ltl_node>;

struct ltl_node {
  ltl_op op;
  std::string ap;    // atom only
  std::string tvar;  // atom only
  ltl lhs;           // unary/binary
  ltl rhs;           // binary only
};

namespace mk {

inline ltl tt() {
  static const ltl n = std::make_shared<ltl_node>(ltl_node{ltl_op::tt, {}, {}, nullptr, nullptr});
  return n;
}

inline ltl ff() {
  static const ltl n = std::make_shared<ltl_node>(ltl_node{ltl_op::ff, {}, {}, nullptr, nullptr});
  return n;
}

inline ltl atom(std::string ap, std::string tvar) {
  return std::make_shared<ltl_node>(
      ltl_node{ltl_op::atom, std::move(ap), std::move(tvar), nullptr, nullptr});
}

inline ltl unary(ltl_op op, ltl sub) {
  return std::make_shared<ltl_node>(ltl_node{op, {}, {}, std::move(sub), nullptr});
}

inline ltl binary(ltl_op op, ltl l, ltl r) {
  return std::make_shared<ltl_node>(ltl_node{op, {}, {}, std::move(l), std::move(r)});
}

inline ltl not_(ltl s) { return unary(ltl_op::not_, std::move(s)); }
inline ltl and_(ltl l, ltl r) { return binary(ltl_op::and_, std::move(l), std::move(r)); }
inline ltl or_(ltl l, ltl r) { return binary(ltl_op::or_, std::move(l), std::move(r)); }
inline ltl implies(ltl l, ltl r) { return binary(ltl_op::implies, std::move(l), std::move(r)); }
inline ltl iff(ltl l, ltl r) { return binary(ltl_op::iff, std::move(l), std::move(r)); }
inline ltl next(ltl s) { return unary(ltl_op::next, std::move(s)); }
inline ltl eventually(ltl s) { return unary(ltl_op::eventually, std::move(s)); }
inline ltl always(ltl s) { return unary(ltl_op::always, std::move(s)); }
inline ltl until(ltl l, ltl r) { return binary(ltl_op::until, std::move(l), std::move(r)); }
inline ltl weak_until(ltl l, ltl r) { return binary(ltl_op::weak_until, std::move(l), std::move(r)); }
inline ltl release(ltl l, ltl r) { return binary(ltl_op::release, std::move(l), std::move(r)); }

}  // namespace mk

inline bool is_unary(ltl_op op) {
  return op == ltl_op::not_ || op == ltl_op::next || op == ltl_op::eventually ||
         op == ltl_op::always;
}

inline bool is_binary(ltl_op op) {
  switch (op) {
    case ltl_op::and_:
    case ltl_op::or_:
    case ltl_op::implies:
    case ltl_op::iff:
    case ltl_op::until:
    case ltl_op::weak_until:
    case ltl_op::release:
      return true;
    default:
      return false;
  }
}

inline bool equal(const ltl& a, const ltl& b) {
  if (a == b) return true;
  if (!a || !b || a->op != b->op) return false;
  switch (a->op) {
    case ltl_op::tt:
    case ltl_op::ff:
      return true;
    case ltl_op::atom:
      return a->ap == b->ap && a->tvar == b->tvar;
    default:
      if (is_unary(a->op)) return equal(a->lhs, b->lhs);
      return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
  }
}

// A closed prenex HyperLTL formula: non-empty quantifier prefix over
// pairwise-distinct trace variables plus a quantifier-free body whose atoms
// only reference declared variables.
struct formula {
  std::vector<quant_group> prefix;
  ltl body;
};

inline bool equal(const formula& a, const formula& b) {
  if (a.prefix.size() != b.prefix.size()) return false;
  for (size_t i = 0; i < a.prefix.size(); ++i) {
    if (a.prefix[i].quant != b.prefix[i].quant || a.prefix[i].vars != b.prefix[i].vars)
      return false;
  }
  return equal(a.body, b.body);
}

template <typename F>
void for_each_atom(const ltl& n, F&& fn) {
  if (!n) return;
  if (n->op == ltl_op::atom) {
    fn(*n);
    return;
  }
  for_each_atom(n->lhs, fn);
  for_each_atom(n->rhs, fn);
}

// Atomic propositions used by the body, sorted.
inline std::vector<std::string> collect_aps(const formula& f) {
  std::set<std::string> s;
  for_each_atom(f.body, [&](const ltl_node& a) { s.insert(a.ap); });
  return {s.begin(), s.end()};
}

inline std::vector<std::string> prefix_vars(const formula& f) {
  std::vector<std::string> out;
  for (const auto& g : f.prefix)
    for (const auto& v : g.vars) out.push_back(v);
  return out;
}

// Enforces the formula invariants; throws std::invalid_argument on violation.
inline void validate(const formula& f) {
  if (f.prefix.empty()) throw std::invalid_argument("formula has an empty quantifier prefix");
  std::set<std::string> seen;
  for (const auto& g : f.prefix) {
    if (g.vars.empty()) throw std::invalid_argument("quantifier group without variables");
    for (const auto& v : g.vars) {
      if (!seen.insert(v).second)
        throw std::invalid_argument("duplicate trace variable '" + v + "'");
    }
  }
  if (!f.body) throw std::invalid_argument("formula has no body");
  for_each_atom(f.body, [&](const ltl_node& a) {
    if (!seen.count(a.tvar))
      throw std::invalid_argument("unbound trace variable '" + a.tvar + "'");
  });
}

inline size_t node_count(const ltl& n) {
  if (!n) return 0;
  return 1 + node_count(n->lhs) + node_count(n->rhs);
}

}  // namespace hyperqsat
