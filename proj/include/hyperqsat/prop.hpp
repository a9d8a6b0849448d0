#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hyperqsat {

// A boolean variable of the encoding. ap_step variables a^step_owner carry
// either a candidate-trace index (owner >= 0) or a trace-variable name;
// loop_sel is the one-hot lasso loop selector; aux are clause-form
// definitional variables.
struct prop_var {
  enum class kind : uint8_t { ap_step, loop_sel, aux };

  kind k = kind::aux;
  int owner = -1;   // ap_step: candidate trace index, or -1 when var-owned
  std::string var;  // ap_step: owning trace variable when owner < 0
  std::string ap;   // ap_step only
  int idx = 0;      // ap_step: step; loop_sel: position; aux: serial

  static prop_var step_of_trace(int trace, std::string ap, int step) {
    return {kind::ap_step, trace, {}, std::move(ap), step};
  }
  static prop_var step_of_var(std::string tvar, std::string ap, int step) {
    return {kind::ap_step, -1, std::move(tvar), std::move(ap), step};
  }
  static prop_var loop(int pos) { return {kind::loop_sel, -1, {}, {}, pos}; }
  static prop_var aux(int serial) { return {kind::aux, -1, {}, {}, serial}; }

  friend bool operator==(const prop_var& a, const prop_var& b) {
    return a.k == b.k && a.owner == b.owner && a.idx == b.idx && a.var == b.var && a.ap == b.ap;
  }
  friend bool operator!=(const prop_var& a, const prop_var& b) { return !(a == b); }

  std::string name() const {
    switch (k) {
      case kind::ap_step:
        return ap + "^" + std::to_string(idx) + "_" +
               (owner >= 0 ? "t" + std::to_string(owner) : var);
      case kind::loop_sel: return "l" + std::to_string(idx);
      case kind::aux: return "x" + std::to_string(idx);
    }
    return {};
  }
};

}  // namespace hyperqsat

template <>
struct std::hash<hyperqsat::prop_var> {
  size_t operator()(const hyperqsat::prop_var& v) const {
    size_t h = static_cast<size_t>(v.k);
    h = h * 1000003u ^ std::hash<int>{}(v.owner);
    h = h * 1000003u ^ std::hash<int>{}(v.idx);
    h = h * 1000003u ^ std::hash<std::string>{}(v.var);
    h = h * 1000003u ^ std::hash<std::string>{}(v.ap);
    return h;
  }
};

namespace hyperqsat {

using node_id = uint32_t;

enum class prop_op : uint8_t { fls, tru, lit, not_, and_, or_ };

struct prop_node {
  prop_op op;
  bool pol = true;  // lit only
  prop_var var;     // lit only
  std::vector<node_id> kids;
};

// Hash-consing arena for propositional formula DAGs. Constructors fold
// constants, collapse single-child gates, and flip literal polarity instead
// of stacking negations, so structurally equal terms share one node.
class prop_pool {
 public:
  prop_pool() {
    nodes_.push_back({prop_op::fls, true, {}, {}});
    nodes_.push_back({prop_op::tru, true, {}, {}});
  }

  node_id fls() const { return 0; }
  node_id tru() const { return 1; }

  node_id lit(const prop_var& v, bool pol = true) {
    auto key = std::make_pair(v, pol);
    auto it = lit_unique_.find(key);
    if (it != lit_unique_.end()) return it->second;
    node_id id = push({prop_op::lit, pol, v, {}});
    lit_unique_.emplace(std::move(key), id);
    return id;
  }

  node_id land(std::vector<node_id> kids) { return gate(prop_op::and_, std::move(kids)); }
  node_id lor(std::vector<node_id> kids) { return gate(prop_op::or_, std::move(kids)); }
  node_id land(node_id a, node_id b) { return land(std::vector<node_id>{a, b}); }
  node_id lor(node_id a, node_id b) { return lor(std::vector<node_id>{a, b}); }

  node_id lnot(node_id a) {
    const prop_node& n = at(a);
    switch (n.op) {
      case prop_op::fls: return tru();
      case prop_op::tru: return fls();
      case prop_op::lit: return lit(n.var, !n.pol);
      case prop_op::not_: return n.kids[0];
      default: break;
    }
    auto key = std::make_pair(static_cast<uint8_t>(prop_op::not_), std::vector<node_id>{a});
    auto it = gate_unique_.find(key);
    if (it != gate_unique_.end()) return it->second;
    node_id id = push({prop_op::not_, true, {}, {a}});
    gate_unique_.emplace(std::move(key), id);
    return id;
  }

  node_id implies(node_id a, node_id b) { return lor(lnot(a), b); }

  // x <-> y expanded as the two implications (~x | y) & (~y | x).
  node_id iff(node_id a, node_id b) {
    return land(lor(lnot(a), b), lor(lnot(b), a));
  }

  const prop_node& at(node_id id) const { return nodes_[id]; }
  size_t size() const { return nodes_.size(); }

 private:
  node_id push(prop_node n) {
    nodes_.push_back(std::move(n));
    return static_cast<node_id>(nodes_.size() - 1);
  }

  node_id gate(prop_op op, std::vector<node_id> kids) {
    std::vector<node_id> kept;
    kept.reserve(kids.size());
    node_id absorb = op == prop_op::and_ ? fls() : tru();
    node_id neutral = op == prop_op::and_ ? tru() : fls();
    for (node_id k : kids) {
      if (k == absorb) return absorb;
      if (k == neutral) continue;
      kept.push_back(k);
    }
    if (kept.empty()) return neutral;
    if (kept.size() == 1) return kept[0];
    auto key = std::make_pair(static_cast<uint8_t>(op), kept);
    auto it = gate_unique_.find(key);
    if (it != gate_unique_.end()) return it->second;
    node_id id = push({op, true, {}, std::move(kept)});
    gate_unique_.emplace(std::move(key), id);
    return id;
  }

  struct gate_key_hash {
    size_t operator()(const std::pair<uint8_t, std::vector<node_id>>& k) const {
      size_t h = k.first;
      for (node_id id : k.second) h = h * 1000003u ^ id;
      return h;
    }
  };
  struct lit_key_hash {
    size_t operator()(const std::pair<prop_var, bool>& k) const {
      return std::hash<prop_var>{}(k.first) * 2u + (k.second ? 1u : 0u);
    }
  };

  std::vector<prop_node> nodes_;
  std::unordered_map<std::pair<uint8_t, std::vector<node_id>>, node_id, gate_key_hash>
      gate_unique_;
  std::unordered_map<std::pair<prop_var, bool>, node_id, lit_key_hash> lit_unique_;
};

using prop_assignment = std::unordered_map<prop_var, bool>;

namespace detail {

inline bool substitute_rec(const prop_pool& pool, node_id id, const prop_assignment& asg,
                           std::unordered_map<node_id, bool>& memo) {
  auto it = memo.find(id);
  if (it != memo.end()) return it->second;
  const prop_node& n = pool.at(id);
  bool v = false;
  switch (n.op) {
    case prop_op::fls: v = false; break;
    case prop_op::tru: v = true; break;
    case prop_op::lit: {
      auto a = asg.find(n.var);
      if (a == asg.end()) throw std::invalid_argument("unassigned variable " + n.var.name());
      v = n.pol ? a->second : !a->second;
      break;
    }
    case prop_op::not_: v = !substitute_rec(pool, n.kids[0], asg, memo); break;
    case prop_op::and_:
      v = true;
      for (node_id k : n.kids) v = v && substitute_rec(pool, k, asg, memo);
      break;
    case prop_op::or_:
      v = false;
      for (node_id k : n.kids) v = v || substitute_rec(pool, k, asg, memo);
      break;
  }
  memo.emplace(id, v);
  return v;
}

}  // namespace detail

// Evaluates the DAG under a total assignment of its variables.
inline bool substitute(const prop_pool& pool, node_id root, const prop_assignment& asg) {
  std::unordered_map<node_id, bool> memo;
  return detail::substitute_rec(pool, root, asg, memo);
}

namespace detail {

inline void support_rec(const prop_pool& pool, node_id id, std::vector<prop_var>& out,
                        std::unordered_map<node_id, char>& seen,
                        std::unordered_map<prop_var, char>& vars) {
  if (seen.count(id)) return;
  seen.emplace(id, 1);
  const prop_node& n = pool.at(id);
  if (n.op == prop_op::lit) {
    if (!vars.count(n.var)) {
      vars.emplace(n.var, 1);
      out.push_back(n.var);
    }
    return;
  }
  for (node_id k : n.kids) support_rec(pool, k, out, seen, vars);
}

}  // namespace detail

// Variables occurring in the DAG, in first-occurrence order.
inline std::vector<prop_var> support(const prop_pool& pool, node_id root) {
  std::vector<prop_var> out;
  std::unordered_map<node_id, char> seen;
  std::unordered_map<prop_var, char> vars;
  detail::support_rec(pool, root, out, seen, vars);
  return out;
}

namespace detail {

template <typename LitFn>
node_id rebuild_rec(prop_pool& pool, node_id id, LitFn&& litfn,
                    std::unordered_map<node_id, node_id>& memo) {
  auto it = memo.find(id);
  if (it != memo.end()) return it->second;
  // copy, not reference: recursive calls append to the pool and may move it
  const prop_node n = pool.at(id);
  node_id res = id;
  switch (n.op) {
    case prop_op::fls: res = pool.fls(); break;
    case prop_op::tru: res = pool.tru(); break;
    case prop_op::lit: res = litfn(n.var, n.pol); break;
    case prop_op::not_: res = pool.lnot(rebuild_rec(pool, n.kids[0], litfn, memo)); break;
    case prop_op::and_:
    case prop_op::or_: {
      std::vector<node_id> kids;
      kids.reserve(n.kids.size());
      bool all_same = true;
      for (node_id k : n.kids) {
        node_id nk = rebuild_rec(pool, k, litfn, memo);
        all_same = all_same && nk == k;
        kids.push_back(nk);
      }
      res = all_same ? id
                     : (n.op == prop_op::and_ ? pool.land(std::move(kids))
                                              : pool.lor(std::move(kids)));
      break;
    }
  }
  memo.emplace(id, res);
  return res;
}

}  // namespace detail

// Rebuilds the DAG with every literal replaced through litfn(var, polarity);
// constant folding applies along the way. litfn must return a node in the
// same pool.
template <typename LitFn>
node_id rebuild_literals(prop_pool& pool, node_id root, LitFn&& litfn) {
  std::unordered_map<node_id, node_id> memo;
  return detail::rebuild_rec(pool, root, litfn, memo);
}

// Cofactor: the DAG with one variable fixed to a constant.
inline node_id assign_var(prop_pool& pool, node_id root, const prop_var& v, bool value) {
  return rebuild_literals(pool, root, [&](const prop_var& var, bool pol) {
    if (var == v) return (pol == value) ? pool.tru() : pool.fls();
    return pool.lit(var, pol);
  });
}

}  // namespace hyperqsat
