#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hyperqsat/formula.hpp"
#include "hyperqsat/prop.hpp"
#include "hyperqsat/transform.hpp"
#include "hyperqsat/unroll.hpp"

namespace hyperqsat {

struct quant_block {
  quantifier q;
  std::vector<prop_var> vars;
};

// Block-0 variables in canonical order: per candidate trace (ascending), per
// AP (lexicographic), per step (ascending); all loop selectors after. This
// order fixes the lowest QDIMACS ids so certificates decode positionally.
inline std::vector<prop_var> outer_vars(int m, int k, const std::vector<std::string>& aps) {
  std::vector<prop_var> out;
  out.reserve(static_cast<size_t>(m) * aps.size() * k + k);
  for (int t = 0; t < m; ++t)
    for (const auto& ap : aps)
      for (int j = 0; j < k; ++j) out.push_back(prop_var::step_of_trace(t, ap, j));
  for (int j = 0; j < k; ++j) out.push_back(prop_var::loop(j));
  return out;
}

// Prefix blocks: outer existential block for the candidate trace set, then
// one block per quantifier group. The Aux block is appended by to_cnf.
inline std::vector<quant_block> build_prefix(const formula& f, int m, int k) {
  if (m < 1 || k < 1) throw std::invalid_argument("m and k must be at least 1");
  auto aps = collect_aps(f);
  std::vector<quant_block> blocks;
  blocks.push_back({quantifier::exists, outer_vars(m, k, aps)});
  for (const auto& g : f.prefix) {
    quant_block b{g.quant, {}};
    for (const auto& tv : g.vars)
      for (const auto& ap : aps)
        for (int j = 0; j < k; ++j) b.vars.push_back(prop_var::step_of_var(tv, ap, j));
    blocks.push_back(std::move(b));
  }
  return blocks;
}

// P_{Q_i}: each trace variable of the group matches one of the m candidate
// traces pointwise over every (ap, step) pair.
inline node_id build_linking_premise(prop_pool& pool, const quant_group& g, int m, int k,
                                     const std::vector<std::string>& aps) {
  std::vector<node_id> per_var;
  per_var.reserve(g.vars.size());
  for (const auto& tv : g.vars) {
    std::vector<node_id> per_trace;
    per_trace.reserve(m);
    for (int t = 0; t < m; ++t) {
      std::vector<node_id> links;
      links.reserve(aps.size() * k);
      for (const auto& ap : aps)
        for (int j = 0; j < k; ++j)
          links.push_back(pool.iff(pool.lit(prop_var::step_of_var(tv, ap, j)),
                                   pool.lit(prop_var::step_of_trace(t, ap, j))));
      per_trace.push_back(pool.land(std::move(links)));
    }
    per_var.push_back(pool.lor(std::move(per_trace)));
  }
  return pool.land(std::move(per_var));
}

// Matrix of the quantified encoding: right-nested premise combination
// (-> under forall, & under exists) around loop_constraint & unrolled body,
// with loop_constraint conjoined again at top level so the outer block
// always commits to a well-formed lasso.
inline node_id assemble(prop_pool& pool, const formula& f, int m, int k) {
  if (m < 1 || k < 1) throw std::invalid_argument("m and k must be at least 1");
  auto aps = collect_aps(f);
  node_id loop = loop_constraint(pool, k);
  node_id acc = pool.land(loop, unroll_body(pool, nnf(f.body), k));
  for (auto it = f.prefix.rbegin(); it != f.prefix.rend(); ++it) {
    node_id premise = build_linking_premise(pool, *it, m, k, aps);
    acc = it->quant == quantifier::forall ? pool.implies(premise, acc)
                                          : pool.land(premise, acc);
  }
  return pool.land(loop, acc);
}

struct qbf_instance {
  int m = 0;
  int k = 0;
  std::vector<std::string> aps;
  std::vector<quant_block> blocks;         // outer ∃, prefix groups, final ∃ Aux
  std::vector<std::vector<int>> clauses;   // signed varmap ids
  std::vector<prop_var> id_to_var;         // id i <-> id_to_var[i-1]
  std::unordered_map<prop_var, int> var_to_id;
  size_t outer_count = 0;

  int id_of(const prop_var& v) const {
    auto it = var_to_id.find(v);
    if (it == var_to_id.end()) throw std::invalid_argument("variable not in instance: " + v.name());
    return it->second;
  }
  const std::vector<prop_var>& outer() const { return blocks.front().vars; }
};

namespace detail {

// Clause-form conversion with definitional variables. Every gate gets both
// implication directions, so for any assignment of the original variables
// the Aux extension is forced and the matrix evaluates to the formula.
class tseitin {
 public:
  tseitin(const prop_pool& pool, qbf_instance& inst) : pool_(pool), inst_(inst) {}

  void run(node_id root) {
    const prop_node& n = pool_.at(root);
    if (n.op == prop_op::tru) return;  // empty matrix
    if (n.op == prop_op::fls) {
      int a = fresh_aux();
      inst_.clauses.push_back({a});
      inst_.clauses.push_back({-a});
      return;
    }
    emit_clause({walk(root)});
  }

  std::vector<prop_var>&& aux_vars() { return std::move(aux_); }

 private:
  int fresh_aux() {
    prop_var v = prop_var::aux(static_cast<int>(aux_.size()));
    aux_.push_back(v);
    int id = static_cast<int>(inst_.id_to_var.size()) + 1;
    inst_.id_to_var.push_back(v);
    inst_.var_to_id.emplace(v, id);
    return id;
  }

  void emit_clause(std::vector<int> lits) {
    std::unordered_set<int> seen;
    std::vector<int> out;
    out.reserve(lits.size());
    for (int l : lits) {
      if (seen.count(-l)) return;  // tautology
      if (seen.insert(l).second) out.push_back(l);
    }
    inst_.clauses.push_back(std::move(out));
  }

  int walk(node_id id) {
    auto it = memo_.find(id);
    if (it != memo_.end()) return it->second;
    const prop_node& n = pool_.at(id);
    int res = 0;
    switch (n.op) {
      case prop_op::tru:
      case prop_op::fls:
        // unreachable: gate constructors fold constants away
        throw std::logic_error("constant below a gate");
      case prop_op::lit: {
        int v = inst_.id_of(n.var);
        res = n.pol ? v : -v;
        break;
      }
      case prop_op::not_: res = -walk(n.kids[0]); break;
      case prop_op::and_:
      case prop_op::or_: {
        std::vector<int> kids;
        kids.reserve(n.kids.size());
        for (node_id c : n.kids) kids.push_back(walk(c));
        int a = fresh_aux();
        std::vector<int> big{n.op == prop_op::and_ ? a : -a};
        for (int l : kids) {
          emit_clause(n.op == prop_op::and_ ? std::vector<int>{-a, l}
                                            : std::vector<int>{a, -l});
          big.push_back(n.op == prop_op::and_ ? -l : l);
        }
        emit_clause(std::move(big));
        res = a;
        break;
      }
    }
    memo_.emplace(id, res);
    return res;
  }

  const prop_pool& pool_;
  qbf_instance& inst_;
  std::vector<prop_var> aux_;
  std::unordered_map<node_id, int> memo_;
};

}  // namespace detail

// Numbers the prefix variables (block 0 first, canonical order), converts the
// matrix to clause form, and appends the Aux block.
inline qbf_instance to_cnf(const prop_pool& pool, node_id matrix,
                           std::vector<quant_block> blocks, int m, int k,
                           std::vector<std::string> aps) {
  qbf_instance inst;
  inst.m = m;
  inst.k = k;
  inst.aps = std::move(aps);
  inst.outer_count = blocks.front().vars.size();
  for (const auto& b : blocks)
    for (const auto& v : b.vars) {
      int id = static_cast<int>(inst.id_to_var.size()) + 1;
      inst.id_to_var.push_back(v);
      if (!inst.var_to_id.emplace(v, id).second)
        throw std::invalid_argument("variable quantified twice: " + v.name());
    }
  detail::tseitin ts(pool, inst);
  ts.run(matrix);
  blocks.push_back({quantifier::exists, ts.aux_vars()});
  inst.blocks = std::move(blocks);
  return inst;
}

// Full pipeline: assemble + prefix + clause form for one (m, k) candidate.
inline qbf_instance build_qbf(const formula& f, int m, int k) {
  prop_pool pool;
  node_id matrix = assemble(pool, f, m, k);
  return to_cnf(pool, matrix, build_prefix(f, m, k), m, k, collect_aps(f));
}

// QDIMACS text. Adjacent same-quantifier blocks are merged and empty blocks
// skipped, since the format requires strictly alternating quantifier lines.
inline std::string emit_qdimacs(const qbf_instance& inst) {
  std::ostringstream os;
  os << "p cnf " << inst.id_to_var.size() << ' ' << inst.clauses.size() << '\n';
  std::vector<std::pair<quantifier, std::vector<int>>> lines;
  for (const auto& b : inst.blocks) {
    if (b.vars.empty()) continue;
    if (lines.empty() || lines.back().first != b.q) lines.push_back({b.q, {}});
    for (const auto& v : b.vars) lines.back().second.push_back(inst.var_to_id.at(v));
  }
  for (const auto& [q, ids] : lines) {
    os << (q == quantifier::exists ? 'e' : 'a');
    for (int id : ids) os << ' ' << id;
    os << " 0\n";
  }
  for (const auto& c : inst.clauses) {
    for (int l : c) os << l << ' ';
    os << "0\n";
  }
  return os.str();
}

}  // namespace hyperqsat
