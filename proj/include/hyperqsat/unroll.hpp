#pragma once

#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hyperqsat/formula.hpp"
#include "hyperqsat/prop.hpp"
#include "hyperqsat/transform.hpp"

namespace hyperqsat {

// One-hot constraint on the loop selector: exactly one of l_0..l_{k-1}.
inline node_id loop_constraint(prop_pool& pool, int k) {
  if (k < 1) throw std::invalid_argument("unrolling bound must be at least 1");
  std::vector<node_id> at_least_one;
  at_least_one.reserve(k);
  for (int l = 0; l < k; ++l) at_least_one.push_back(pool.lit(prop_var::loop(l)));
  std::vector<node_id> parts{pool.lor(std::move(at_least_one))};
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b)
      parts.push_back(
          pool.lor(pool.lit(prop_var::loop(a), false), pool.lit(prop_var::loop(b), false)));
  return pool.land(std::move(parts));
}

namespace detail {

// Encodes an NNF body over lasso positions 0..k-1 with back edge k-1 -> l.
// Results are memoized per (subformula, position), so repeated subterms and
// the overlapping windows of U/R expansions share nodes.
class step_encoder {
 public:
  step_encoder(prop_pool& pool, int k, int l) : pool_(pool), k_(k), l_(l) {}

  node_id enc(const ltl& n, int i) {
    auto key = std::make_pair(n.get(), i);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    node_id res = encode(n, i);
    memo_.emplace(key, res);
    return res;
  }

 private:
  int succ(int i) const { return i + 1 < k_ ? i + 1 : l_; }

  node_id atom_lit(const ltl_node& n, int i, bool pol) {
    return pool_.lit(prop_var::step_of_var(n.tvar, n.ap, i), pol);
  }

  node_id encode(const ltl& n, int i) {
    switch (n->op) {
      case ltl_op::tt: return pool_.tru();
      case ltl_op::ff: return pool_.fls();
      case ltl_op::atom: return atom_lit(*n, i, true);
      case ltl_op::not_:
        if (n->lhs->op != ltl_op::atom)
          throw std::invalid_argument("body must be in negation normal form");
        return atom_lit(*n->lhs, i, false);
      case ltl_op::and_: return pool_.land(enc(n->lhs, i), enc(n->rhs, i));
      case ltl_op::or_: return pool_.lor(enc(n->lhs, i), enc(n->rhs, i));
      case ltl_op::next: return enc(n->lhs, succ(i));
      case ltl_op::until: {
        std::vector<node_id> cases;
        for (int j = i; j < k_; ++j) {
          std::vector<node_id> conj{enc(n->rhs, j)};
          for (int m = i; m < j; ++m) conj.push_back(enc(n->lhs, m));
          cases.push_back(pool_.land(std::move(conj)));
        }
        // Wrap around the back edge: rhs discharged early in the next pass
        // through the loop, lhs held up to it.
        for (int j = l_; j < i; ++j) {
          std::vector<node_id> conj{enc(n->rhs, j)};
          for (int m = i; m < k_; ++m) conj.push_back(enc(n->lhs, m));
          for (int m = l_; m < j; ++m) conj.push_back(enc(n->lhs, m));
          cases.push_back(pool_.land(std::move(conj)));
        }
        return pool_.lor(std::move(cases));
      }
      case ltl_op::release: {
        std::vector<node_id> cases;
        for (int j = i; j < k_; ++j) {
          std::vector<node_id> disj{enc(n->rhs, j)};
          for (int m = i; m < j; ++m) disj.push_back(enc(n->lhs, m));
          cases.push_back(pool_.lor(std::move(disj)));
        }
        for (int j = l_; j < i; ++j) {
          std::vector<node_id> disj{enc(n->rhs, j)};
          for (int m = i; m < k_; ++m) disj.push_back(enc(n->lhs, m));
          for (int m = l_; m < j; ++m) disj.push_back(enc(n->lhs, m));
          cases.push_back(pool_.lor(std::move(disj)));
        }
        return pool_.land(std::move(cases));
      }
      default: throw std::invalid_argument("body must be in negation normal form");
    }
  }

  struct key_hash {
    size_t operator()(const std::pair<const ltl_node*, int>& k) const {
      return std::hash<const void*>{}(k.first) * 1000003u ^ static_cast<size_t>(k.second);
    }
  };

  prop_pool& pool_;
  int k_;
  int l_;
  std::unordered_map<std::pair<const ltl_node*, int>, node_id, key_hash> memo_;
};

}  // namespace detail

// [[ l_l & enc_l(body, 0) : l in 0..k-1 ]] as a disjunction. The body must
// already be in negation normal form.
inline node_id unroll_body(prop_pool& pool, const ltl& body, int k) {
  if (k < 1) throw std::invalid_argument("unrolling bound must be at least 1");
  if (!is_nnf(body)) throw std::invalid_argument("body must be in negation normal form");
  std::vector<node_id> cases;
  cases.reserve(k);
  for (int l = 0; l < k; ++l) {
    detail::step_encoder e(pool, k, l);
    cases.push_back(pool.land(pool.lit(prop_var::loop(l)), e.enc(body, 0)));
  }
  return pool.lor(std::move(cases));
}

}  // namespace hyperqsat
