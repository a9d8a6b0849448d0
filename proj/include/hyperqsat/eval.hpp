#pragma once

#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "hyperqsat/formula.hpp"
#include "hyperqsat/trace.hpp"

namespace hyperqsat {

// Binding of trace variables to indices into a trace vector.
using trace_env = std::unordered_map<std::string, size_t>;

namespace detail {

// Truth of a closed LTL instance at each of the p+q distinguished positions
// of the joint lasso (all traces share stem length p and loop length q).
// Until-family operators are solved by fixpoint over the loop positions:
// least fixpoint (seed false) for U/F, greatest (seed true) for R/G/W.
class position_eval {
 public:
  position_eval(const std::vector<lasso_trace>& traces, const trace_env& env)
      : traces_(traces), env_(env) {
    p_ = traces.front().stem.size();
    q_ = traces.front().loop.size();
    n_ = p_ + q_;
  }

  std::vector<char> run(const ltl& node) {
    switch (node->op) {
      case ltl_op::tt: return std::vector<char>(n_, 1);
      case ltl_op::ff: return std::vector<char>(n_, 0);
      case ltl_op::atom: {
        auto it = env_.find(node->tvar);
        if (it == env_.end())
          throw std::invalid_argument("unbound variable '" + node->tvar + "'");
        const lasso_trace& t = traces_[it->second];
        std::vector<char> v(n_);
        for (size_t i = 0; i < n_; ++i) v[i] = t.at(i).count(node->ap) ? 1 : 0;
        return v;
      }
      case ltl_op::not_: {
        auto s = run(node->lhs);
        for (auto& x : s) x = !x;
        return s;
      }
      case ltl_op::and_: return pointwise(node, [](bool a, bool b) { return a && b; });
      case ltl_op::or_: return pointwise(node, [](bool a, bool b) { return a || b; });
      case ltl_op::implies: return pointwise(node, [](bool a, bool b) { return !a || b; });
      case ltl_op::iff: return pointwise(node, [](bool a, bool b) { return a == b; });
      case ltl_op::next: {
        auto s = run(node->lhs);
        std::vector<char> v(n_);
        for (size_t i = 0; i < n_; ++i) v[i] = s[succ(i)];
        return v;
      }
      case ltl_op::eventually:
        return fixpoint(std::vector<char>(n_, 1), run(node->lhs), /*seed=*/false,
                        [](bool a, bool b, bool nxt) { (void)a; return b || nxt; });
      case ltl_op::always:
        return fixpoint(std::vector<char>(n_, 1), run(node->lhs), /*seed=*/true,
                        [](bool a, bool b, bool nxt) { (void)a; return b && nxt; });
      case ltl_op::until:
        return fixpoint(run(node->lhs), run(node->rhs), /*seed=*/false,
                        [](bool a, bool b, bool nxt) { return b || (a && nxt); });
      case ltl_op::weak_until:
        return fixpoint(run(node->lhs), run(node->rhs), /*seed=*/true,
                        [](bool a, bool b, bool nxt) { return b || (a && nxt); });
      case ltl_op::release:
        return fixpoint(run(node->lhs), run(node->rhs), /*seed=*/true,
                        [](bool a, bool b, bool nxt) { return b && (a || nxt); });
    }
    throw std::logic_error("unreachable");
  }

 private:
  size_t succ(size_t i) const { return i + 1 < n_ ? i + 1 : p_; }

  template <typename F>
  std::vector<char> pointwise(const ltl& node, F&& f) {
    auto a = run(node->lhs);
    auto b = run(node->rhs);
    std::vector<char> v(n_);
    for (size_t i = 0; i < n_; ++i) v[i] = f(a[i], b[i]);
    return v;
  }

  // step(a_i, b_i, v_succ(i)) iterated over the loop until stable (at most
  // q sweeps), then back-substituted through the stem.
  template <typename F>
  std::vector<char> fixpoint(const std::vector<char>& a, const std::vector<char>& b, bool seed,
                             F&& step) {
    std::vector<char> v(n_, seed ? 1 : 0);
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t i = n_; i-- > p_;) {
        char nv = step(a[i], b[i], v[succ(i)]);
        if (nv != v[i]) {
          v[i] = nv;
          changed = true;
        }
      }
    }
    for (size_t i = p_; i-- > 0;) v[i] = step(a[i], b[i], v[i + 1]);
    return v;
  }

  const std::vector<lasso_trace>& traces_;
  const trace_env& env_;
  size_t p_, q_, n_;
};

}  // namespace detail

// Truth of a quantifier-free body at every distinguished position, under a
// fixed binding of its trace variables.
inline std::vector<char> eval_positions(const ltl& body, const std::vector<lasso_trace>& traces,
                                        const trace_env& env) {
  return detail::position_eval(traces, env).run(body);
}

inline bool eval_at(const ltl& body, const std::vector<lasso_trace>& traces,
                    const trace_env& env) {
  return eval_positions(body, traces, env)[0] != 0;
}

namespace detail {

inline bool eval_quant(const formula& f, const model& m,
                       const std::vector<std::pair<quantifier, std::string>>& vars, size_t idx,
                       trace_env& env) {
  if (idx == vars.size()) return eval_at(f.body, m.traces, env);
  auto [q, name] = vars[idx];
  for (size_t t = 0; t < m.traces.size(); ++t) {
    env[name] = t;
    bool sub = eval_quant(f, m, vars, idx + 1, env);
    if (q == quantifier::exists && sub) {
      env.erase(name);
      return true;
    }
    if (q == quantifier::forall && !sub) {
      env.erase(name);
      return false;
    }
  }
  env.erase(name);
  return q == quantifier::forall;
}

}  // namespace detail

// Reference semantics: does the trace set satisfy the formula? Quantifiers
// range over m.traces; the body is evaluated exactly on the joint lasso.
inline bool eval(const model& m, const formula& f) {
  validate(m);
  std::vector<std::pair<quantifier, std::string>> vars;
  for (const auto& g : f.prefix)
    for (const auto& v : g.vars) vars.emplace_back(g.quant, v);
  trace_env env;
  return detail::eval_quant(f, m, vars, 0, env);
}

}  // namespace hyperqsat
