#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hyperqsat/formula.hpp"

namespace hyperqsat {

struct random_spec {
  uint64_t seed = 1;
  int size = 20;   // AST node budget for the body
  int n_aps = 2;   // APs named a0..a(n-1)
  std::vector<std::pair<quantifier, int>> groups;  // explicit (quantifier, size) prefix
  int alternations = 0;                            // used when groups is empty
  quantifier start = quantifier::exists;
};

namespace detail {

class body_gen {
 public:
  body_gen(std::mt19937_64& rng, const std::vector<std::string>& aps,
           const std::vector<std::string>& tvars)
      : rng_(rng), aps_(aps), tvars_(tvars) {}

  ltl gen(int size) {
    // operator weights: atom 30, ~ 10, & 12, | 12, -> 6, <-> 4, X 8, F 6, G 6, U 6
    enum op { atom, not_, and_, or_, implies, iff, next, eventually, always, until };
    static constexpr int weights[] = {30, 10, 12, 12, 6, 4, 8, 6, 6, 6};
    static constexpr int arity[] = {0, 1, 2, 2, 2, 2, 1, 1, 1, 2};
    // an op is only drawable if the budget can pay for its operands
    auto ok = [size](int i) { return size > arity[i]; };
    int total = 0;
    for (int i = 0; i < 10; ++i)
      if (ok(i)) total += weights[i];
    uint64_t r = rng_() % static_cast<uint64_t>(total);
    int pick = 0;
    for (int i = 0; i < 10; ++i) {
      if (!ok(i)) continue;
      if (r < static_cast<uint64_t>(weights[i])) {
        pick = i;
        break;
      }
      r -= weights[i];
    }
    switch (pick) {
      case atom: return rand_atom();
      case not_: return mk::not_(gen(size - 1));
      case next: return mk::next(gen(size - 1));
      case eventually: return mk::eventually(gen(size - 1));
      case always: return mk::always(gen(size - 1));
      default: break;
    }
    int left = 1 + static_cast<int>(rng_() % static_cast<uint64_t>(size - 2));
    ltl l = gen(left);
    ltl rr = gen(size - 1 - left);
    switch (pick) {
      case and_: return mk::and_(std::move(l), std::move(rr));
      case or_: return mk::or_(std::move(l), std::move(rr));
      case implies: return mk::implies(std::move(l), std::move(rr));
      case iff: return mk::iff(std::move(l), std::move(rr));
      default: return mk::until(std::move(l), std::move(rr));
    }
  }

 private:
  ltl rand_atom() {
    const std::string& ap = aps_[rng_() % aps_.size()];
    const std::string& tv = tvars_[rng_() % tvars_.size()];
    return mk::atom(ap, tv);
  }

  std::mt19937_64& rng_;
  const std::vector<std::string>& aps_;
  const std::vector<std::string>& tvars_;
};

}  // namespace detail

// Deterministic in the spec: same spec, same formula. Trace variables are
// named p0, p1, ... across the prefix; atoms draw AP and trace variable
// uniformly.
inline formula gen_random(const random_spec& spec) {
  if (spec.size < 1 || spec.n_aps < 1) throw std::invalid_argument("size and n_aps must be >= 1");
  std::vector<std::pair<quantifier, int>> groups = spec.groups;
  if (groups.empty()) {
    if (spec.alternations < 0) throw std::invalid_argument("alternations must be >= 0");
    quantifier q = spec.start;
    for (int i = 0; i <= spec.alternations; ++i, q = dual(q)) groups.push_back({q, 1});
  }
  formula f;
  std::vector<std::string> tvars;
  for (const auto& [q, n] : groups) {
    if (n < 1) throw std::invalid_argument("group sizes must be >= 1");
    quant_group g{q, {}};
    for (int i = 0; i < n; ++i) {
      g.vars.push_back("p" + std::to_string(tvars.size()));
      tvars.push_back(g.vars.back());
    }
    f.prefix.push_back(std::move(g));
  }
  std::vector<std::string> aps;
  aps.reserve(spec.n_aps);
  for (int i = 0; i < spec.n_aps; ++i) aps.push_back("a" + std::to_string(i));
  std::mt19937_64 rng(spec.seed);
  detail::body_gen gen(rng, aps, tvars);
  f.body = gen.gen(spec.size);
  validate(f);
  return f;
}

}  // namespace hyperqsat
