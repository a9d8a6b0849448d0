#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <string>
#include <sys/wait.h>
#include <unordered_map>
#include <vector>

#include "hyperqsat/hyperqsat.hpp"

// Shared test machinery: exhaustive small-model enumeration (the semantic
// oracle everything else is judged against), quantifier elimination over the
// node pool, a compact DAG evaluator for bulk truth checks, random inputs,
// and subprocess plumbing for the CLI-level tests.
namespace hqtest {

using namespace hyperqsat;

inline formula F(const std::string& s) { return parse(s); }

// --- environment wiring (set by ctest; required by CLI/backend tests) ---

inline std::string env_or(const char* name, const std::string& fallback = {}) {
  const char* v = std::getenv(name);
  return v ? std::string(v) : fallback;
}

inline std::string repo_root() { return env_or("HYPERQSAT_ROOT", "."); }

// --- subprocess helper (stdout captured; pass 2>&1 yourself if needed) ---

struct cmd_result {
  int status = -1;  // exit code, or -1 if the child did not exit normally
  std::string out;
};

inline cmd_result run_cmd(const std::string& cmd) {
  cmd_result r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int rc = pclose(p);
  if (WIFEXITED(rc)) r.status = WEXITSTATUS(rc);
  return r;
}

inline std::filesystem::path fresh_dir(const std::string& tag) {
  auto d = std::filesystem::temp_directory_path() /
           (tag + "-" + std::to_string(::getpid()) + "-" +
            std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
  std::filesystem::create_directories(d);
  return d;
}

inline std::filesystem::path write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream os(p);
  os << text;
  return p;
}

// --- exhaustive model enumeration ---

// All 2^|aps| letters, bit i of the mask controlling aps[i].
inline std::vector<letter> all_letters(const std::vector<std::string>& aps) {
  std::vector<letter> out;
  out.reserve(size_t{1} << aps.size());
  for (size_t mask = 0; mask < (size_t{1} << aps.size()); ++mask) {
    letter l;
    for (size_t i = 0; i < aps.size(); ++i)
      if (mask >> i & 1) l.insert(aps[i]);
    out.push_back(std::move(l));
  }
  return out;
}

inline std::vector<lasso_trace> all_traces(int stem, int loop, const std::vector<std::string>& aps) {
  auto letters = all_letters(aps);
  std::vector<lasso_trace> out;
  size_t total = 1;
  for (int i = 0; i < stem + loop; ++i) total *= letters.size();
  out.reserve(total);
  for (size_t code = 0; code < total; ++code) {
    lasso_trace t;
    size_t c = code;
    for (int i = 0; i < stem; ++i, c /= letters.size()) t.stem.push_back(letters[c % letters.size()]);
    for (int i = 0; i < loop; ++i, c /= letters.size()) t.loop.push_back(letters[c % letters.size()]);
    out.push_back(std::move(t));
  }
  return out;
}

// Every model with exactly m traces of the given shape (duplicates included).
inline std::vector<model> all_models(int m, int stem, int loop,
                                     const std::vector<std::string>& aps) {
  auto traces = all_traces(stem, loop, aps);
  std::vector<model> out;
  size_t total = 1;
  for (int i = 0; i < m; ++i) total *= traces.size();
  out.reserve(total);
  for (size_t code = 0; code < total; ++code) {
    model md;
    size_t c = code;
    for (int i = 0; i < m; ++i, c /= traces.size()) md.traces.push_back(traces[c % traces.size()]);
    out.push_back(std::move(md));
  }
  return out;
}

// Brute-force satisfiability over every model with m <= max_m traces and
// every stem/loop split with stem+loop <= max_k. Only usable for tiny
// alphabets; this is the ground truth the engine is compared against.
inline std::optional<model> find_model(const formula& f, int max_m, int max_k) {
  auto aps = collect_aps(f);
  for (int m = 1; m <= max_m; ++m)
    for (int k = 1; k <= max_k; ++k)
      for (int stem = 0; stem < k; ++stem)
        for (auto& md : all_models(m, stem, k - stem, aps))
          if (eval(md, f)) return md;
  return std::nullopt;
}

inline bool exists_model(const formula& f, int max_m, int max_k) {
  return find_model(f, max_m, max_k).has_value();
}

// --- random inputs ---

// Hyper formula with a random prefix over at most max_vars variables.
inline formula random_hyper(uint64_t seed, int size, int n_aps, int max_vars) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 1);
  random_spec spec;
  spec.seed = seed;
  spec.size = size;
  spec.n_aps = n_aps;
  int left = 1 + static_cast<int>(rng() % max_vars);
  while (left > 0) {
    int g = 1 + static_cast<int>(rng() % left);
    spec.groups.emplace_back(rng() % 2 ? quantifier::forall : quantifier::exists, g);
    left -= g;
  }
  return gen_random(spec);
}

// Random propositional DAG over the given variables (for CNF conversion and
// DPLL tests).
inline node_id random_prop(prop_pool& pool, const std::vector<prop_var>& vars,
                           std::mt19937_64& rng, int budget) {
  if (budget <= 1) {
    switch (rng() % 8) {
      case 0: return pool.fls();
      case 1: return pool.tru();
      default: return pool.lit(vars[rng() % vars.size()], rng() % 2 == 0);
    }
  }
  switch (rng() % 4) {
    case 0: return pool.lnot(random_prop(pool, vars, rng, budget - 1));
    case 1: return pool.lit(vars[rng() % vars.size()], rng() % 2 == 0);
    default: {
      int lhs = 1 + static_cast<int>(rng() % static_cast<uint64_t>(budget - 1));
      node_id l = random_prop(pool, vars, rng, lhs);
      node_id r = random_prop(pool, vars, rng, budget - lhs);
      return rng() % 2 ? pool.land(l, r) : pool.lor(l, r);
    }
  }
}

// --- quantifier elimination (brute-force resolution of inner blocks) ---

// Resolves the listed variables (outermost first) by Shannon expansion:
// exists v. f == f[v:=0] | f[v:=1], forall dually. Applied innermost-first,
// this turns the assembled matrix into an equivalent formula over block-0
// variables only.
inline node_id eliminate(prop_pool& pool, node_id root,
                         const std::vector<std::pair<quantifier, prop_var>>& inner) {
  node_id acc = root;
  for (auto it = inner.rbegin(); it != inner.rend(); ++it) {
    node_id f0 = assign_var(pool, acc, it->second, false);
    node_id f1 = assign_var(pool, acc, it->second, true);
    acc = it->first == quantifier::exists ? pool.lor(f0, f1) : pool.land(f0, f1);
  }
  return acc;
}

inline std::vector<std::pair<quantifier, prop_var>> inner_vars(
    const std::vector<quant_block>& blocks) {
  std::vector<std::pair<quantifier, prop_var>> out;
  for (size_t i = 1; i < blocks.size(); ++i)
    for (const auto& v : blocks[i].vars) out.emplace_back(blocks[i].q, v);
  return out;
}

// --- compact DAG evaluation against packed assignments ---

// A flattened copy of a sub-DAG whose literals are resolved to bit positions
// of a 64-bit assignment word. Nodes are stored children-first, so a single
// forward sweep evaluates the root.
struct compact_dag {
  struct nd {
    prop_op op;
    bool pol = false;
    int bit = -1;
    std::vector<int> kids;
  };
  std::vector<nd> nodes;
  int root = -1;

  bool eval(uint64_t bits) const {
    std::vector<char> val(nodes.size());
    for (size_t i = 0; i < nodes.size(); ++i) {
      const nd& n = nodes[i];
      switch (n.op) {
        case prop_op::fls: val[i] = 0; break;
        case prop_op::tru: val[i] = 1; break;
        case prop_op::lit: val[i] = ((bits >> n.bit & 1) != 0) == n.pol; break;
        case prop_op::not_: val[i] = !val[n.kids[0]]; break;
        case prop_op::and_: {
          char v = 1;
          for (int k : n.kids) v = v && val[k];
          val[i] = v;
          break;
        }
        case prop_op::or_: {
          char v = 0;
          for (int k : n.kids) v = v || val[k];
          val[i] = v;
          break;
        }
      }
    }
    return val[root] != 0;
  }
};

inline int compact_rec(const prop_pool& pool, node_id id,
                       const std::unordered_map<prop_var, int>& bit_of, compact_dag& out,
                       std::unordered_map<node_id, int>& memo) {
  auto it = memo.find(id);
  if (it != memo.end()) return it->second;
  const prop_node& n = pool.at(id);
  compact_dag::nd nd;
  nd.op = n.op;
  if (n.op == prop_op::lit) {
    nd.pol = n.pol;
    nd.bit = bit_of.at(n.var);
  } else {
    for (node_id k : n.kids) nd.kids.push_back(compact_rec(pool, k, bit_of, out, memo));
  }
  out.nodes.push_back(std::move(nd));
  int idx = static_cast<int>(out.nodes.size()) - 1;
  memo.emplace(id, idx);
  return idx;
}

inline compact_dag compact(const prop_pool& pool, node_id root,
                           const std::unordered_map<prop_var, int>& bit_of) {
  compact_dag out;
  std::unordered_map<node_id, int> memo;
  out.root = compact_rec(pool, root, bit_of, out, memo);
  return out;
}

// --- fast Shannon elimination for the bulk encoder-vs-semantics sweeps ---

// An integer-indexed re-implementation of the node pool, specialised for
// repeated variable elimination: literals are plain ints, gates are sorted
// and flattened for maximal sharing, and every node carries a bitmask of the
// inner variables below it so an elimination pass skips untouched subtrees.
class qe_arena {
 public:
  qe_arena() : nodes_(2) {
    nodes_[0].op = prop_op::fls;
    nodes_[1].op = prop_op::tru;
  }

  int fls() const { return 0; }
  int tru() const { return 1; }
  size_t size() const { return nodes_.size(); }

  // var < n_outer: block-0 variable, bit position == var; otherwise inner,
  // tracked by mask bit (var - n_outer)
  int lit(int var, bool pol, uint32_t mask) {
    uint64_t key = (uint64_t(var) << 1) | (pol ? 1 : 0);
    auto it = lit_unique_.find(key);
    if (it != lit_unique_.end()) return it->second;
    nd n;
    n.op = prop_op::lit;
    n.pol = pol;
    n.var = var;
    n.mask = mask;
    return intern(lit_unique_, key, std::move(n));
  }

  int lnot(int a) {
    if (a == 0) return 1;
    if (a == 1) return 0;
    if (nodes_[a].op == prop_op::lit) {
      int v = nodes_[a].var;
      bool p = nodes_[a].pol;
      uint32_t m = nodes_[a].mask;
      return lit(v, !p, m);
    }
    if (nodes_[a].op == prop_op::not_) return nodes_[a].kids[0];
    auto it = not_unique_.find(a);
    if (it != not_unique_.end()) return it->second;
    nd n;
    n.op = prop_op::not_;
    n.mask = nodes_[a].mask;
    n.kids = {a};
    return intern(not_unique_, a, std::move(n));
  }

  int gate(bool is_and, std::vector<int> kids) {
    int absorb = is_and ? 0 : 1;
    int neutral = is_and ? 1 : 0;
    std::vector<int> flat;
    flat.reserve(kids.size());
    for (int k : kids) {
      if (k == absorb) return absorb;
      if (k == neutral) continue;
      const prop_op op = nodes_[k].op;
      if ((is_and && op == prop_op::and_) || (!is_and && op == prop_op::or_))
        flat.insert(flat.end(), nodes_[k].kids.begin(), nodes_[k].kids.end());
      else
        flat.push_back(k);
    }
    std::sort(flat.begin(), flat.end());
    flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
    for (int k : flat) {  // x & ~x and dual collapse
      int neg = -1;
      if (nodes_[k].op == prop_op::not_) neg = nodes_[k].kids[0];
      if (nodes_[k].op == prop_op::lit) {
        auto it = lit_unique_.find((uint64_t(nodes_[k].var) << 1) | (nodes_[k].pol ? 0 : 1));
        if (it != lit_unique_.end()) neg = it->second;
      }
      if (neg >= 0 && std::binary_search(flat.begin(), flat.end(), neg)) return absorb;
    }
    if (flat.empty()) return neutral;
    if (flat.size() == 1) return flat[0];
    auto& unique = is_and ? and_unique_ : or_unique_;
    auto it = unique.find(flat);
    if (it != unique.end()) return it->second;
    nd n;
    n.op = is_and ? prop_op::and_ : prop_op::or_;
    for (int k : flat) n.mask |= nodes_[k].mask;
    n.kids = flat;
    return intern(unique, std::move(flat), std::move(n));
  }

  // copies a sub-DAG out of the shared pool; var_of yields the int id and
  // inner-mask of each literal's variable
  template <typename VarFn>
  int import(const prop_pool& pool, node_id root, VarFn&& var_of,
             std::unordered_map<node_id, int>& memo) {
    auto it = memo.find(root);
    if (it != memo.end()) return it->second;
    const prop_node n = pool.at(root);
    int res;
    switch (n.op) {
      case prop_op::fls: res = 0; break;
      case prop_op::tru: res = 1; break;
      case prop_op::lit: {
        auto [v, mask] = var_of(n.var);
        res = lit(v, n.pol, mask);
        break;
      }
      case prop_op::not_: res = lnot(import(pool, n.kids[0], var_of, memo)); break;
      default: {
        std::vector<int> kids;
        kids.reserve(n.kids.size());
        for (node_id k : n.kids) kids.push_back(import(pool, k, var_of, memo));
        res = gate(n.op == prop_op::and_, std::move(kids));
      }
    }
    memo.emplace(root, res);
    return res;
  }

  int assign(int root, uint32_t bit, bool value) {
    std::vector<int> memo(nodes_.size(), -1);
    return assign_rec(root, bit, value, memo);
  }

  // block-0-only DAG -> flat evaluator; bit position of a literal == its var
  compact_dag to_dag(int root, int n_outer) const {
    compact_dag out;
    std::unordered_map<int, int> memo;
    out.root = dag_rec(root, n_outer, out, memo);
    return out;
  }

 private:
  struct nd {
    prop_op op = prop_op::fls;
    bool pol = true;
    int var = -1;
    uint32_t mask = 0;  // inner variables occurring below this node
    std::vector<int> kids;
  };

  struct vec_hash {
    size_t operator()(const std::vector<int>& v) const {
      size_t h = 1469598103934665603ull;
      for (int x : v) h = (h ^ size_t(uint32_t(x))) * 1099511628211ull;
      return h;
    }
  };

  template <typename Map, typename Key>
  int intern(Map& unique, Key&& key, nd&& n) {
    nodes_.push_back(std::move(n));
    int id = int(nodes_.size()) - 1;
    unique.emplace(std::forward<Key>(key), id);
    if (nodes_.size() > size_t{16} << 20)
      throw std::runtime_error("oracle arena exceeded its size allowance");
    return id;
  }

  int assign_rec(int id, uint32_t bit, bool value, std::vector<int>& memo) {
    if (!(nodes_[id].mask & bit)) return id;
    if (memo[id] >= 0) return memo[id];
    const nd n = nodes_[id];  // copy: recursion below appends to nodes_
    int res;
    if (n.op == prop_op::lit) {
      res = value == n.pol ? 1 : 0;
    } else if (n.op == prop_op::not_) {
      res = lnot(assign_rec(n.kids[0], bit, value, memo));
    } else {
      std::vector<int> kids;
      kids.reserve(n.kids.size());
      for (int k : n.kids) kids.push_back(assign_rec(k, bit, value, memo));
      res = gate(n.op == prop_op::and_, std::move(kids));
    }
    memo[id] = res;
    return res;
  }

  int dag_rec(int id, int n_outer, compact_dag& out, std::unordered_map<int, int>& memo) const {
    auto it = memo.find(id);
    if (it != memo.end()) return it->second;
    const nd& n = nodes_[id];
    compact_dag::nd c;
    c.op = n.op;
    if (n.op == prop_op::lit) {
      if (n.var >= n_outer) throw std::logic_error("inner variable survived elimination");
      c.pol = n.pol;
      c.bit = n.var;
    } else {
      for (int k : n.kids) c.kids.push_back(dag_rec(k, n_outer, out, memo));
    }
    out.nodes.push_back(std::move(c));
    int idx = int(out.nodes.size()) - 1;
    memo.emplace(id, idx);
    return idx;
  }

  std::vector<nd> nodes_;
  std::unordered_map<uint64_t, int> lit_unique_;
  std::unordered_map<int, int> not_unique_;
  std::unordered_map<std::vector<int>, int, vec_hash> and_unique_, or_unique_;
};

// The quantified truth of the assembled matrix as a function of block 0,
// computed by brute-force resolution of the inner blocks. This is the bulk
// oracle for the encoder: evaluate(word) must equal the semantic evaluation
// of the model the word encodes.
struct encoder_oracle {
  compact_dag dag;

  encoder_oracle(const formula& f, int m, int k) {
    prop_pool pool;
    node_id matrix = assemble(pool, f, m, k);
    auto blocks = build_prefix(f, m, k);

    std::unordered_map<prop_var, std::pair<int, uint32_t>> ids;
    int next = 0;
    for (const auto& v : blocks[0].vars) ids[v] = {next++, 0};
    const int n_outer = next;
    std::vector<std::pair<quantifier, uint32_t>> inner;
    for (size_t b = 1; b < blocks.size(); ++b)
      for (const auto& v : blocks[b].vars) {
        if (inner.size() >= 32) throw std::logic_error("too many inner variables for the oracle");
        uint32_t bit = uint32_t{1} << inner.size();
        ids[v] = {next++, bit};
        inner.emplace_back(blocks[b].q, bit);
      }

    qe_arena arena;
    std::unordered_map<node_id, int> memo;
    int root = arena.import(pool, matrix,
                            [&](const prop_var& v) { return ids.at(v); }, memo);
    for (auto it = inner.rbegin(); it != inner.rend(); ++it) {
      int f0 = arena.assign(root, it->second, false);
      int f1 = arena.assign(root, it->second, true);
      root = arena.gate(it->first == quantifier::forall, {f0, f1});
    }
    dag = arena.to_dag(root, n_outer);
  }

  bool evaluate(uint64_t bits) const { return dag.eval(bits); }
};

// Bit layout shared by the packed-assignment tests: AP bits first in the
// canonical block-0 order, loop-selector bits after.
inline std::unordered_map<prop_var, int> block0_bits(int m, int k,
                                                     const std::vector<std::string>& aps) {
  std::unordered_map<prop_var, int> bit_of;
  int b = 0;
  for (const auto& v : outer_vars(m, k, aps)) bit_of[v] = b++;
  return bit_of;
}

// The model encoded by the AP bits of `bits` for a fixed shape; the loop
// selector is implied by the shape, not read from the word.
inline model model_from_bits(uint64_t bits, int m, int stem, int loop,
                             const std::vector<std::string>& aps) {
  int k = stem + loop;
  model md;
  int b = 0;
  for (int t = 0; t < m; ++t) {
    lasso_trace tr;
    tr.stem.resize(stem);
    tr.loop.resize(loop);
    for (const auto& ap : aps)
      for (int j = 0; j < k; ++j, ++b)
        if (bits >> b & 1) (j < stem ? tr.stem[j] : tr.loop[j - stem]).insert(ap);
    md.traces.push_back(std::move(tr));
  }
  return md;
}

inline prop_assignment assignment_from_bits(uint64_t bits, int m, int k,
                                            const std::vector<std::string>& aps) {
  prop_assignment asg;
  int b = 0;
  for (const auto& v : outer_vars(m, k, aps)) asg[v] = (bits >> b++ & 1) != 0;
  return asg;
}

}  // namespace hqtest
