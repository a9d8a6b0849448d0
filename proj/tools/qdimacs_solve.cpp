// Small complete QBF solver over QDIMACS, used as the default external
// backend in tests. Branches strictly in prefix order with QBF-sound unit
// propagation; prints a "V" certificate for the leading existential
// variables on sat. Exit codes: 10 sat, 20 unsat, 1 usage/parse error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <vector>

#include "hyperqsat/qdimacs.hpp"

namespace {

using hyperqsat::qdimacs_file;
using hyperqsat::quantifier;

class qbf_search {
 public:
  explicit qbf_search(const qdimacs_file& f)
      : n_(f.nvars), val_(f.nvars + 1, -1), is_forall_(f.nvars + 1, 0), clauses_(f.clauses) {
    std::vector<char> quantified(n_ + 1, 0);
    for (const auto& [q, vars] : f.blocks)
      for (int v : vars) quantified[v] = 1;
    // free variables are outermost existentials by convention
    for (int v = 1; v <= n_; ++v)
      if (!quantified[v]) order_.push_back(v);
    for (const auto& [q, vars] : f.blocks)
      for (int v : vars) {
        order_.push_back(v);
        if (q == quantifier::forall) is_forall_[v] = 1;
      }
    for (int v : order_) {
      if (is_forall_[v]) break;
      cert_vars_.push_back(v);
    }
  }

  bool solve() { return rec(); }

  void print_cert(std::ostream& os) const {
    os << "V";
    for (int v : cert_vars_) os << ' ' << (val_[v] == 1 ? v : -v);
    os << " 0" << std::endl;
  }

 private:
  int lit_val(int lit) const {
    int8_t v = val_[std::abs(lit)];
    if (v < 0) return -1;
    return lit > 0 ? v : 1 - v;
  }

  void assign(int var, bool value) {
    val_[var] = value ? 1 : 0;
    trail_.push_back(var);
  }

  void undo_to(size_t mark) {
    while (trail_.size() > mark) {
      val_[trail_.back()] = -1;
      trail_.pop_back();
    }
  }

  // -1: matrix false in this context; +1: matrix true under any completion;
  // 0: undecided. Unit existential literals are forced; a unit universal
  // literal falsifies the subtree (the adversary picks the other value).
  int propagate() {
    bool changed = true;
    while (changed) {
      changed = false;
      bool all_sat = true;
      for (const auto& c : clauses_) {
        int unassigned = 0, last = 0;
        bool sat = false;
        for (int l : c) {
          int v = lit_val(l);
          if (v == 1) {
            sat = true;
            break;
          }
          if (v < 0) {
            ++unassigned;
            last = l;
          }
        }
        if (sat) continue;
        if (unassigned == 0) return -1;
        all_sat = false;
        if (unassigned == 1) {
          if (is_forall_[std::abs(last)]) return -1;
          assign(std::abs(last), last > 0);
          changed = true;
        }
      }
      if (all_sat) return 1;
    }
    return 0;
  }

  // Success paths keep their assignments on the trail so the certificate can
  // be read off at the top; failure paths restore their mark.
  bool rec() {
    size_t mark = trail_.size();
    int st = propagate();
    if (st > 0) return true;
    if (st < 0) {
      undo_to(mark);
      return false;
    }
    int v = 0;
    for (int u : order_)
      if (val_[u] < 0) {
        v = u;
        break;
      }
    size_t after_prop = trail_.size();
    if (!is_forall_[v]) {
      assign(v, false);
      if (rec()) return true;
      undo_to(after_prop);
      assign(v, true);
      if (rec()) return true;
      undo_to(mark);
      return false;
    }
    assign(v, false);
    if (!rec()) {
      undo_to(mark);
      return false;
    }
    undo_to(after_prop);
    assign(v, true);
    if (!rec()) {
      undo_to(mark);
      return false;
    }
    return true;
  }

  int n_;
  std::vector<int8_t> val_;
  std::vector<char> is_forall_;
  std::vector<std::vector<int>> clauses_;
  std::vector<int> order_;
  std::vector<int> cert_vars_;
  std::vector<int> trail_;
};

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: qdimacs_solve FILE" << std::endl;
    return 1;
  }
  std::ifstream in(argv[1]);
  if (!in) {
    std::cerr << "cannot open " << argv[1] << std::endl;
    return 1;
  }
  qdimacs_file f;
  try {
    f = hyperqsat::parse_qdimacs(in);
  } catch (const std::exception& e) {
    std::cerr << e.what() << std::endl;
    return 1;
  }
  qbf_search s(f);
  if (s.solve()) {
    s.print_cert(std::cout);
    return 10;
  }
  return 20;
}
