#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

namespace hyperqsat {

struct sat_result {
  enum class verdict : uint8_t { sat, unsat, unknown };
  verdict v = verdict::unknown;
  std::vector<char> values;  // 1-indexed, valid when sat
  std::string reason;        // set when unknown
};

// Plain DPLL over CNF: two watched literals, unit propagation, chronological
// backtracking, no learning. Decisions take variables in ascending id order
// and try false first, so runs are deterministic; ids are assigned so that
// block-0 variables come first, which makes the found model canonical.
class dpll_solver {
 public:
  dpll_solver(int nvars, const std::vector<std::vector<int>>& clauses)
      : nvars_(nvars), val_(nvars + 1, -1), watches_(2 * nvars + 2) {
    for (const auto& c : clauses) {
      if (c.empty()) {
        root_conflict_ = true;
        continue;
      }
      if (c.size() == 1) {
        initial_units_.push_back(c[0]);
        continue;
      }
      clauses_.push_back(c);
      size_t ci = clauses_.size() - 1;
      watches_[widx(c[0])].push_back(ci);
      watches_[widx(c[1])].push_back(ci);
    }
  }

  sat_result solve(std::chrono::steady_clock::time_point deadline) {
    sat_result res;
    if (root_conflict_) {
      res.v = sat_result::verdict::unsat;
      return res;
    }
    for (int u : initial_units_)
      if (!enqueue(u)) {
        res.v = sat_result::verdict::unsat;
        return res;
      }

    int scan_from = 1;
    while (true) {
      if (++steps_ % 1024 == 0 && std::chrono::steady_clock::now() >= deadline) {
        res.v = sat_result::verdict::unknown;
        res.reason = "time limit";
        return res;
      }
      if (!propagate()) {
        while (!decisions_.empty() && decisions_.back().flipped) {
          undo_to(decisions_.back().trail_size);
          decisions_.pop_back();
        }
        if (decisions_.empty()) {
          res.v = sat_result::verdict::unsat;
          return res;
        }
        auto& d = decisions_.back();
        undo_to(d.trail_size);
        d.flipped = true;
        scan_from = d.var + 1;
        enqueue(d.var);  // second branch: true
        continue;
      }
      while (scan_from <= nvars_ && val_[scan_from] >= 0) ++scan_from;
      if (scan_from > nvars_) {
        res.v = sat_result::verdict::sat;
        res.values.assign(nvars_ + 1, 0);
        for (int v = 1; v <= nvars_; ++v) res.values[v] = val_[v] == 1 ? 1 : 0;
        return res;
      }
      decisions_.push_back({scan_from, trail_.size(), false});
      enqueue(-scan_from);  // first branch: false
      ++scan_from;
    }
  }

 private:
  struct decision {
    int var;
    size_t trail_size;
    bool flipped;
  };

  static size_t widx(int lit) { return 2 * static_cast<size_t>(std::abs(lit)) + (lit < 0); }

  int lit_val(int lit) const {
    int8_t v = val_[std::abs(lit)];
    if (v < 0) return -1;
    return lit > 0 ? v : 1 - v;
  }

  bool enqueue(int lit) {
    int lv = lit_val(lit);
    if (lv == 0) return false;
    if (lv == 1) return true;
    val_[std::abs(lit)] = lit > 0 ? 1 : 0;
    trail_.push_back(lit);
    return true;
  }

  void undo_to(size_t mark) {
    while (trail_.size() > mark) {
      val_[std::abs(trail_.back())] = -1;
      trail_.pop_back();
    }
    qhead_ = mark;
  }

  bool propagate() {
    while (qhead_ < trail_.size()) {
      int lit = trail_[qhead_++];
      int falsified = -lit;
      auto& ws = watches_[widx(falsified)];
      size_t keep = 0;
      for (size_t i = 0; i < ws.size(); ++i) {
        size_t ci = ws[i];
        auto& c = clauses_[ci];
        if (c[0] == falsified) std::swap(c[0], c[1]);
        // c[1] == falsified now; c[0] is the other watch
        if (lit_val(c[0]) == 1) {
          ws[keep++] = ci;
          continue;
        }
        bool moved = false;
        for (size_t j = 2; j < c.size(); ++j) {
          if (lit_val(c[j]) != 0) {
            std::swap(c[1], c[j]);
            watches_[widx(c[1])].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[keep++] = ci;
        if (!enqueue(c[0])) {
          for (++i; i < ws.size(); ++i) ws[keep++] = ws[i];
          ws.resize(keep);
          return false;
        }
      }
      ws.resize(keep);
    }
    return true;
  }

  int nvars_;
  bool root_conflict_ = false;
  std::vector<int8_t> val_;
  std::vector<std::vector<size_t>> watches_;
  std::vector<std::vector<int>> clauses_;
  std::vector<int> initial_units_;
  std::vector<int> trail_;
  size_t qhead_ = 0;
  std::vector<decision> decisions_;
  uint64_t steps_ = 0;
};

}  // namespace hyperqsat
