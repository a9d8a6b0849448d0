#pragma once

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyperqsat {

// One position of a trace: the set of atomic propositions that hold there.
using letter = std::set<std::string>;

// Finite representation of the ultimately periodic trace stem . loop^omega.
struct lasso_trace {
  std::vector<letter> stem;
  std::vector<letter> loop;  // never empty

  // The letter at absolute position i of the infinite trace.
  const letter& at(size_t i) const {
    if (i < stem.size()) return stem[i];
    return loop[(i - stem.size()) % loop.size()];
  }

  friend bool operator==(const lasso_trace& a, const lasso_trace& b) {
    return a.stem == b.stem && a.loop == b.loop;
  }
};

// A candidate witness set: non-empty, all traces with identical stem and
// loop lengths (any finite set of lassos can be normalized to this form).
struct model {
  std::vector<lasso_trace> traces;

  size_t stem_len() const { return traces.front().stem.size(); }
  size_t loop_len() const { return traces.front().loop.size(); }
};

inline void validate(const model& m) {
  if (m.traces.empty()) throw std::invalid_argument("model has no traces");
  size_t p = m.traces.front().stem.size();
  size_t q = m.traces.front().loop.size();
  if (q == 0) throw std::invalid_argument("lasso loop is empty");
  for (const auto& t : m.traces)
    if (t.stem.size() != p || t.loop.size() != q)
      throw std::invalid_argument("model traces have mismatched stem/loop lengths");
}

// Drops duplicate traces, keeping first occurrences in order.
inline model dedup(const model& m) {
  model out;
  for (const auto& t : m.traces)
    if (std::find(out.traces.begin(), out.traces.end(), t) == out.traces.end())
      out.traces.push_back(t);
  return out;
}

inline std::string format_letter(const letter& l) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& ap : l) {
    if (!first) os << ' ';
    os << ap;
    first = false;
  }
  os << '}';
  return os.str();
}

// One line per trace: "trace <i>: <stem letters> | <loop letters>".
inline std::string format_model(const model& m) {
  std::ostringstream os;
  for (size_t i = 0; i < m.traces.size(); ++i) {
    os << "trace " << i << ':';
    for (const auto& l : m.traces[i].stem) os << ' ' << format_letter(l);
    os << " |";
    for (const auto& l : m.traces[i].loop) os << ' ' << format_letter(l);
    os << '\n';
  }
  return os.str();
}

}  // namespace hyperqsat
