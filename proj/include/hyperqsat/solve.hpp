#pragma once

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperqsat/dpll.hpp"
#include "hyperqsat/qbf.hpp"
#include "hyperqsat/trace.hpp"

namespace hyperqsat {

struct solve_outcome {
  enum class verdict : uint8_t { sat, unsat, unknown };
  verdict v = verdict::unknown;
  prop_assignment outer;  // total over block 0 when sat
  std::string reason;     // set when unknown

  static solve_outcome sat(prop_assignment a) { return {verdict::sat, std::move(a), {}}; }
  static solve_outcome unsat() { return {verdict::unsat, {}, {}}; }
  static solve_outcome unknown(std::string why) { return {verdict::unknown, {}, std::move(why)}; }
};

enum class backend_kind : uint8_t { builtin, external, auto_pick };

struct backend_config {
  backend_kind kind = backend_kind::auto_pick;
  std::string solver_cmd;  // command template containing "{file}"
  double time_limit_s = 120.0;
  bool strict_certificate = false;
};

// Semantic expansion of the trace quantifiers over the m candidates: each
// forall becomes a conjunction and each exists a disjunction of the body
// with pi := t_i substituted; the linking premises hold by construction and
// are dropped. The result mentions only candidate-trace and loop variables.
inline node_id expand_to_sat(prop_pool& pool, const formula& f, int m, int k,
                             long long cap = 1'000'000) {
  if (m < 1 || k < 1) throw std::invalid_argument("m and k must be at least 1");
  std::vector<std::pair<quantifier, std::string>> qs;
  for (const auto& g : f.prefix)
    for (const auto& tv : g.vars) qs.emplace_back(g.quant, tv);
  long long count = 1;
  for (size_t i = 0; i < qs.size(); ++i) {
    if (count > cap / m) {
      std::ostringstream os;
      os << "expansion cap exceeded: " << m << "^" << qs.size() << " > " << cap;
      throw std::runtime_error(os.str());
    }
    count *= m;
  }
  node_id body = unroll_body(pool, nnf(f.body), k);
  std::unordered_map<std::string, int> inst;
  std::function<node_id(size_t)> rec = [&](size_t d) -> node_id {
    if (d == qs.size()) {
      return rebuild_literals(pool, body, [&](const prop_var& v, bool pol) {
        if (v.k == prop_var::kind::ap_step && v.owner < 0)
          return pool.lit(prop_var::step_of_trace(inst.at(v.var), v.ap, v.idx), pol);
        return pool.lit(v, pol);
      });
    }
    std::vector<node_id> parts;
    parts.reserve(m);
    for (int t = 0; t < m; ++t) {
      inst[qs[d].second] = t;
      parts.push_back(rec(d + 1));
    }
    return qs[d].first == quantifier::forall ? pool.land(std::move(parts))
                                             : pool.lor(std::move(parts));
  };
  return pool.land(loop_constraint(pool, k), rec(0));
}

// CNF instance for a propositional (block-0-only) formula: a single
// existential block followed by the Aux block.
inline qbf_instance propositional_cnf(const prop_pool& pool, node_id root, int m, int k,
                                      std::vector<std::string> aps) {
  std::vector<quant_block> blocks{{quantifier::exists, outer_vars(m, k, aps)}};
  return to_cnf(pool, root, std::move(blocks), m, k, std::move(aps));
}

// Complete SAT search over a propositional instance; the model reported is
// the canonical (false-first, ascending id) one.
inline solve_outcome solve_builtin(const qbf_instance& inst,
                                   std::chrono::steady_clock::time_point deadline) {
  dpll_solver s(static_cast<int>(inst.id_to_var.size()), inst.clauses);
  sat_result r = s.solve(deadline);
  switch (r.v) {
    case sat_result::verdict::unsat: return solve_outcome::unsat();
    case sat_result::verdict::unknown: return solve_outcome::unknown(r.reason);
    case sat_result::verdict::sat: break;
  }
  prop_assignment outer;
  for (size_t i = 0; i < inst.outer_count; ++i)
    outer[inst.id_to_var[i]] = r.values[i + 1] != 0;
  return solve_outcome::sat(std::move(outer));
}

namespace detail {

inline std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
  return s;
}

struct process_result {
  bool spawned = false;
  bool timed_out = false;
  int exit_code = -1;
  std::string out;
  std::string error;
};

// Runs a shell command with its stdout captured, killing the whole process
// group at the deadline.
inline process_result run_process(const std::string& cmd,
                                  std::chrono::steady_clock::time_point deadline) {
  process_result pr;
  int fds[2];
  if (pipe(fds) != 0) {
    pr.error = "pipe failed";
    return pr;
  }
  pid_t pid = fork();
  if (pid < 0) {
    close(fds[0]);
    close(fds[1]);
    pr.error = "fork failed";
    return pr;
  }
  if (pid == 0) {
    setpgid(0, 0);
    dup2(fds[1], STDOUT_FILENO);
    int devnull = open("/dev/null", O_WRONLY);
    if (devnull >= 0) dup2(devnull, STDERR_FILENO);
    close(fds[0]);
    close(fds[1]);
    execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  pr.spawned = true;
  close(fds[1]);
  auto time_left = [&]() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               deadline - std::chrono::steady_clock::now())
        .count();
  };
  char buf[4096];
  bool open_stream = true;
  while (open_stream) {
    long long left = time_left();
    if (left <= 0) {
      pr.timed_out = true;
      break;
    }
    pollfd pfd{fds[0], POLLIN, 0};
    int pr_ = poll(&pfd, 1, static_cast<int>(std::min<long long>(left, 200)));
    if (pr_ < 0) break;
    if (pr_ == 0) continue;
    ssize_t n = read(fds[0], buf, sizeof buf);
    if (n <= 0) open_stream = false;
    else pr.out.append(buf, static_cast<size_t>(n));
  }
  close(fds[0]);
  if (pr.timed_out) {
    kill(-pid, SIGKILL);
    kill(pid, SIGKILL);
    waitpid(pid, nullptr, 0);
    return pr;
  }
  int status = 0;
  while (true) {
    pid_t w = waitpid(pid, &status, WNOHANG);
    if (w == pid) break;
    if (w < 0) {
      pr.error = "waitpid failed";
      return pr;
    }
    if (time_left() <= 0) {
      pr.timed_out = true;
      kill(-pid, SIGKILL);
      kill(pid, SIGKILL);
      waitpid(pid, nullptr, 0);
      return pr;
    }
    usleep(2000);
  }
  if (WIFEXITED(status)) pr.exit_code = WEXITSTATUS(status);
  return pr;
}

// Certificate lines: "V <lit> <lit> ... 0", possibly spanning several lines.
// Returns signed ids in order of appearance, without the terminating 0.
inline std::vector<int> parse_certificate(const std::string& out) {
  std::vector<int> lits;
  std::istringstream lines(out);
  std::string line;
  bool done = false;
  while (!done && std::getline(lines, line)) {
    if (line.size() < 2 || line[0] != 'V' || (line[1] != ' ' && line[1] != '\t')) continue;
    std::istringstream toks(line.substr(1));
    int lit;
    while (toks >> lit) {
      if (lit == 0) {
        done = true;
        break;
      }
      lits.push_back(lit);
    }
  }
  return lits;
}

inline std::filesystem::path fresh_temp_path() {
  static std::atomic<uint64_t> counter{0};
  auto n = counter.fetch_add(1);
  std::ostringstream name;
  name << "hyperqsat-" << getpid() << "-" << n << ".qdimacs";
  return std::filesystem::temp_directory_path() / name.str();
}

}  // namespace detail

// Writes the instance as QDIMACS, runs the configured command, and maps exit
// status 10/20 to sat/unsat. On sat the "V"-line certificate is read for the
// block-0 ids; ids absent from it default to false.
inline solve_outcome solve_external(const qbf_instance& inst, const backend_config& cfg,
                                    std::chrono::steady_clock::time_point deadline) {
  if (cfg.solver_cmd.find("{file}") == std::string::npos)
    return solve_outcome::unknown("solver command template lacks {file}");
  auto path = detail::fresh_temp_path();
  {
    std::ofstream out(path);
    if (!out) return solve_outcome::unknown("cannot write " + path.string());
    out << emit_qdimacs(inst);
  }
  std::string cmd = detail::replace_all(cfg.solver_cmd, "{file}", path.string());
  auto pr = detail::run_process(cmd, deadline);
  std::error_code ec;
  std::filesystem::remove(path, ec);
  if (!pr.spawned || !pr.error.empty())
    return solve_outcome::unknown("spawn failure: " + (pr.error.empty() ? cmd : pr.error));
  if (pr.timed_out) return solve_outcome::unknown("solver timeout");
  if (pr.exit_code == 20) return solve_outcome::unsat();
  if (pr.exit_code != 10)
    return solve_outcome::unknown("solver error/timeout (exit code " +
                                  std::to_string(pr.exit_code) + ")");
  auto lits = detail::parse_certificate(pr.out);
  prop_assignment outer;
  const auto& block0 = inst.outer();
  for (const auto& v : block0) outer[v] = false;
  std::vector<char> seen(inst.outer_count + 1, 0);
  for (int lit : lits) {
    int id = std::abs(lit);
    if (id < 1 || static_cast<size_t>(id) > inst.outer_count) continue;
    outer[inst.id_to_var[id - 1]] = lit > 0;
    seen[id] = 1;
  }
  if (cfg.strict_certificate)
    for (size_t id = 1; id <= inst.outer_count; ++id)
      if (!seen[id])
        return solve_outcome::unknown("certificate missing block-0 variable " +
                                      inst.id_to_var[id - 1].name());
  return solve_outcome::sat(std::move(outer));
}

// Reads the witnessing trace set off a block-0 assignment: loop position
// from the one-hot selector, then one lasso per candidate trace.
inline model decode_model(const prop_assignment& outer, int m, int k,
                          const std::vector<std::string>& aps) {
  auto get = [&](const prop_var& v) {
    auto it = outer.find(v);
    if (it == outer.end())
      throw std::invalid_argument("incomplete outer assignment: " + v.name());
    return it->second;
  };
  int l = -1;
  for (int j = 0; j < k; ++j) {
    if (!get(prop_var::loop(j))) continue;
    if (l >= 0) throw std::runtime_error("multiple loops selected");
    l = j;
  }
  if (l < 0) throw std::runtime_error("no loop selected");
  model md;
  for (int t = 0; t < m; ++t) {
    lasso_trace tr;
    for (int j = 0; j < k; ++j) {
      letter lt;
      for (const auto& ap : aps)
        if (get(prop_var::step_of_trace(t, ap, j))) lt.insert(ap);
      (j < l ? tr.stem : tr.loop).push_back(std::move(lt));
    }
    md.traces.push_back(std::move(tr));
  }
  return md;
}

// Inverse of decode_model, for fixing a candidate model in an encoding or
// for round-trip checks. All traces must share stem and loop lengths.
inline prop_assignment encode_model(const model& md, const std::vector<std::string>& aps) {
  validate(md);
  int k = static_cast<int>(md.stem_len() + md.loop_len());
  prop_assignment outer;
  for (int j = 0; j < k; ++j)
    outer[prop_var::loop(j)] = j == static_cast<int>(md.stem_len());
  for (size_t t = 0; t < md.traces.size(); ++t)
    for (int j = 0; j < k; ++j) {
      const letter& lt = md.traces[t].at(static_cast<size_t>(j));
      for (const auto& ap : aps)
        outer[prop_var::step_of_trace(static_cast<int>(t), ap, j)] = lt.count(ap) > 0;
    }
  return outer;
}

}  // namespace hyperqsat
