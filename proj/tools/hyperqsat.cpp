// hyperqsat: HyperLTL satisfiability checking and model generation.
//
// Subcommands: sat, implies, equiv, random, bench. Exit codes: 10 when a
// witness/countermodel was found, 30 for unknown (budget exhausted), 1 for
// usage or parse errors, 0 for verdict-free commands (random, bench).

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hyperqsat/hyperqsat.hpp"

namespace {

using namespace hyperqsat;

constexpr int exit_witness = 10;
constexpr int exit_unknown = 30;
constexpr int exit_usage = 1;

struct common_opts {
  int max_m = 8;
  int max_k = 8;
  double timeout = 120.0;
  std::string backend = "auto";
  std::string solver_cmd;
  std::string emit_qdimacs_path;
  std::string model_out_path;
};

void add_common(CLI::App* cmd, common_opts& o) {
  cmd->add_option("--max-m", o.max_m, "largest trace-set size tried")->check(CLI::PositiveNumber);
  cmd->add_option("--max-k", o.max_k, "largest unrolling bound tried")->check(CLI::PositiveNumber);
  cmd->add_option("--timeout", o.timeout, "wall-clock budget in seconds")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--backend", o.backend, "builtin, extern, or auto")
      ->check(CLI::IsMember({"builtin", "extern", "auto"}));
  cmd->add_option("--solver-cmd", o.solver_cmd,
                  "external QBF solver command template with {file}");
  cmd->add_option("--emit-qdimacs", o.emit_qdimacs_path, "dump the last instance to PATH");
  cmd->add_option("--model-out", o.model_out_path, "write the model to PATH");
}

budget make_budget(const common_opts& o) {
  budget b;
  b.max_m = o.max_m;
  b.max_k = o.max_k;
  b.wall_clock_s = o.timeout;
  b.backend.time_limit_s = o.timeout;
  b.backend.solver_cmd = o.solver_cmd;
  if (b.backend.solver_cmd.empty())
    if (const char* env = std::getenv("HYPERQSAT_SOLVER")) b.backend.solver_cmd = env;
  if (o.backend == "builtin") b.backend.kind = backend_kind::builtin;
  else if (o.backend == "extern") b.backend.kind = backend_kind::external;
  else b.backend.kind = backend_kind::auto_pick;
  b.capture_qdimacs = !o.emit_qdimacs_path.empty();
  return b;
}

formula load_formula(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse(buf.str());
  } catch (const parse_error& e) {
    throw std::runtime_error(path + ":" + e.what());
  }
}

void write_side_outputs(const common_opts& o, const check_result& r) {
  if (!o.emit_qdimacs_path.empty() && !r.last_qdimacs.empty())
    write_file_atomic(o.emit_qdimacs_path, r.last_qdimacs);
  if (!o.model_out_path.empty() && r.sat) write_file_atomic(o.model_out_path, format_model(r.mdl));
}

std::string unknown_line(const common_opts& o) {
  std::ostringstream os;
  os << "unknown (budget exhausted: m<=" << o.max_m << ", k<=" << o.max_k << ")";
  return os.str();
}

int run_sat(const std::string& file, const common_opts& o) {
  formula f = load_formula(file);
  check_result r = check_sat(f, make_budget(o));
  write_side_outputs(o, r);
  if (!r.sat) {
    std::cout << unknown_line(o) << "\n";
    return exit_unknown;
  }
  std::cout << "sat\n" << format_model(r.mdl);
  return exit_witness;
}

int run_implies(const std::string& file1, const std::string& file2, const common_opts& o) {
  formula f = load_formula(file1);
  formula g = load_formula(file2);
  check_result r = find_nonimplication(f, g, make_budget(o));
  write_side_outputs(o, r);
  if (!r.sat) {
    std::cout << unknown_line(o) << "\n";
    return exit_unknown;
  }
  std::cout << "non-implication witnessed\n" << format_model(r.mdl);
  return exit_witness;
}

int run_equiv(const std::string& file1, const std::string& file2, const common_opts& o) {
  formula f = load_formula(file1);
  formula g = load_formula(file2);
  auto [fg, gf] = check_equiv(f, g, make_budget(o));
  auto report = [&](const std::string& a, const std::string& b, const check_result& r) {
    std::cout << a << " =/=> " << b << ": " << (r.sat ? "witnessed" : "unknown") << "\n";
    if (r.sat) std::cout << format_model(r.mdl);
  };
  report(file1, file2, fg);
  report(file2, file1, gf);
  bool witnessed = fg.sat || gf.sat;
  std::cout << (witnessed ? "not equivalent" : "no verdict") << "\n";
  return witnessed ? exit_witness : exit_unknown;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HyperLTL satisfiability checking and model generation"};
  app.require_subcommand(1);

  common_opts sat_o, imp_o, eq_o, bench_o;
  std::string sat_file, imp_file1, imp_file2, eq_file1, eq_file2;

  auto* sat_cmd = app.add_subcommand("sat", "check satisfiability of a formula file");
  sat_cmd->add_option("file", sat_file, "formula file")->required();
  add_common(sat_cmd, sat_o);

  auto* imp_cmd =
      app.add_subcommand("implies", "search a countermodel to 'file1 implies file2'");
  imp_cmd->add_option("file1", imp_file1)->required();
  imp_cmd->add_option("file2", imp_file2)->required();
  add_common(imp_cmd, imp_o);

  auto* eq_cmd = app.add_subcommand("equiv", "check both implication directions");
  eq_cmd->add_option("file1", eq_file1)->required();
  eq_cmd->add_option("file2", eq_file2)->required();
  add_common(eq_cmd, eq_o);

  auto* rnd_cmd = app.add_subcommand("random", "generate random formulas");
  uint64_t rnd_seed = 1;
  int rnd_size = 20, rnd_aps = 2, rnd_alt = 0, rnd_count = 1;
  std::string rnd_start = "exists";
  rnd_cmd->add_option("--seed", rnd_seed, "base seed; instance i uses seed+i");
  rnd_cmd->add_option("--size", rnd_size)->check(CLI::PositiveNumber);
  rnd_cmd->add_option("--aps", rnd_aps)->check(CLI::PositiveNumber);
  rnd_cmd->add_option("--alternations", rnd_alt)->check(CLI::NonNegativeNumber);
  rnd_cmd->add_option("--start", rnd_start)->check(CLI::IsMember({"forall", "exists"}));
  rnd_cmd->add_option("--count", rnd_count)->check(CLI::PositiveNumber);

  auto* bench_cmd = app.add_subcommand("bench", "run a directory or random spec, write CSV");
  std::string bench_input, bench_csv_path = "bench.csv";
  bench_cmd->add_option("input", bench_input,
                        "directory of .hltl files, or random:k=v[,k=v...] "
                        "(seed,size,aps,alternations,start,count)")
      ->required();
  bench_cmd->add_option("--csv", bench_csv_path, "output CSV path");
  add_common(bench_cmd, bench_o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : exit_usage;
  }

  try {
    if (sat_cmd->parsed()) return run_sat(sat_file, sat_o);
    if (imp_cmd->parsed()) return run_implies(imp_file1, imp_file2, imp_o);
    if (eq_cmd->parsed()) return run_equiv(eq_file1, eq_file2, eq_o);

    if (rnd_cmd->parsed()) {
      for (int i = 0; i < rnd_count; ++i) {
        random_spec spec;
        spec.seed = rnd_seed + static_cast<uint64_t>(i);
        spec.size = rnd_size;
        spec.n_aps = rnd_aps;
        spec.alternations = rnd_alt;
        spec.start = rnd_start == "forall" ? quantifier::forall : quantifier::exists;
        std::cout << print(gen_random(spec)) << "\n";
      }
      return 0;
    }

    // bench
    std::vector<std::pair<std::string, std::string>> inputs;  // name, text or path
    std::vector<bench_record> recs;
    budget b = make_budget(bench_o);
    if (bench_input.rfind("random:", 0) == 0) {
      random_spec spec;
      int count = 10;
      std::stringstream ss(bench_input.substr(7));
      std::string kv;
      while (std::getline(ss, kv, ',')) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw std::runtime_error("bad random spec item: " + kv);
        std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
        if (key == "seed") spec.seed = std::stoull(val);
        else if (key == "size") spec.size = std::stoi(val);
        else if (key == "aps") spec.n_aps = std::stoi(val);
        else if (key == "alternations") spec.alternations = std::stoi(val);
        else if (key == "start")
          spec.start = val == "forall" ? quantifier::forall : quantifier::exists;
        else if (key == "count") count = std::stoi(val);
        else throw std::runtime_error("unknown random spec key: " + key);
      }
      uint64_t base = spec.seed;
      for (int i = 0; i < count; ++i) {
        spec.seed = base + static_cast<uint64_t>(i);
        recs.push_back(bench_one("random-" + std::to_string(spec.seed), gen_random(spec), b));
      }
    } else {
      std::vector<std::filesystem::path> files;
      for (const auto& entry : std::filesystem::directory_iterator(bench_input))
        if (entry.is_regular_file() && entry.path().extension() == ".hltl")
          files.push_back(entry.path());
      std::sort(files.begin(), files.end());
      for (const auto& p : files) {
        std::string name = p.stem().string();
        try {
          recs.push_back(bench_one(name, load_formula(p.string()), b));
        } catch (const std::exception&) {
          bench_record rec;
          rec.name = name;
          rec.verdict = "error";
          rec.backend = "none";
          recs.push_back(rec);
        }
      }
    }
    write_file_atomic(bench_csv_path, bench_csv(recs));
    std::cout << bench_summary(recs) << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  }
}
