#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperqsat/engine.hpp"

namespace hyperqsat {

struct bench_record {
  std::string name;
  std::string verdict;  // sat | unknown | error
  int m = 0;
  int k = 0;
  long long time_ms = 0;
  std::string backend;
};

// One instance under the per-instance budget; exceptions (including parse
// problems surfaced by the caller) become verdict "error".
inline bench_record bench_one(const std::string& name, const formula& f, const budget& b) {
  bench_record rec;
  rec.name = name;
  auto t0 = std::chrono::steady_clock::now();
  try {
    check_result r = check_sat(f, b);
    rec.verdict = r.sat ? "sat" : "unknown";
    rec.m = r.m;
    rec.k = r.k;
    rec.backend = r.backend_used.empty() ? "none" : r.backend_used;
  } catch (const std::exception&) {
    rec.verdict = "error";
    rec.backend = "none";
  }
  rec.time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return rec;
}

inline std::string bench_csv(const std::vector<bench_record>& recs) {
  std::ostringstream os;
  os << "name,verdict,m,k,time_ms,backend\n";
  for (const auto& r : recs)
    os << r.name << ',' << r.verdict << ',' << r.m << ',' << r.k << ',' << r.time_ms << ','
       << r.backend << '\n';
  return os.str();
}

// solved count + average time over solved, Table-1 style observables
inline std::string bench_summary(const std::vector<bench_record>& recs) {
  size_t solved = 0;
  long long total_ms = 0;
  for (const auto& r : recs)
    if (r.verdict == "sat") {
      ++solved;
      total_ms += r.time_ms;
    }
  std::ostringstream os;
  os << "solved " << solved << "/" << recs.size();
  if (solved > 0) {
    os.setf(std::ios::fixed);
    os.precision(1);
    os << ", avg time " << static_cast<double>(total_ms) / static_cast<double>(solved) << " ms";
  }
  return os.str();
}

// write-then-rename so readers never observe a partial file
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace hyperqsat
