#pragma once

// Convergence studies over a range of degrees, with CSV output.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "specgal/galerkin.hpp"
#include "specgal/problems.hpp"

namespace specgal {

struct StudyConfig {
  std::string problem;             // built-in name or problem-file path
  int degree_lo = 0;
  int degree_hi = 0;
  std::optional<int> quad_q;       // nullopt: default_quad_order
  std::string output;
  bool emit_condition = true;
};

struct StudyRow {
  int n = 0;
  int dimension = 0;
  int quad_q = 0;
  double max_error = 0.0;
  std::optional<double> condition;
  double assemble_seconds = 0.0;
  double solve_seconds = 0.0;
};

/// Worker cap from SPECGAL_THREADS, else the hardware concurrency.
inline unsigned worker_threads() {
  if (const char* env = std::getenv("SPECGAL_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Assembles, solves and measures one degree.
template <int D>
StudyRow solve_degree(const EllipticProblem<D>& problem, int n, std::optional<int> quad_q, bool emit_condition) {
  using clock = std::chrono::steady_clock;
  StudyRow row;
  row.n = n;
  row.quad_q = quad_q.value_or(default_quad_order(n, D));
  const auto t0 = clock::now();
  GalerkinSystem<D> sys = assemble(problem, n, row.quad_q);
  const auto t1 = clock::now();
  solve(sys);
  const auto t2 = clock::now();
  row.dimension = sys.dimension;
  row.max_error = max_grid_error(sys, problem);
  if (emit_condition) row.condition = condition_number(sys);
  row.assemble_seconds = std::chrono::duration<double>(t1 - t0).count();
  row.solve_seconds = std::chrono::duration<double>(t2 - t1).count();
  return row;
}

template <int D>
std::vector<StudyRow> run_study(const EllipticProblem<D>& problem, const StudyConfig& cfg) {
  if (cfg.degree_lo < 0 || cfg.degree_hi < cfg.degree_lo)
    throw std::invalid_argument("study: degree range must be nonempty and nonnegative");
  if (cfg.quad_q && *cfg.quad_q < 1) throw std::invalid_argument("study: quadrature order must be >= 1");
  const int count = cfg.degree_hi - cfg.degree_lo + 1;
  std::vector<StudyRow> rows(static_cast<std::size_t>(count));
  std::vector<std::string> errors(static_cast<std::size_t>(count));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      const int n = cfg.degree_lo + i;
      try {
        rows[static_cast<std::size_t>(i)] = solve_degree(problem, n, cfg.quad_q, cfg.emit_condition);
      } catch (const std::exception& e) {
        errors[static_cast<std::size_t>(i)] = "degree " + std::to_string(n) + ": " + e.what();
      }
    }
  };
  const unsigned nthreads = std::min<unsigned>(worker_threads(), static_cast<unsigned>(count));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (!e.empty()) throw std::runtime_error(e);
  return rows;
}

/// Runs a study for the problem named in the config, dispatching on dimension.
inline std::vector<StudyRow> run_study(const StudyConfig& cfg) {
  const ProblemSpec spec = resolve_problem(cfg.problem);
  if (spec.dim() == 2) return run_study(make_problem<2>(spec), cfg);
  return run_study(make_problem<3>(spec), cfg);
}

inline std::string format_sci3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2E", v);
  return buf;
}

/// Table CSV: errors with 3 significant digits, condition numbers with 4.
/// Deterministic for a fixed configuration.
inline void write_study_csv(std::ostream& out, const std::vector<StudyRow>& rows) {
  out << "n,N_n,q,max_error,condition_number\n";
  for (const auto& r : rows) {
    char cond[32] = "";
    if (r.condition) std::snprintf(cond, sizeof cond, "%.4g", *r.condition);
    out << r.n << ',' << r.dimension << ',' << r.quad_q << ',' << format_sci3(r.max_error) << ',' << cond << '\n';
  }
}

/// Companion file at full precision, including timings.
inline void write_study_raw_csv(std::ostream& out, const std::vector<StudyRow>& rows) {
  out << "n,N_n,q,max_error,condition_number,assemble_seconds,solve_seconds\n";
  char buf[64];
  for (const auto& r : rows) {
    out << r.n << ',' << r.dimension << ',' << r.quad_q << ',';
    std::snprintf(buf, sizeof buf, "%.17g", r.max_error);
    out << buf << ',';
    if (r.condition) {
      std::snprintf(buf, sizeof buf, "%.17g", *r.condition);
      out << buf;
    }
    std::snprintf(buf, sizeof buf, ",%.6f,%.6f", r.assemble_seconds, r.solve_seconds);
    out << buf << '\n';
  }
}

/// "out.csv" -> "out-raw.csv"; no extension -> "out-raw".
inline std::string raw_output_path(const std::string& path) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + "-raw";
  return path.substr(0, dot) + "-raw" + path.substr(dot);
}

}  // namespace specgal
