#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "plap/assembly.hpp"
#include "plap/mesh.hpp"
#include "plap/optimizer.hpp"
#include "plap/problem.hpp"

namespace plap {

/// One benchmark run: a list of problem sizes (interior-node counts in 1D,
/// refinement levels in 2D), solved by every selected option on the identical
/// discrete problem.
struct BenchConfig {
  int dim = 2;
  DomainKind domain = DomainKind::LShape;
  std::vector<int> sizes;
  double p = 3.0;
  double f_const = -10.0;
  double g_const = 0.0;
  std::vector<SolverKind> solvers = {SolverKind::TrExactGradSparse, SolverKind::TrFdGradSparse,
                                     SolverKind::TrFdGradDense, SolverKind::QuasiNewtonBfgs};
  double grad_tol = 1e-6;
  int max_iters = 0;
  double time_budget_sec = 300.0;       // per cell; exceeded cells report "-"
  double dense_mem_limit_gb = 2.0;      // dense-Hessian options are skipped above this
  std::uint64_t seed = 0;               // recorded for reproducibility; solvers are deterministic
};

struct BenchCell {
  std::string status = "skipped";  // ok | out-of-time | out-of-memory | no-convergence
  double time_sec = 0.0;
  int iters = 0;
  double j_final = std::nan("");

  bool ok() const { return status == "ok"; }
};

struct BenchRow {
  int size = 0;   // n (1D) or level (2D)
  int n_dof = 0;  // free dofs; the 2D tables label rows by this
  std::vector<BenchCell> cells;
};

namespace detail {

template <class P>
void run_bench_row(const P& prob, const SparsityPattern& pattern, const BenchConfig& cfg,
                   BenchRow& row) {
  for (SolverKind kind : cfg.solvers) {
    BenchCell cell;
    const bool dense = (kind == SolverKind::TrFdGradDense || kind == SolverKind::QuasiNewtonBfgs);
    const double dense_gb = static_cast<double>(prob.num_free()) * prob.num_free() * 8.0 / 1e9;
    if (dense && dense_gb > cfg.dense_mem_limit_gb) {
      cell.status = "out-of-memory";
      row.cells.push_back(cell);
      continue;
    }
    SolverOptions opts;
    opts.grad_tol = cfg.grad_tol;
    opts.max_iters = cfg.max_iters;
    opts.time_budget_sec = cfg.time_budget_sec;
    SolveReport rep = solve(prob, &pattern, kind, opts);
    cell.time_sec = rep.wall_time_sec;
    cell.iters = rep.iterations;
    cell.j_final = rep.j_final;
    if (rep.termination == Termination::GradTol)
      cell.status = "ok";
    else if (cfg.time_budget_sec > 0.0 && rep.wall_time_sec > cfg.time_budget_sec)
      cell.status = "out-of-time";
    else
      cell.status = "no-convergence";
    row.cells.push_back(cell);
  }
}

}  // namespace detail

inline std::vector<BenchRow> run_bench(const BenchConfig& cfg) {
  std::vector<BenchRow> rows;
  for (int size : cfg.sizes) {
    BenchRow row;
    row.size = size;
    if (cfg.dim == 1) {
      Mesh1D mesh = make_interval_mesh(-1.0, 1.0, size);
      Problem1D prob(mesh, constant_problem(cfg.p, mesh, cfg.f_const, cfg.g_const));
      SparsityPattern pattern = hessian_sparsity_1d(mesh);
      row.n_dof = prob.num_free();
      detail::run_bench_row(prob, pattern, cfg, row);
    } else {
      TriMesh mesh = make_structured_trimesh(cfg.domain, size);
      SparsityPattern pattern = hessian_sparsity_2d(mesh);
      ProblemSpec spec = constant_problem(cfg.p, mesh, cfg.f_const, cfg.g_const);
      Problem2D prob(std::move(mesh), std::move(spec));
      row.n_dof = prob.num_free();
      detail::run_bench_row(prob, pattern, cfg, row);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// Report writers: rows are sizes, each option contributes a (time, iters)
// column pair; cells that ran out of time or memory (or failed to converge)
// print "-". The CSV adds J and status columns.

inline void write_bench_markdown(std::ostream& os, const BenchConfig& cfg,
                                 const std::vector<BenchRow>& rows) {
  os << "| " << (cfg.dim == 1 ? "n" : "n_dof") << " |";
  for (SolverKind k : cfg.solvers) os << " " << solver_name(k) << " time |" << " " << solver_name(k) << " iters |";
  os << "\n|---:|";
  for (std::size_t i = 0; i < cfg.solvers.size(); ++i) os << "---:|---:|";
  os << "\n";
  char buf[64];
  for (const auto& row : rows) {
    os << "| " << (cfg.dim == 1 ? row.size : row.n_dof) << " |";
    for (const auto& cell : row.cells) {
      if (cell.ok()) {
        std::snprintf(buf, sizeof(buf), "%.2f", cell.time_sec);
        os << " " << buf << " | " << cell.iters << " |";
      } else {
        os << " - | - |";
      }
    }
    os << "\n";
  }
}

inline void write_bench_csv(std::ostream& os, const BenchConfig& cfg,
                            const std::vector<BenchRow>& rows) {
  os << "size,n_dof";
  for (SolverKind k : cfg.solvers) {
    const char* name = solver_name(k);
    os << "," << name << "_time," << name << "_iters," << name << "_j," << name << "_status";
  }
  os << "\n";
  char buf[64];
  for (const auto& row : rows) {
    os << row.size << "," << row.n_dof;
    for (const auto& cell : row.cells) {
      if (cell.ok()) {
        std::snprintf(buf, sizeof(buf), "%.6g,%d,%.10g", cell.time_sec, cell.iters, cell.j_final);
        os << "," << buf << "," << cell.status;
      } else {
        os << ",-,-,-," << cell.status;
      }
    }
    os << "\n";
  }
}

}  // namespace plap
