// plap: p-Laplace energy minimization on interval and L-shape/square meshes.
//
//   plap solve  --dim 1 --n 999 --p 3 --f -10 --solver tr-exact
//   plap bench  --dim 2 --domain lshape --level 1,2,3,4 --solver all --out report
//   plap mesh   --dim 2 --domain lshape --level 0 --out mesh.txt --sparsity
//
// Exit codes: 0 success, 1 usage error, 2 non-convergence.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <plap/plap.hpp>

namespace {

struct Options {
  int dim = 2;
  std::string domain;  // defaults to lshape (2D) or interval (1D)
  std::vector<int> n;       // 1D interior-node counts
  std::vector<int> level;   // 2D refinement levels
  double p = 3.0;
  double f = -10.0;
  double g = 0.0;
  std::string f_file;
  std::vector<std::string> solver = {"tr-exact"};
  double tol = 1e-6;
  int max_iters = 0;
  double time_budget = 300.0;
  std::string out;
  std::string mesh_out;
  bool sparsity = false;
  std::string format = "md";
  std::uint64_t seed = 0;
};

void add_common_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--dim", o.dim, "Space dimension")->check(CLI::IsMember({1, 2}));
  cmd->add_option("--domain", o.domain, "Domain (interval, square, lshape)")
      ->check(CLI::IsMember({"interval", "square", "lshape"}));
  cmd->add_option("--n", o.n, "Interior node count(s), 1D")->delimiter(',');
  cmd->add_option("--level", o.level, "Refinement level(s), 2D")->delimiter(',');
  cmd->add_option("--p", o.p, "Power p > 1 of the p-Laplacian");
  cmd->add_option("--f", o.f, "Constant load f");
  cmd->add_option("--g", o.g, "Constant Dirichlet boundary value g");
  cmd->add_option("--f-file", o.f_file, "File with one nodal f value per node");
  cmd->add_option("--solver", o.solver, "Solver(s): tr-exact, tr-fd, tr-dense, qn, all")
      ->delimiter(',');
  cmd->add_option("--tol", o.tol, "Gradient infinity-norm stopping tolerance");
  cmd->add_option("--max-iters", o.max_iters, "Iteration cap (0 = automatic)");
  cmd->add_option("--time-budget", o.time_budget, "Seconds per solve (0 = unlimited)");
  cmd->add_option("--out", o.out, "Output path");
  cmd->add_option("--mesh-out", o.mesh_out, "Mesh file output path");
  cmd->add_flag("--sparsity", o.sparsity, "Also dump the Hessian sparsity pattern");
  cmd->add_option("--format", o.format, "Benchmark table format on stdout")
      ->check(CLI::IsMember({"csv", "md"}));
  cmd->add_option("--seed", o.seed, "Recorded in reports; solvers are deterministic");
}

plap::DomainKind parse_domain(const Options& o) {
  const std::string domain = o.domain.empty() ? (o.dim == 1 ? "interval" : "lshape") : o.domain;
  if (o.dim == 1) {
    if (domain != "interval")
      throw CLI::ValidationError("--domain", "1D problems run on the interval domain");
    return plap::DomainKind::Interval;
  }
  if (domain == "square") return plap::DomainKind::UnitSquare;
  if (domain == "lshape") return plap::DomainKind::LShape;
  throw CLI::ValidationError("--domain", "2D problems need square or lshape");
}

std::vector<plap::SolverKind> parse_solvers(const std::vector<std::string>& names) {
  std::vector<plap::SolverKind> kinds;
  for (const auto& name : names) {
    if (name == "all")
      return {plap::SolverKind::TrExactGradSparse, plap::SolverKind::TrFdGradSparse,
              plap::SolverKind::TrFdGradDense, plap::SolverKind::QuasiNewtonBfgs};
    if (name == "tr-exact")
      kinds.push_back(plap::SolverKind::TrExactGradSparse);
    else if (name == "tr-fd")
      kinds.push_back(plap::SolverKind::TrFdGradSparse);
    else if (name == "tr-dense")
      kinds.push_back(plap::SolverKind::TrFdGradDense);
    else if (name == "qn")
      kinds.push_back(plap::SolverKind::QuasiNewtonBfgs);
    else
      throw CLI::ValidationError("--solver", "unknown solver '" + name + "'");
  }
  return kinds;
}

std::vector<double> read_nodal_file(const std::string& path, int n_nodes) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open f file: " + path);
  std::vector<double> vals;
  double v = 0.0;
  while (in >> v) vals.push_back(v);
  if (static_cast<int>(vals.size()) != n_nodes)
    throw std::runtime_error("f file holds " + std::to_string(vals.size()) + " values, mesh has " +
                             std::to_string(n_nodes) + " nodes");
  return vals;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

template <class MeshT>
plap::ProblemSpec build_spec(const Options& o, const MeshT& mesh) {
  plap::ProblemSpec spec = plap::constant_problem(o.p, mesh, o.f, o.g);
  if (!o.f_file.empty()) spec.f_nodal = read_nodal_file(o.f_file, mesh.num_nodes());
  return spec;
}

int size_of(const Options& o) {
  if (o.dim == 1) return o.n.empty() ? 999 : o.n.front();
  return o.level.empty() ? 3 : o.level.front();
}

plap::SolverOptions solver_options(const Options& o) {
  plap::SolverOptions opts;
  opts.grad_tol = o.tol;
  opts.max_iters = o.max_iters;
  opts.time_budget_sec = o.time_budget;
  return opts;
}

void print_report(plap::SolverKind kind, const plap::SolveReport& rep) {
  std::printf("solver=%-8s  J_final = %.6f  iterations = %d  time = %.3f s  termination = %s\n",
              plap::solver_name(kind), rep.j_final, rep.iterations, rep.wall_time_sec,
              plap::termination_name(rep.termination));
}

int cmd_solve(const Options& o) {
  const auto kinds = parse_solvers(o.solver);
  const std::string out_path = o.out.empty() ? "solution.csv" : o.out;
  bool all_converged = true;
  std::optional<plap::SolveReport> first_report;

  if (o.dim == 1) {
    parse_domain(o);
    plap::Mesh1D mesh = plap::make_interval_mesh(-1.0, 1.0, size_of(o));
    plap::Problem1D prob(mesh, build_spec(o, mesh));
    plap::SparsityPattern pattern = plap::hessian_sparsity_1d(mesh);
    for (auto kind : kinds) {
      plap::SolveReport rep = plap::solve(prob, &pattern, kind, solver_options(o));
      print_report(kind, rep);
      all_converged = all_converged && rep.termination == plap::Termination::GradTol;
      if (!first_report) first_report = std::move(rep);
    }
    auto out = open_out(out_path);
    plap::write_solution_csv(out, mesh, first_report->u_full);
    if (!o.mesh_out.empty()) {
      auto mout = open_out(o.mesh_out);
      plap::write_mesh(mout, mesh);
    }
  } else {
    plap::TriMesh mesh = plap::make_structured_trimesh(parse_domain(o), size_of(o));
    plap::SparsityPattern pattern = plap::hessian_sparsity_2d(mesh);
    plap::ProblemSpec spec = build_spec(o, mesh);
    if (!o.mesh_out.empty()) {
      auto mout = open_out(o.mesh_out);
      plap::write_mesh(mout, mesh);
    }
    plap::Problem2D prob(std::move(mesh), std::move(spec));
    for (auto kind : kinds) {
      plap::SolveReport rep = plap::solve(prob, &pattern, kind, solver_options(o));
      print_report(kind, rep);
      all_converged = all_converged && rep.termination == plap::Termination::GradTol;
      if (!first_report) first_report = std::move(rep);
    }
    auto out = open_out(out_path);
    plap::write_solution_csv(out, prob.mesh(), first_report->u_full);
  }
  std::printf("solution written to %s\n", out_path.c_str());
  return all_converged ? 0 : 2;
}

int cmd_bench(const Options& o) {
  plap::BenchConfig cfg;
  cfg.dim = o.dim;
  cfg.domain = parse_domain(o);
  cfg.sizes = o.dim == 1 ? o.n : o.level;
  if (cfg.sizes.empty()) cfg.sizes = {size_of(o)};
  for (std::size_t i = 1; i < cfg.sizes.size(); ++i)
    if (cfg.sizes[i] <= cfg.sizes[i - 1])
      throw CLI::ValidationError("--n/--level", "benchmark sizes must be ascending");
  cfg.p = o.p;
  cfg.f_const = o.f;
  cfg.g_const = o.g;
  cfg.solvers = parse_solvers(o.solver);
  cfg.grad_tol = o.tol;
  cfg.max_iters = o.max_iters;
  cfg.time_budget_sec = o.time_budget;
  cfg.seed = o.seed;

  auto rows = plap::run_bench(cfg);
  if (o.format == "csv")
    plap::write_bench_csv(std::cout, cfg, rows);
  else
    plap::write_bench_markdown(std::cout, cfg, rows);
  if (!o.out.empty()) {
    auto md = open_out(o.out + ".md");
    plap::write_bench_markdown(md, cfg, rows);
    auto csv = open_out(o.out + ".csv");
    plap::write_bench_csv(csv, cfg, rows);
    std::printf("report written to %s.md and %s.csv\n", o.out.c_str(), o.out.c_str());
  }
  return 0;
}

int cmd_mesh(const Options& o) {
  if (o.dim == 1) {
    parse_domain(o);
    plap::Mesh1D mesh = plap::make_interval_mesh(-1.0, 1.0, size_of(o));
    if (o.out.empty()) {
      plap::write_mesh(std::cout, mesh);
      if (o.sparsity) plap::write_sparsity(std::cout, plap::hessian_sparsity_1d(mesh));
    } else {
      auto out = open_out(o.out);
      plap::write_mesh(out, mesh);
      if (o.sparsity) {
        auto sp = open_out(o.out + ".sparsity");
        plap::write_sparsity(sp, plap::hessian_sparsity_1d(mesh));
      }
    }
  } else {
    plap::TriMesh mesh = plap::make_structured_trimesh(parse_domain(o), size_of(o));
    if (o.out.empty()) {
      if (o.sparsity)
        plap::write_sparsity(std::cout, plap::hessian_sparsity_2d(mesh));
      else
        plap::write_mesh(std::cout, mesh);
    } else {
      auto out = open_out(o.out);
      plap::write_mesh(out, mesh);
      if (o.sparsity) {
        auto sp = open_out(o.out + ".sparsity");
        plap::write_sparsity(sp, plap::hessian_sparsity_2d(mesh));
      }
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-Laplace finite element energy minimization"};
  app.require_subcommand(1);
  Options o;

  CLI::App* solve = app.add_subcommand("solve", "Minimize the discrete energy and export the solution");
  add_common_flags(solve, o);
  CLI::App* bench = app.add_subcommand("bench", "Run the solver comparison over a list of sizes");
  add_common_flags(bench, o);
  CLI::App* mesh = app.add_subcommand("mesh", "Generate a mesh (and optionally its sparsity pattern)");
  add_common_flags(mesh, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 1;
  }

  try {
    if (!(o.p > 1.0)) throw CLI::ValidationError("--p", "requires p > 1");
    if (solve->parsed()) return cmd_solve(o);
    if (bench->parsed()) return cmd_bench(o);
    if (mesh->parsed()) return cmd_mesh(o);
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
