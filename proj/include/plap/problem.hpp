#pragma once

#include <span>
#include <utility>
#include <vector>

#include "plap/assembly.hpp"
#include "plap/energy.hpp"
#include "plap/mesh.hpp"

namespace plap {

// Reduced-space view of a discrete problem: the optimizer works on the free
// coefficients only, fixed (Dirichlet) entries stay pinned in the scratch
// vector and never enter the variable space. Evaluation reuses internal
// scratch buffers, so a problem instance is not safe for concurrent calls.

class Problem1D {
 public:
  Problem1D(Mesh1D mesh, ProblemSpec spec)
      : mesh_(std::move(mesh)), spec_(std::move(spec)) {
    b_ = load_vector(mass_matrix_1d(mesh_), spec_.f_nodal);
    auto setup = apply_dirichlet(spec_, mesh_);
    dofs_ = std::move(setup.dofs);
    v0_ = std::move(setup.v0);
    v_scratch_ = v0_;
    g_scratch_.resize(mesh_.num_nodes());
  }

  int num_free() const { return dofs_.num_free(); }
  const DofMap& dofs() const { return dofs_; }
  const Mesh1D& mesh() const { return mesh_; }
  const ProblemSpec& spec() const { return spec_; }
  const LoadVector& load() const { return b_; }

  std::vector<double> initial_free() const { return dofs_.restrict_to_free(v0_); }
  std::vector<double> initial_full() const { return v0_; }

  std::vector<double> embed_full(std::span<const double> x) const {
    std::vector<double> v = v0_;
    dofs_.embed_free(x, v);
    return v;
  }

  double energy(std::span<const double> x) const {
    dofs_.embed_free(x, v_scratch_);
    elem_evals_ += mesh_.num_elements();
    return energy_1d(mesh_, spec_, b_, v_scratch_);
  }

  void gradient_exact(std::span<const double> x, std::span<double> g) const {
    dofs_.embed_free(x, v_scratch_);
    grad_exact_1d(mesh_, spec_, b_, v_scratch_, g_scratch_);
    for (std::size_t i = 0; i < dofs_.free.size(); ++i) g[i] = g_scratch_[dofs_.free[i]];
  }

  void gradient_fd(std::span<const double> x, std::span<double> g) const {
    dofs_.embed_free(x, v_scratch_);
    elem_evals_ += grad_fd_1d(mesh_, spec_, b_, v_scratch_, dofs_.free, g);
  }

  long long elem_evals() const { return elem_evals_; }
  void reset_counters() const { elem_evals_ = 0; }

 private:
  Mesh1D mesh_;
  ProblemSpec spec_;
  LoadVector b_;
  DofMap dofs_;
  std::vector<double> v0_;
  mutable std::vector<double> v_scratch_;
  mutable std::vector<double> g_scratch_;
  mutable long long elem_evals_ = 0;
};

class Problem2D {
 public:
  Problem2D(TriMesh mesh, ProblemSpec spec)
      : mesh_(std::move(mesh)), spec_(std::move(spec)) {
    b_ = load_vector(mass_matrix_2d(mesh_), spec_.f_nodal);
    auto setup = apply_dirichlet(spec_, mesh_);
    dofs_ = std::move(setup.dofs);
    v0_ = std::move(setup.v0);
    v_scratch_ = v0_;
    g_scratch_.resize(mesh_.num_nodes());
  }

  int num_free() const { return dofs_.num_free(); }
  const DofMap& dofs() const { return dofs_; }
  const TriMesh& mesh() const { return mesh_; }
  const ProblemSpec& spec() const { return spec_; }
  const LoadVector& load() const { return b_; }

  std::vector<double> initial_free() const { return dofs_.restrict_to_free(v0_); }
  std::vector<double> initial_full() const { return v0_; }

  std::vector<double> embed_full(std::span<const double> x) const {
    std::vector<double> v = v0_;
    dofs_.embed_free(x, v);
    return v;
  }

  double energy(std::span<const double> x) const {
    dofs_.embed_free(x, v_scratch_);
    elem_evals_ += mesh_.num_elements();
    return energy_2d(mesh_, spec_, b_, v_scratch_, ws_);
  }

  void gradient_exact(std::span<const double> x, std::span<double> g) const {
    dofs_.embed_free(x, v_scratch_);
    grad_exact_2d(mesh_, spec_, b_, v_scratch_, g_scratch_);
    for (std::size_t i = 0; i < dofs_.free.size(); ++i) g[i] = g_scratch_[dofs_.free[i]];
  }

  void gradient_fd(std::span<const double> x, std::span<double> g) const {
    dofs_.embed_free(x, v_scratch_);
    elem_evals_ += grad_fd_2d(mesh_, spec_, b_, v_scratch_, dofs_.free, g);
  }

  long long elem_evals() const { return elem_evals_; }
  void reset_counters() const { elem_evals_ = 0; }

 private:
  TriMesh mesh_;
  ProblemSpec spec_;
  LoadVector b_;
  DofMap dofs_;
  std::vector<double> v0_;
  mutable std::vector<double> v_scratch_;
  mutable std::vector<double> g_scratch_;
  mutable EvalWorkspace ws_;
  mutable long long elem_evals_ = 0;
};

}  // namespace plap
