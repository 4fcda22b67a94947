#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "plap/assembly.hpp"
#include "plap/mesh.hpp"

namespace plap {

/// Discrete p-Laplace problem data: power p > 1, nodal values of the load f,
/// prescribed boundary values g (node index -> value) and an optional
/// smoothing parameter replacing |t|^p by (t^2 + eps^2)^(p/2) - eps^p.
struct ProblemSpec {
  double p = 2.0;
  std::vector<double> f_nodal;
  std::unordered_map<int, double> g;
  double reg_eps = 0.0;
};

inline ProblemSpec constant_problem(double p, const Mesh1D& mesh, double f_const, double g_const) {
  ProblemSpec spec;
  spec.p = p;
  spec.f_nodal.assign(mesh.num_nodes(), f_const);
  for (int n : boundary_nodes_of(mesh)) spec.g[n] = g_const;
  return spec;
}

inline ProblemSpec constant_problem(double p, const TriMesh& mesh, double f_const, double g_const) {
  ProblemSpec spec;
  spec.p = p;
  spec.f_nodal.assign(mesh.num_nodes(), f_const);
  for (int n : mesh.boundary_nodes) spec.g[n] = g_const;
  return spec;
}

// |t|^p and its derivative s(t) = |t|^(p-2) t, written as sign(t) |t|^(p-1)
// so that s(0) = 0 for every p > 1. Fast paths for the common powers.
inline double pnorm(double t, double p, double eps) {
  if (eps != 0.0) return std::pow(t * t + eps * eps, 0.5 * p) - std::pow(eps, p);
  if (p == 2.0) return t * t;
  if (p == 3.0) return std::abs(t) * t * t;
  return std::pow(std::abs(t), p);
}

inline double pnorm_grad(double t, double p, double eps) {
  if (eps != 0.0) return t * std::pow(t * t + eps * eps, 0.5 * p - 1.0);
  if (p == 2.0) return t;
  if (p == 3.0) return std::abs(t) * t;
  double a = std::abs(t);
  if (a == 0.0) return 0.0;
  return (t > 0.0 ? 1.0 : -1.0) * std::pow(a, p - 1.0);
}

/// Free/fixed partition of node indices with the prescribed Dirichlet values.
struct DofMap {
  int n_full = 0;
  std::vector<int> free;            // sorted interior node indices
  std::vector<int> fixed;           // sorted boundary node indices
  std::vector<double> fixed_values; // aligned with fixed

  int num_free() const { return static_cast<int>(free.size()); }

  std::vector<double> restrict_to_free(std::span<const double> v_full) const {
    std::vector<double> x(free.size());
    for (std::size_t i = 0; i < free.size(); ++i) x[i] = v_full[free[i]];
    return x;
  }

  void embed_free(std::span<const double> x, std::span<double> v_full) const {
    for (std::size_t i = 0; i < free.size(); ++i) v_full[free[i]] = x[i];
  }

  void apply_fixed(std::span<double> v_full) const {
    for (std::size_t i = 0; i < fixed.size(); ++i) v_full[fixed[i]] = fixed_values[i];
  }

  void mask_fixed(std::span<double> g_full) const {
    for (int i : fixed) g_full[i] = 0.0;
  }
};

struct DirichletSetup {
  DofMap dofs;
  std::vector<double> v0;  // fixed entries hold g, free entries are zero
};

namespace detail {

inline DirichletSetup make_dirichlet(const ProblemSpec& spec, int n_nodes,
                                     const std::vector<int>& boundary) {
  if (!(spec.p > 1.0)) throw std::invalid_argument("ProblemSpec: requires p > 1");
  DirichletSetup out;
  out.dofs.n_full = n_nodes;
  out.v0.assign(n_nodes, 0.0);
  std::vector<char> is_fixed(n_nodes, 0);
  for (int n : boundary) {
    auto it = spec.g.find(n);
    if (it == spec.g.end())
      throw std::invalid_argument("apply_dirichlet: g is not defined on boundary node " + std::to_string(n));
    is_fixed[n] = 1;
    out.dofs.fixed.push_back(n);
    out.dofs.fixed_values.push_back(it->second);
    out.v0[n] = it->second;
  }
  for (int n = 0; n < n_nodes; ++n)
    if (!is_fixed[n]) out.dofs.free.push_back(n);
  return out;
}

}  // namespace detail

inline DirichletSetup apply_dirichlet(const ProblemSpec& spec, const Mesh1D& mesh) {
  return detail::make_dirichlet(spec, mesh.num_nodes(), boundary_nodes_of(mesh));
}

inline DirichletSetup apply_dirichlet(const ProblemSpec& spec, const TriMesh& mesh) {
  return detail::make_dirichlet(spec, mesh.num_nodes(), mesh.boundary_nodes);
}

// ---- 1D energy and gradients ------------------------------------------------
//
//   J(v) = 1/(p h^(p-1)) * sum_{i=1..n+1} |v_i - v_{i-1}|^p  -  sum_i b_i v_i

inline double energy_1d(const Mesh1D& mesh, const ProblemSpec& spec, const LoadVector& b,
                        std::span<const double> v) {
  const double p = spec.p;
  const double scale = 1.0 / (p * std::pow(mesh.h, p - 1.0));
  double grad_term = 0.0;
  for (int i = 1; i < mesh.num_nodes(); ++i) grad_term += pnorm(v[i] - v[i - 1], p, spec.reg_eps);
  double lin = 0.0;
  for (int i = 0; i < mesh.num_nodes(); ++i) lin += b[i] * v[i];
  return scale * grad_term - lin;
}

/// dJ/dv_i = h^(1-p) [ s(v_i - v_{i-1}) - s(v_{i+1} - v_i) ] - b_i, with the
/// one-sided analogue at the two end nodes. Full-length output.
inline void grad_exact_1d(const Mesh1D& mesh, const ProblemSpec& spec, const LoadVector& b,
                          std::span<const double> v, std::span<double> g) {
  const int n = mesh.num_nodes();
  const double p = spec.p;
  const double scale = std::pow(mesh.h, 1.0 - p);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    if (i > 0) acc += pnorm_grad(v[i] - v[i - 1], p, spec.reg_eps);
    if (i < n - 1) acc -= pnorm_grad(v[i + 1] - v[i], p, spec.reg_eps);
    g[i] = scale * acc - b[i];
  }
}

// ---- 2D energy and gradients ------------------------------------------------
//
//   J(v) = 1/p * sum_i |T_i| (|v_x,el^i|^p + |v_y,el^i|^p)  -  sum_i b_i v_i
//
// evaluated through per-element gathers of v and the constant basis
// derivatives, recomputed on every evaluation.

struct EvalWorkspace {
  std::vector<std::array<double, 3>> v_elems;
  std::vector<double> v_x_elems;
  std::vector<double> v_y_elems;

  void refresh(const TriMesh& mesh, std::span<const double> v) {
    const int nt = mesh.num_elements();
    v_elems.resize(nt);
    v_x_elems.resize(nt);
    v_y_elems.resize(nt);
    for (int e = 0; e < nt; ++e) {
      const auto& en = mesh.elems2nodes[e];
      const auto& dx = mesh.dphi_x[e];
      const auto& dy = mesh.dphi_y[e];
      v_elems[e] = {v[en[0]], v[en[1]], v[en[2]]};
      v_x_elems[e] = dx[0] * v_elems[e][0] + dx[1] * v_elems[e][1] + dx[2] * v_elems[e][2];
      v_y_elems[e] = dy[0] * v_elems[e][0] + dy[1] * v_elems[e][1] + dy[2] * v_elems[e][2];
    }
  }
};

inline double energy_2d(const TriMesh& mesh, const ProblemSpec& spec, const LoadVector& b,
                        std::span<const double> v, EvalWorkspace& ws) {
  const double p = spec.p;
  ws.refresh(mesh, v);
  double grad_term = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e)
    grad_term += mesh.areas[e] * (pnorm(ws.v_x_elems[e], p, spec.reg_eps) +
                                  pnorm(ws.v_y_elems[e], p, spec.reg_eps));
  double lin = 0.0;
  for (int i = 0; i < mesh.num_nodes(); ++i) lin += b[i] * v[i];
  return grad_term / p - lin;
}

inline double energy_2d(const TriMesh& mesh, const ProblemSpec& spec, const LoadVector& b,
                        std::span<const double> v) {
  EvalWorkspace ws;
  return energy_2d(mesh, spec, b, v, ws);
}

/// dJ/dv_k = sum over elements containing k of
///   |T_i| ( s(v_x,el^i) dphi_x[i][loc] + s(v_y,el^i) dphi_y[i][loc] ) - b_k.
/// Accumulated by an element-wise scatter; full-length output.
inline void grad_exact_2d(const TriMesh& mesh, const ProblemSpec& spec, const LoadVector& b,
                          std::span<const double> v, std::span<double> g) {
  const double p = spec.p;
  for (int i = 0; i < mesh.num_nodes(); ++i) g[i] = -b[i];
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& en = mesh.elems2nodes[e];
    const auto& dx = mesh.dphi_x[e];
    const auto& dy = mesh.dphi_y[e];
    const double vx = dx[0] * v[en[0]] + dx[1] * v[en[1]] + dx[2] * v[en[2]];
    const double vy = dy[0] * v[en[0]] + dy[1] * v[en[1]] + dy[2] * v[en[2]];
    const double sx = mesh.areas[e] * pnorm_grad(vx, p, spec.reg_eps);
    const double sy = mesh.areas[e] * pnorm_grad(vy, p, spec.reg_eps);
    for (int j = 0; j < 3; ++j) g[en[j]] += sx * dx[j] + sy * dy[j];
  }
}

// ---- patch-local central-difference gradients --------------------------------

// Energy contribution of a single element (the gradient term only).
inline double elem_energy_1d(const Mesh1D& mesh, const ProblemSpec& spec, int e,
                             std::span<const double> v, double scale) {
  (void)mesh;
  return scale * pnorm(v[e + 1] - v[e], spec.p, spec.reg_eps);
}

inline double elem_energy_2d(const TriMesh& mesh, const ProblemSpec& spec, int e,
                             std::span<const double> v) {
  const auto& en = mesh.elems2nodes[e];
  const auto& dx = mesh.dphi_x[e];
  const auto& dy = mesh.dphi_y[e];
  const double vx = dx[0] * v[en[0]] + dx[1] * v[en[1]] + dx[2] * v[en[2]];
  const double vy = dy[0] * v[en[0]] + dy[1] * v[en[1]] + dy[2] * v[en[2]];
  return mesh.areas[e] * (pnorm(vx, spec.p, spec.reg_eps) + pnorm(vy, spec.p, spec.reg_eps)) / spec.p;
}

inline double fd_step(double vk) {
  // cbrt(machine epsilon), the standard central-difference scaling.
  static const double cbrt_eps = std::cbrt(std::numeric_limits<double>::epsilon());
  return cbrt_eps * std::max(1.0, std::abs(vk));
}

/// Central-difference gradient on the free indices. Each of the two energy
/// evaluations per component recomputes only the contribution of the elements
/// in that node's patch plus the single linear term b_k v_k. The entries of
/// `v` are perturbed in place and restored. Returns the number of element
/// kernel evaluations performed.
inline long long grad_fd_1d(const Mesh1D& mesh, const ProblemSpec& spec, const LoadVector& b,
                            std::span<double> v, std::span<const int> free_idx,
                            std::span<double> g_free) {
  const double scale = 1.0 / (spec.p * std::pow(mesh.h, spec.p - 1.0));
  const int ne = mesh.num_elements();
  long long kernel_evals = 0;
  auto patch_energy = [&](int k) {
    double e = -b[k] * v[k];
    if (k > 0) e += elem_energy_1d(mesh, spec, k - 1, v, scale);
    if (k < ne) e += elem_energy_1d(mesh, spec, k, v, scale);
    kernel_evals += (k > 0) + (k < ne);
    return e;
  };
  for (std::size_t i = 0; i < free_idx.size(); ++i) {
    const int k = free_idx[i];
    const double save = v[k];
    const double delta = fd_step(save);
    v[k] = save + delta;
    const double ep = patch_energy(k);
    v[k] = save - delta;
    const double em = patch_energy(k);
    v[k] = save;
    g_free[i] = (ep - em) / (2.0 * delta);
  }
  return kernel_evals;
}

inline long long grad_fd_2d(const TriMesh& mesh, const ProblemSpec& spec, const LoadVector& b,
                            std::span<double> v, std::span<const int> free_idx,
                            std::span<double> g_free) {
  long long kernel_evals = 0;
  auto patch_energy = [&](int k) {
    double e = -b[k] * v[k];
    for (int el : mesh.node2elems[k]) e += elem_energy_2d(mesh, spec, el, v);
    kernel_evals += static_cast<long long>(mesh.node2elems[k].size());
    return e;
  };
  for (std::size_t i = 0; i < free_idx.size(); ++i) {
    const int k = free_idx[i];
    const double save = v[k];
    const double delta = fd_step(save);
    v[k] = save + delta;
    const double ep = patch_energy(k);
    v[k] = save - delta;
    const double em = patch_energy(k);
    v[k] = save;
    g_free[i] = (ep - em) / (2.0 * delta);
  }
  return kernel_evals;
}

// ---- 1D analytic reference ----------------------------------------------------

/// Closed-form minimizer for constant f == c on a symmetric interval (-L, L)
/// with zero boundary values. The Euler-Lagrange equation gives
/// s(u_x) = -c x, hence u(x) = scale * (|x|^(q+1) - L^(q+1)) with q = 1/(p-1).
struct Reference1D {
  double p = 2.0;
  double c = 0.0;
  double half_width = 1.0;
  double exponent = 2.0;  // q + 1
  double scale = 0.0;
  double energy = 0.0;    // exact J(u)

  double value(double x) const {
    return scale * (std::pow(std::abs(x), exponent) - std::pow(half_width, exponent));
  }
  double deriv(double x) const {
    if (x == 0.0) return 0.0;
    return scale * exponent * (x > 0.0 ? 1.0 : -1.0) * std::pow(std::abs(x), exponent - 1.0);
  }
};

inline Reference1D reference_solution_1d(double p, double c, double a = -1.0, double b = 1.0) {
  if (!(p > 1.0)) throw std::invalid_argument("reference_solution_1d: requires p > 1");
  if (a != -b || !(b > 0.0))
    throw std::invalid_argument("reference_solution_1d: validated only on symmetric intervals (-L, L)");
  Reference1D ref;
  ref.p = p;
  ref.c = c;
  ref.half_width = b;
  const double q = 1.0 / (p - 1.0);
  const double r = q + 1.0;  // = p/(p-1)
  ref.exponent = r;
  const double amp = (c == 0.0) ? 0.0 : -(c > 0.0 ? 1.0 : -1.0) * std::pow(std::abs(c), q);
  ref.scale = amp / r;
  ref.energy = -2.0 * (p - 1.0) / (p * (r + 1.0)) * std::pow(std::abs(c), r) * std::pow(b, r + 1.0);
  return ref;
}

}  // namespace plap
