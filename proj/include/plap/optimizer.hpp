#pragma once

#include <chrono>
#include <cmath>
#include <concepts>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "plap/energy.hpp"
#include "plap/linalg.hpp"

namespace plap {

/// The four solver configurations:
///   TrExactGradSparse  - trust region, exact gradient, Hessian via colored
///                        finite differences on the sparsity pattern.
///   TrFdGradSparse     - trust region, central-difference gradient, colored
///                        finite-difference Hessian on the pattern.
///   TrFdGradDense      - trust region, central-difference gradient, dense
///                        finite-difference Hessian (no pattern).
///   QuasiNewtonBfgs    - dense BFGS on the energy alone.
enum class SolverKind { TrExactGradSparse, TrFdGradSparse, TrFdGradDense, QuasiNewtonBfgs };

inline const char* solver_name(SolverKind k) {
  switch (k) {
    case SolverKind::TrExactGradSparse: return "tr-exact";
    case SolverKind::TrFdGradSparse: return "tr-fd";
    case SolverKind::TrFdGradDense: return "tr-dense";
    case SolverKind::QuasiNewtonBfgs: return "qn";
  }
  return "?";
}

enum class Termination { GradTol, MaxIters, RadiusCollapse, LineSearchFail };

inline const char* termination_name(Termination t) {
  switch (t) {
    case Termination::GradTol: return "grad-tol";
    case Termination::MaxIters: return "max-iters";
    case Termination::RadiusCollapse: return "radius-collapse";
    case Termination::LineSearchFail: return "line-search-fail";
  }
  return "?";
}

struct SolverOptions {
  double grad_tol = 1e-6;        // infinity norm of the reduced gradient
  int max_iters = 0;             // 0: 10*dim + 100
  double tr_radius0 = 1.0;
  double tr_radius_max = 1e3;
  double tr_radius_min = 1e-13;  // below this the radius has collapsed
  double eta_accept = 0.1;
  double shrink_threshold = 0.25;
  double expand_threshold = 0.75;
  double shrink_factor = 0.25;
  double expand_factor = 2.0;
  double cg_tol = 0.0;           // 0: inexact-Newton forcing min(0.5, sqrt(|g|)) |g|
  int cg_max_iters = 0;          // 0: problem dimension
  double time_budget_sec = 0.0;  // 0: none; exceeded budgets terminate as MaxIters
  std::function<void(int iter, double j, const std::vector<double>& x)> on_accept;

  void validate() const {
    if (!(0.0 < eta_accept && eta_accept < shrink_threshold && shrink_threshold < expand_threshold &&
          expand_threshold < 1.0))
      throw std::invalid_argument("SolverOptions: requires 0 < eta_accept < shrink < expand < 1");
    if (!(grad_tol > 0.0) || !(tr_radius0 > 0.0) || !(tr_radius_max >= tr_radius0))
      throw std::invalid_argument("SolverOptions: invalid tolerance or radius settings");
  }
};

/// Final iterate plus solver bookkeeping: iterations count every trust-region
/// subproblem solve (including rejected steps), or every BFGS line search.
struct SolveReport {
  std::vector<double> u_full;
  double j_final = 0.0;
  int iterations = 0;
  long long energy_evals = 0;
  long long gradient_evals = 0;
  double wall_time_sec = 0.0;
  Termination termination = Termination::MaxIters;
};

struct TrStepResult {
  std::vector<double> step;
  double predicted_reduction = 0.0;
  bool hit_boundary = false;
  int cg_iters = 0;
};

/// Trust-region subproblem: minimize m(s) = g.s + s.H s / 2 over |s| <= radius.
///
/// Truncated conjugate gradients first runs toward the inexact Newton point
/// (forcing tolerance min(0.5, sqrt(|g|)) |g|), bailing out when curvature
/// turns non-positive. The model is then minimized exactly on the
/// two-dimensional subspace spanned by the steepest-descent direction and the
/// CG result (or the non-positive-curvature direction), intersected with the
/// ball. A pure Steihaug boundary exit degrades to near-gradient steps when
/// the Hessian is close to singular, which the p-Laplacian hits at every flat
/// iterate for p > 2; the subspace step keeps the Newton-like quality there.
/// The returned reduction is never below the exact Cauchy reduction.
template <class HessVec>
TrStepResult tr_step_op(HessVec&& hess_vec, std::span<const double> g, double radius,
                        double cg_tol = 0.0, int cg_max_iters = 0) {
  const int n = static_cast<int>(g.size());
  TrStepResult out;
  out.step.assign(n, 0.0);

  const double gnorm = norm2(g);
  if (gnorm == 0.0 || radius <= 0.0) return out;
  const double tol = cg_tol > 0.0 ? cg_tol : std::min(0.5, std::sqrt(gnorm)) * gnorm;
  const int max_iters = cg_max_iters > 0 ? cg_max_iters : n;

  // -- phase 1: CG on H z = -g, no radius constraint -------------------------
  std::vector<double> z(n, 0.0);
  std::vector<double> r(g.begin(), g.end());
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) d[i] = -g[i];
  std::vector<double> hd(n);
  std::vector<double> neg_dir;

  double rr = dot(r, r);
  for (int it = 0; it < max_iters; ++it) {
    hess_vec(d, hd);
    ++out.cg_iters;
    const double dhd = dot(d, hd);
    if (dhd <= 1e-14 * dot(d, d)) {
      neg_dir = d;
      break;
    }
    const double alpha = rr / dhd;
    for (int i = 0; i < n; ++i) {
      z[i] += alpha * d[i];
      r[i] += alpha * hd[i];
    }
    const double rr_new = dot(r, r);
    if (std::sqrt(rr_new) <= tol) break;
    const double beta = rr_new / rr;
    rr = rr_new;
    for (int i = 0; i < n; ++i) d[i] = -r[i] + beta * d[i];
  }

  // -- phase 2: orthonormal subspace {steepest descent, Newton/curvature} ----
  std::vector<double> v1(n), v2;
  for (int i = 0; i < n; ++i) v1[i] = -g[i] / gnorm;
  const std::vector<double>& cand = neg_dir.empty() ? z : neg_dir;
  const double cand_norm = norm2(cand);
  if (cand_norm > 0.0) {
    v2.resize(n);
    const double proj = dot(cand, v1);
    double orth2 = 0.0;
    for (int i = 0; i < n; ++i) {
      v2[i] = cand[i] - proj * v1[i];
      orth2 += v2[i] * v2[i];
    }
    const double orth = std::sqrt(orth2);
    if (orth > 1e-10 * cand_norm) {
      for (int i = 0; i < n; ++i) v2[i] /= orth;
    } else {
      v2.clear();
    }
  }

  // -- phase 3: exact small trust-region solve -------------------------------
  hess_vec(v1, hd);
  const double h11 = dot(v1, hd);
  const double g1 = dot(g, v1);  // = -gnorm
  double best_m = 0.0;           // m(0)
  double y1 = 0.0, y2 = 0.0;

  auto consider = [&](double a, double b, double m) {
    if (m < best_m) {
      best_m = m;
      y1 = a;
      y2 = b;
    }
  };

  // Cauchy candidate along v1.
  {
    double t = radius;
    if (h11 > 0.0) t = std::min(radius, -g1 / h11);
    consider(t, 0.0, g1 * t + 0.5 * h11 * t * t);
  }

  if (!v2.empty()) {
    std::vector<double> hv2(n);
    hess_vec(v2, hv2);
    const double h12 = dot(v1, hv2);
    const double h22 = dot(v2, hv2);
    const double g2 = dot(g, v2);

    // interior stationary point, when the projected model is convex
    const double det = h11 * h22 - h12 * h12;
    if (det > 0.0 && h11 > 0.0) {
      const double a = (-g1 * h22 + g2 * h12) / det;
      const double b = (-h11 * g2 + h12 * g1) / det;
      if (a * a + b * b <= radius * radius)
        consider(a, b, g1 * a + g2 * b + 0.5 * (h11 * a * a + 2.0 * h12 * a * b + h22 * b * b));
    }

    // boundary: dense angular sampling plus golden-section polish
    auto q = [&](double theta) {
      const double a = radius * std::cos(theta), b = radius * std::sin(theta);
      return g1 * a + g2 * b + 0.5 * (h11 * a * a + 2.0 * h12 * a * b + h22 * b * b);
    };
    constexpr int samples = 256;
    constexpr double two_pi = 6.283185307179586;
    double best_theta = 0.0, best_q = q(0.0);
    for (int k = 1; k < samples; ++k) {
      const double theta = two_pi * k / samples;
      const double qv = q(theta);
      if (qv < best_q) {
        best_q = qv;
        best_theta = theta;
      }
    }
    double lo = best_theta - two_pi / samples, hi = best_theta + two_pi / samples;
    const double golden = 0.6180339887498949;
    double t1 = hi - golden * (hi - lo), t2 = lo + golden * (hi - lo);
    double q1 = q(t1), q2 = q(t2);
    for (int it = 0; it < 80; ++it) {
      if (q1 < q2) {
        hi = t2;
        t2 = t1;
        q2 = q1;
        t1 = hi - golden * (hi - lo);
        q1 = q(t1);
      } else {
        lo = t1;
        t1 = t2;
        q1 = q2;
        t2 = lo + golden * (hi - lo);
        q2 = q(t2);
      }
    }
    const double theta_polish = q1 < q2 ? t1 : t2;
    const double q_polish = std::min(q1, q2);
    const double theta = q_polish < best_q ? theta_polish : best_theta;
    consider(radius * std::cos(theta), radius * std::sin(theta), std::min(q_polish, best_q));
  }

  for (int i = 0; i < n; ++i) out.step[i] = y1 * v1[i] + (v2.empty() ? 0.0 : y2 * v2[i]);
  out.predicted_reduction = std::max(0.0, -best_m);
  out.hit_boundary = std::sqrt(y1 * y1 + y2 * y2) >= radius * (1.0 - 1e-9);
  return out;
}

inline TrStepResult tr_step(const SparseSymMatrix& h, std::span<const double> g, double radius,
                            double cg_tol = 0.0, int cg_max_iters = 0) {
  return tr_step_op([&](std::span<const double> x, std::span<double> y) { h.matvec(x, y); }, g,
                    radius, cg_tol, cg_max_iters);
}

inline TrStepResult tr_step(const DenseMatrix& h, std::span<const double> g, double radius,
                            double cg_tol = 0.0, int cg_max_iters = 0) {
  return tr_step_op([&](std::span<const double> x, std::span<double> y) { h.matvec(x, y); }, g,
                    radius, cg_tol, cg_max_iters);
}

inline double hessian_fd_step(std::span<const double> v) {
  // forward differences of a gradient want the square-root scaling
  static const double sqrt_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  return sqrt_eps * std::max(1.0, norm_inf(v));
}

/// Sparse Hessian by forward differences of the gradient: one perturbed
/// gradient per color recovers all columns of that color, num_colors + 1
/// gradient evaluations in total (the base gradient is recomputed unless
/// supplied). The result is symmetrized as (H + H^T)/2 on the pattern.
template <class GradFn>
SparseSymMatrix hessian_colored_fd(GradFn&& grad, const SparsityPattern& pat,
                                   std::span<const double> v,
                                   std::span<const double> g_base = {}) {
  if (pat.num_colors <= 0 || static_cast<int>(pat.coloring.size()) != pat.dim)
    throw std::invalid_argument("hessian_colored_fd: pattern has no coloring");
  const int n = pat.dim;
  if (static_cast<int>(v.size()) != n)
    throw std::invalid_argument("hessian_colored_fd: dimension mismatch");

  SparseSymMatrix h = matrix_from_pattern(pat);
  const double delta = hessian_fd_step(v);

  std::vector<double> g0;
  if (g_base.size() == v.size()) {
    g0.assign(g_base.begin(), g_base.end());
  } else {
    g0.resize(n);
    grad(std::span<const double>(v), std::span<double>(g0));
  }

  std::vector<double> vp(v.begin(), v.end());
  std::vector<double> gp(n);
  for (int color = 0; color < pat.num_colors; ++color) {
    for (int k = 0; k < n; ++k)
      if (pat.coloring[k] == color) vp[k] = v[k] + delta;
    grad(std::span<const double>(vp), std::span<double>(gp));
    for (int k = 0; k < n; ++k) {
      if (pat.coloring[k] != color) continue;
      vp[k] = v[k];
      // rows holding column k are row k's entries, by symmetry
      for (int idx = pat.row_offsets[k]; idx < pat.row_offsets[k + 1]; ++idx) {
        const int row = pat.col_indices[idx];
        const int pos = h.find(row, k);
        if (pos < 0) throw std::invalid_argument("hessian_colored_fd: pattern is not symmetric");
        h.values[pos] = (gp[row] - g0[row]) / delta;
      }
    }
  }

  for (int i = 0; i < n; ++i)
    for (int idx = h.row_offsets[i]; idx < h.row_offsets[i + 1]; ++idx) {
      const int j = h.col_indices[idx];
      if (j <= i) continue;
      const int ji = h.find(j, i);
      const double avg = 0.5 * (h.values[idx] + h.values[ji]);
      h.values[idx] = avg;
      h.values[ji] = avg;
    }
  return h;
}

/// Dense Hessian by forward differences of the gradient, one column per
/// coordinate: dim + 1 gradient evaluations, symmetrized as (H + H^T)/2.
template <class GradFn>
DenseMatrix hessian_dense_fd(GradFn&& grad, std::span<const double> v,
                             std::span<const double> g_base = {}) {
  const int n = static_cast<int>(v.size());
  DenseMatrix h(n, n);
  const double delta = hessian_fd_step(v);

  std::vector<double> g0;
  if (g_base.size() == v.size()) {
    g0.assign(g_base.begin(), g_base.end());
  } else {
    g0.resize(n);
    grad(std::span<const double>(v), std::span<double>(g0));
  }

  std::vector<double> vp(v.begin(), v.end());
  std::vector<double> gp(n);
  for (int k = 0; k < n; ++k) {
    vp[k] = v[k] + delta;
    grad(std::span<const double>(vp), std::span<double>(gp));
    vp[k] = v[k];
    for (int i = 0; i < n; ++i) h(i, k) = (gp[i] - g0[i]) / delta;
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (h(i, j) + h(j, i));
      h(i, j) = avg;
      h(j, i) = avg;
    }
  return h;
}

namespace detail {

struct MinimizeResult {
  std::vector<double> x;
  double j = 0.0;
  int iterations = 0;
  Termination termination = Termination::MaxIters;
};

class WallTimer {
 public:
  WallTimer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

/// Trust-region outer loop shared by the three TR configurations. The model
/// Hessian is rebuilt after every accepted step and kept across rejections.
template <class EnergyFn, class GradFn, class HessBuilder>
MinimizeResult tr_minimize(EnergyFn&& energy, GradFn&& grad, HessBuilder&& build_hess,
                           std::vector<double> x0, const SolverOptions& opts) {
  opts.validate();
  const int n = static_cast<int>(x0.size());
  const int max_iters = opts.max_iters > 0 ? opts.max_iters : 10 * n + 100;
  WallTimer timer;

  MinimizeResult res;
  res.x = std::move(x0);
  double j = energy(res.x);
  std::vector<double> g(n);
  grad(res.x, g);

  using HessT = std::remove_cvref_t<decltype(build_hess(res.x, g))>;
  std::optional<HessT> hess;

  std::vector<double> xt(n);
  double radius = opts.tr_radius0;

  while (true) {
    if (norm_inf(g) <= opts.grad_tol) {
      res.termination = Termination::GradTol;
      break;
    }
    if (res.iterations >= max_iters) {
      res.termination = Termination::MaxIters;
      break;
    }
    if (opts.time_budget_sec > 0.0 && timer.seconds() > opts.time_budget_sec) {
      res.termination = Termination::MaxIters;
      break;
    }
    if (radius < opts.tr_radius_min) {
      res.termination = Termination::RadiusCollapse;
      break;
    }

    if (!hess) hess = build_hess(res.x, g);
    TrStepResult step = tr_step(*hess, g, radius, opts.cg_tol, opts.cg_max_iters);
    ++res.iterations;

    if (step.predicted_reduction <= 0.0) {
      radius *= opts.shrink_factor;
      continue;
    }

    for (int i = 0; i < n; ++i) xt[i] = res.x[i] + step.step[i];
    const double jt = energy(xt);
    const double rho = (j - jt) / step.predicted_reduction;

    if (rho >= opts.eta_accept) {
      res.x = xt;
      j = jt;
      grad(res.x, g);
      hess.reset();
      if (opts.on_accept) opts.on_accept(res.iterations, j, res.x);
    }
    if (rho < opts.shrink_threshold)
      radius *= opts.shrink_factor;
    else if (rho > opts.expand_threshold && step.hit_boundary)
      radius = std::min(radius * opts.expand_factor, opts.tr_radius_max);
  }

  res.j = j;
  return res;
}

/// Dense BFGS on the inverse Hessian with a weak Wolfe line search
/// (bisection bracketing). The approximation resets to the identity on
/// non-descent directions or failed curvature updates.
template <class EnergyFn, class GradFn>
MinimizeResult bfgs_minimize_core(EnergyFn&& energy, GradFn&& grad, std::vector<double> x0,
                                  const SolverOptions& opts) {
  opts.validate();
  const int n = static_cast<int>(x0.size());
  const int max_iters = opts.max_iters > 0 ? opts.max_iters : 10 * n + 100;
  constexpr double c1 = 1e-4;  // Armijo slope fraction
  constexpr double c2 = 0.9;   // curvature fraction
  constexpr int max_ls_trials = 60;
  WallTimer timer;

  MinimizeResult res;
  res.x = std::move(x0);
  double f = energy(res.x);
  std::vector<double> g(n);
  grad(res.x, g);

  DenseMatrix h = DenseMatrix::identity(n);
  std::vector<double> p(n), xt(n), gt(n), hy(n);
  bool identity_h = true;

  while (true) {
    if (norm_inf(g) <= opts.grad_tol) {
      res.termination = Termination::GradTol;
      break;
    }
    if (res.iterations >= max_iters) {
      res.termination = Termination::MaxIters;
      break;
    }
    if (opts.time_budget_sec > 0.0 && timer.seconds() > opts.time_budget_sec) {
      res.termination = Termination::MaxIters;
      break;
    }

    h.matvec(g, p);
    for (int i = 0; i < n; ++i) p[i] = -p[i];
    double gtp = dot(g, p);
    if (gtp >= 0.0) {
      h = DenseMatrix::identity(n);
      identity_h = true;
      for (int i = 0; i < n; ++i) p[i] = -g[i];
      gtp = -dot(g, g);
    }

    double alpha = 1.0, lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    double ft = f;
    bool found = false;
    for (int trial = 0; trial < max_ls_trials; ++trial) {
      for (int i = 0; i < n; ++i) xt[i] = res.x[i] + alpha * p[i];
      ft = energy(xt);
      if (!(ft <= f + c1 * alpha * gtp)) {  // also catches NaN
        hi = alpha;
        alpha = 0.5 * (lo + hi);
        continue;
      }
      grad(xt, gt);
      if (dot(gt, p) < c2 * gtp) {
        lo = alpha;
        alpha = std::isinf(hi) ? 2.0 * alpha : 0.5 * (lo + hi);
        continue;
      }
      found = true;
      break;
    }
    if (found) {
      // One quadratic-interpolation refinement through (f, gtp, ft); exact
      // line minimization on quadratic energies.
      const double denom = 2.0 * (ft - f - gtp * alpha);
      if (denom > 0.0) {
        const double alpha_q = -gtp * alpha * alpha / denom;
        if (std::isfinite(alpha_q) && alpha_q > 0.0 &&
            std::abs(alpha_q - alpha) > 1e-12 * alpha) {
          std::vector<double> xq(n), gq(n);
          for (int i = 0; i < n; ++i) xq[i] = res.x[i] + alpha_q * p[i];
          const double fq = energy(xq);
          if (fq < ft && fq <= f + c1 * alpha_q * gtp) {
            grad(xq, gq);
            if (dot(gq, p) >= c2 * gtp) {
              alpha = alpha_q;
              ft = fq;
              xt = xq;
              gt = gq;
            }
          }
        }
      }
    }
    ++res.iterations;  // one line search per iteration
    if (!found) {
      if (!identity_h) {  // retry once along steepest descent
        h = DenseMatrix::identity(n);
        identity_h = true;
        continue;
      }
      res.termination = Termination::LineSearchFail;
      break;
    }

    // s = alpha p, y = gt - g; inverse update
    // H <- H - rho (s (Hy)^T + (Hy) s^T) + rho (1 + rho y.Hy) s s^T
    std::vector<double> s(n), y(n);
    for (int i = 0; i < n; ++i) {
      s[i] = alpha * p[i];
      y[i] = gt[i] - g[i];
    }
    const double ys = dot(y, s);

    if (ys > 1e-14 * norm2(y) * norm2(s)) {
      h.matvec(y, hy);
      const double rho = 1.0 / ys;
      const double coef = rho * rho * dot(y, hy) + rho;
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
          h(i, k) += -rho * (s[i] * hy[k] + hy[i] * s[k]) + coef * s[i] * s[k];
      identity_h = false;
    } else {
      h = DenseMatrix::identity(n);
      identity_h = true;
    }

    res.x = xt;
    f = ft;
    g = gt;
    if (opts.on_accept) opts.on_accept(res.iterations, f, res.x);
  }

  res.j = f;
  return res;
}

}  // namespace detail

/// Standalone BFGS entry point operating on whatever space the callbacks use.
template <class EnergyFn, class GradFn>
SolveReport bfgs_minimize(EnergyFn&& energy, GradFn&& grad, std::vector<double> x0,
                          const SolverOptions& opts = {}) {
  detail::WallTimer timer;
  long long e_evals = 0, g_evals = 0;
  auto energy_c = [&](std::span<const double> x) {
    ++e_evals;
    return energy(x);
  };
  auto grad_c = [&](std::span<const double> x, std::span<double> g) {
    ++g_evals;
    grad(x, g);
  };
  auto r = detail::bfgs_minimize_core(energy_c, grad_c, std::move(x0), opts);
  SolveReport rep;
  rep.u_full = std::move(r.x);
  rep.j_final = r.j;
  rep.iterations = r.iterations;
  rep.energy_evals = e_evals;
  rep.gradient_evals = g_evals;
  rep.wall_time_sec = timer.seconds();
  rep.termination = r.termination;
  return rep;
}

template <class P>
concept ReducedProblem = requires(const P& p, const std::vector<double>& x, std::vector<double>& g) {
  { p.num_free() } -> std::convertible_to<int>;
  { p.energy(x) } -> std::convertible_to<double>;
  p.gradient_exact(x, g);
  p.gradient_fd(x, g);
  { p.initial_free() } -> std::convertible_to<std::vector<double>>;
  { p.embed_full(x) } -> std::convertible_to<std::vector<double>>;
  { p.dofs() } -> std::convertible_to<const DofMap&>;
};

/// Minimizes the reduced energy of `prob` with the selected configuration.
/// The sparsity pattern (full node indexing) is required for the two sparse
/// trust-region options; it is restricted to the free dofs and colored here.
/// Non-convergence is reported through SolveReport::termination.
template <ReducedProblem P>
SolveReport solve(const P& prob, const SparsityPattern* pattern, SolverKind kind,
                  const SolverOptions& opts = {}) {
  opts.validate();
  detail::WallTimer timer;
  long long e_evals = 0, g_evals = 0;

  auto energy = [&](std::span<const double> x) {
    ++e_evals;
    return prob.energy(x);
  };
  auto grad_exact = [&](std::span<const double> x, std::span<double> g) {
    ++g_evals;
    prob.gradient_exact(x, g);
  };
  auto grad_fd = [&](std::span<const double> x, std::span<double> g) {
    ++g_evals;
    prob.gradient_fd(x, g);
  };

  detail::MinimizeResult r;
  std::vector<double> x0 = prob.initial_free();

  switch (kind) {
    case SolverKind::TrExactGradSparse:
    case SolverKind::TrFdGradSparse: {
      if (pattern == nullptr)
        throw std::invalid_argument("solve: sparse trust-region options require a sparsity pattern");
      SparsityPattern reduced = color_columns(restrict_pattern(*pattern, prob.dofs().free));
      if (kind == SolverKind::TrExactGradSparse) {
        auto builder = [&](const std::vector<double>& x, const std::vector<double>& g) {
          return hessian_colored_fd(grad_exact, reduced, x, g);
        };
        r = detail::tr_minimize(energy, grad_exact, builder, std::move(x0), opts);
      } else {
        auto builder = [&](const std::vector<double>& x, const std::vector<double>& g) {
          return hessian_colored_fd(grad_fd, reduced, x, g);
        };
        r = detail::tr_minimize(energy, grad_fd, builder, std::move(x0), opts);
      }
      break;
    }
    case SolverKind::TrFdGradDense: {
      auto builder = [&](const std::vector<double>& x, const std::vector<double>& g) {
        return hessian_dense_fd(grad_fd, x, g);
      };
      r = detail::tr_minimize(energy, grad_fd, builder, std::move(x0), opts);
      break;
    }
    case SolverKind::QuasiNewtonBfgs:
      r = detail::bfgs_minimize_core(energy, grad_fd, std::move(x0), opts);
      break;
  }

  SolveReport rep;
  rep.u_full = prob.embed_full(r.x);
  rep.j_final = r.j;
  rep.iterations = r.iterations;
  rep.energy_evals = e_evals;
  rep.gradient_evals = g_evals;
  rep.wall_time_sec = timer.seconds();
  rep.termination = r.termination;
  return rep;
}

}  // namespace plap
