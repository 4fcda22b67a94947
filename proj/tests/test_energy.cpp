#include <catch2/catch.hpp>

#include <cmath>
#include <vector>

#include <plap/energy.hpp>
#include <plap/problem.hpp>

#include "test_helpers.hpp"

using namespace plap;

namespace {

// Composite midpoint quadrature of (1/p)|u'|^p - c u over (-L, L).
double quadrature_energy(const Reference1D& ref, int cells = 1'000'000) {
  const double L = ref.half_width;
  const double dx = 2.0 * L / cells;
  double total = 0.0;
  for (int i = 0; i < cells; ++i) {
    const double x = -L + (i + 0.5) * dx;
    total += (std::pow(std::abs(ref.deriv(x)), ref.p) / ref.p - ref.c * ref.value(x)) * dx;
  }
  return total;
}

}  // namespace

TEST_CASE("energy_1d: zero data and the n = 1 closed form") {
  auto mesh = make_interval_mesh(-1.0, 1.0, 1);  // h = 1
  auto spec = constant_problem(3.0, mesh, -10.0, 0.0);
  auto b = load_vector(mass_matrix_1d(mesh), spec.f_nodal);
  REQUIRE(b[1] == Approx(-10.0).epsilon(1e-14));

  CHECK(energy_1d(mesh, spec, b, std::vector<double>{0.0, 0.0, 0.0}) == 0.0);

  // J(t) = (2/3)|t|^3 + 10 t
  for (double t : {-3.0, -1.0, 0.5, 2.0}) {
    const double expected = 2.0 / 3.0 * std::abs(t * t * t) + 10.0 * t;
    CHECK(energy_1d(mesh, spec, b, std::vector<double>{0.0, t, 0.0}) ==
          Approx(expected).margin(1e-12));
  }
}

TEST_CASE("energy_2d: zero data and a single triangle") {
  auto mesh = make_trimesh_from({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
  ProblemSpec spec;
  spec.p = 3.0;
  spec.f_nodal.assign(3, 0.0);
  LoadVector b(3, 0.0);

  CHECK(energy_2d(mesh, spec, b, std::vector<double>{0.0, 0.0, 0.0}) == 0.0);
  // v = (0,1,0): gradient (1,0), energy = (1/3) * (1/2) * 1 = 1/6
  CHECK(energy_2d(mesh, spec, b, std::vector<double>{0.0, 1.0, 0.0}) ==
        Approx(1.0 / 6.0).margin(1e-15));
}

TEST_CASE("EvalWorkspace gathers match their definition") {
  auto mesh = make_structured_trimesh(DomainKind::LShape, 0);
  auto v = plap_test::random_vector(mesh.num_nodes(), 5);
  EvalWorkspace ws;
  ws.refresh(mesh, v);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    double vx = 0.0, vy = 0.0;
    for (int j = 0; j < 3; ++j) {
      CHECK(ws.v_elems[e][j] == v[mesh.elems2nodes[e][j]]);
      vx += mesh.dphi_x[e][j] * v[mesh.elems2nodes[e][j]];
      vy += mesh.dphi_y[e][j] * v[mesh.elems2nodes[e][j]];
    }
    CHECK(ws.v_x_elems[e] == Approx(vx).margin(1e-15));
    CHECK(ws.v_y_elems[e] == Approx(vy).margin(1e-15));
  }
}

TEST_CASE("grad_exact_1d: stationary point and p = 2 reduction") {
  auto mesh = make_interval_mesh(-1.0, 1.0, 1);
  auto spec = constant_problem(3.0, mesh, -10.0, 0.0);
  auto b = load_vector(mass_matrix_1d(mesh), spec.f_nodal);

  std::vector<double> g(3);
  const double tstar = -std::sqrt(5.0);
  grad_exact_1d(mesh, spec, b, std::vector<double>{0.0, tstar, 0.0}, g);
  CHECK(std::abs(g[1]) < 1e-10);

  auto mesh2 = make_interval_mesh(-1.0, 1.0, 9);
  auto spec2 = constant_problem(2.0, mesh2, -10.0, 0.0);
  auto b2 = load_vector(mass_matrix_1d(mesh2), spec2.f_nodal);
  auto v = plap_test::random_vector(mesh2.num_nodes(), 7);
  std::vector<double> g2(mesh2.num_nodes());
  grad_exact_1d(mesh2, spec2, b2, v, g2);
  for (int i = 1; i < mesh2.num_nodes() - 1; ++i) {
    const double expected = (2.0 * v[i] - v[i - 1] - v[i + 1]) / mesh2.h - b2[i];
    CHECK(g2[i] == Approx(expected).margin(1e-12));
  }
}

TEST_CASE("grad_exact_2d: single triangle hand value") {
  auto mesh = make_trimesh_from({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
  ProblemSpec spec;
  spec.p = 3.0;
  spec.f_nodal.assign(3, 0.0);
  LoadVector b(3, 0.0);
  std::vector<double> g(3);
  grad_exact_2d(mesh, spec, b, std::vector<double>{0.0, 1.0, 0.0}, g);
  CHECK(g[0] == Approx(-0.5).margin(1e-14));
  CHECK(g[1] == Approx(0.5).margin(1e-14));
  CHECK(g[2] == Approx(0.0).margin(1e-14));
}

TEST_CASE("p = 2 gradient induces a symmetric PSD map on free dofs") {
  auto mesh = make_structured_trimesh(DomainKind::LShape, 1);
  ProblemSpec spec = constant_problem(2.0, mesh, 0.0, 0.0);
  Problem2D prob(mesh, spec);
  const int n = prob.num_free();

  // columns of the induced linear map: grad(e_k) - grad(0)
  std::vector<double> g0(n), gk(n);
  prob.gradient_exact(std::vector<double>(n, 0.0), g0);
  std::vector<std::vector<double>> k_mat(n, std::vector<double>(n));
  std::vector<double> ek(n, 0.0);
  for (int k = 0; k < n; ++k) {
    ek[k] = 1.0;
    prob.gradient_exact(ek, gk);
    for (int i = 0; i < n; ++i) k_mat[i][k] = gk[i] - g0[i];
    ek[k] = 0.0;
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) CHECK(k_mat[i][j] == Approx(k_mat[j][i]).margin(1e-10));

  // it is exactly the reduced P1 stiffness matrix
  auto stiff = plap_test::p2_stiffness_reduced(prob.mesh(), prob.dofs());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) CHECK(k_mat[i][j] == Approx(stiff[i][j]).margin(1e-10));

  // PSD via random quotients
  for (unsigned seed : {1u, 2u, 3u, 4u, 5u}) {
    auto x = plap_test::random_vector(n, seed);
    double q = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) q += x[i] * k_mat[i][j] * x[j];
    CHECK(q >= -1e-10);
  }
}

TEST_CASE("gradient consistency: exact vs central differences") {
  for (double p : {1.8, 2.0, 3.0}) {
    auto mesh = make_interval_mesh(-1.0, 1.0, 30);
    auto spec = constant_problem(p, mesh, -10.0, 0.0);
    Problem1D prob(mesh, spec);
    const int n = prob.num_free();
    std::vector<double> ge(n), gf(n);
    for (unsigned seed = 0; seed < 20; ++seed) {
      auto x = plap_test::random_vector(n, 100 + seed);
      prob.gradient_exact(x, ge);
      prob.gradient_fd(x, gf);
      for (int i = 0; i < n; ++i)
        CHECK(std::abs(ge[i] - gf[i]) / (1.0 + std::abs(ge[i])) <= 1e-5);
    }
  }
  for (double p : {1.8, 2.0, 3.0}) {
    auto mesh = make_structured_trimesh(DomainKind::LShape, 1);
    ProblemSpec spec = constant_problem(p, mesh, -10.0, 0.0);
    Problem2D prob(mesh, spec);
    const int n = prob.num_free();
    std::vector<double> ge(n), gf(n);
    for (unsigned seed = 0; seed < 20; ++seed) {
      auto x = plap_test::random_vector(n, 200 + seed);
      prob.gradient_exact(x, ge);
      prob.gradient_fd(x, gf);
      for (int i = 0; i < n; ++i)
        CHECK(std::abs(ge[i] - gf[i]) / (1.0 + std::abs(ge[i])) <= 1e-5);
    }
  }
}

TEST_CASE("patch-local FD gradient equals the full-energy formula") {
  auto mesh = make_structured_trimesh(DomainKind::LShape, 1);
  ProblemSpec spec = constant_problem(3.0, mesh, -10.0, 0.0);
  auto b = load_vector(mass_matrix_2d(mesh), spec.f_nodal);
  auto setup = apply_dirichlet(spec, mesh);

  auto v = setup.v0;
  auto x = plap_test::random_vector(setup.dofs.num_free(), 42);
  setup.dofs.embed_free(x, v);

  std::vector<double> g_patch(setup.dofs.num_free());
  auto v_work = v;
  grad_fd_2d(mesh, spec, b, v_work, setup.dofs.free, g_patch);
  REQUIRE(v_work == v);  // perturbations restored

  auto g_full = plap_test::full_fd_gradient(
      [&](const std::vector<double>& w) { return energy_2d(mesh, spec, b, w); }, v,
      setup.dofs.free);
  for (std::size_t i = 0; i < g_patch.size(); ++i)
    CHECK(g_patch[i] == Approx(g_full[i]).margin(1e-9));
}

TEST_CASE("patch locality: one coefficient change stays in its patch") {
  auto mesh = make_structured_trimesh(DomainKind::LShape, 1);
  ProblemSpec spec = constant_problem(3.0, mesh, -10.0, 0.0);
  auto b = load_vector(mass_matrix_2d(mesh), spec.f_nodal);
  auto setup = apply_dirichlet(spec, mesh);
  auto v = setup.v0;
  auto x = plap_test::random_vector(setup.dofs.num_free(), 9);
  setup.dofs.embed_free(x, v);

  auto patch_energy = [&](int k, const std::vector<double>& w) {
    double e = -b[k] * w[k];
    for (int el : mesh.node2elems[k]) e += elem_energy_2d(mesh, spec, el, w);
    return e;
  };

  for (int k : {setup.dofs.free[0], setup.dofs.free[10], setup.dofs.free[32]}) {
    auto w = v;
    w[k] += 0.37;
    const double full_change = energy_2d(mesh, spec, b, w) - energy_2d(mesh, spec, b, v);
    const double patch_change = patch_energy(k, w) - patch_energy(k, v);
    CHECK(full_change == Approx(patch_change).margin(1e-12));
  }
}

TEST_CASE("FD gradient cost is bounded by twice the patch sizes") {
  auto mesh = make_structured_trimesh(DomainKind::LShape, 3);
  ProblemSpec spec = constant_problem(3.0, mesh, -10.0, 0.0);
  Problem2D prob(mesh, spec);
  const int n = prob.num_free();
  auto x = plap_test::random_vector(n, 3);
  std::vector<double> g(n);

  prob.reset_counters();
  prob.gradient_fd(x, g);
  long long patch_total = 0;
  for (int k : prob.dofs().free) patch_total += static_cast<long long>(prob.mesh().node2elems[k].size());
  CHECK(prob.elem_evals() == 2 * patch_total);
  CHECK(prob.elem_evals() < 2LL * n * prob.mesh().num_elements());
}

TEST_CASE("central differences are exact on the p = 2 quadratic energy") {
  auto mesh = make_interval_mesh(-1.0, 1.0, 20);
  auto spec = constant_problem(2.0, mesh, -10.0, 0.0);
  Problem1D prob(mesh, spec);
  const int n = prob.num_free();
  auto x = plap_test::random_vector(n, 77, -0.5, 0.5);
  std::vector<double> ge(n), gf(n);
  prob.gradient_exact(x, ge);
  prob.gradient_fd(x, gf);
  for (int i = 0; i < n; ++i) CHECK(std::abs(ge[i] - gf[i]) <= 1e-9);
}

TEST_CASE("apply_dirichlet splits nodes and injects g") {
  auto mesh = make_structured_trimesh(DomainKind::LShape, 0);
  auto spec = constant_problem(3.0, mesh, -10.0, 0.0);
  auto setup = apply_dirichlet(spec, mesh);
  CHECK(setup.dofs.num_free() == 5);
  CHECK(setup.dofs.fixed.size() == 16);

  auto m1 = make_interval_mesh(0.0, 1.0, 10);
  ProblemSpec s1;
  s1.p = 2.0;
  s1.f_nodal.assign(m1.num_nodes(), 0.0);
  s1.g[0] = 1.0;
  s1.g[11] = 2.0;
  auto d1 = apply_dirichlet(s1, m1);
  CHECK(d1.v0[0] == 1.0);
  CHECK(d1.v0[11] == 2.0);
  std::vector<int> expect_free;
  for (int i = 1; i <= 10; ++i) expect_free.push_back(i);
  CHECK(d1.dofs.free == expect_free);

  // embed(restrict(v)) is the identity for consistent v
  auto v = plap_test::random_vector(m1.num_nodes(), 4);
  v[0] = 1.0;
  v[11] = 2.0;
  auto x = d1.dofs.restrict_to_free(v);
  auto v2 = d1.v0;
  d1.dofs.embed_free(x, v2);
  CHECK(v2 == v);

  // g missing on one boundary node
  ProblemSpec bad = s1;
  bad.g.erase(11);
  REQUIRE_THROWS_AS(apply_dirichlet(bad, m1), std::invalid_argument);
}

TEST_CASE("energy is homogeneous of degree p for f = 0, g = 0") {
  auto mesh = make_structured_trimesh(DomainKind::LShape, 1);
  for (double p : {1.8, 2.0, 3.0}) {
    ProblemSpec spec = constant_problem(p, mesh, 0.0, 0.0);
    auto b = load_vector(mass_matrix_2d(mesh), spec.f_nodal);
    auto setup = apply_dirichlet(spec, mesh);
    auto v = setup.v0;
    auto x = plap_test::random_vector(setup.dofs.num_free(), 21);
    setup.dofs.embed_free(x, v);
    const double j1 = energy_2d(mesh, spec, b, v);
    for (double alpha : {0.5, 2.0, -1.5}) {
      auto va = v;
      for (double& t : va) t *= alpha;
      const double ja = energy_2d(mesh, spec, b, va);
      CHECK(ja == Approx(std::pow(std::abs(alpha), p) * j1).epsilon(1e-10));
    }
  }
}

TEST_CASE("energy is convex for p >= 2") {
  auto mesh = make_interval_mesh(-1.0, 1.0, 15);
  for (double p : {2.0, 3.0}) {
    auto spec = constant_problem(p, mesh, -10.0, 0.0);
    auto b = load_vector(mass_matrix_1d(mesh), spec.f_nodal);
    for (unsigned seed : {1u, 2u, 3u}) {
      auto v = plap_test::random_vector(mesh.num_nodes(), seed);
      auto w = plap_test::random_vector(mesh.num_nodes(), seed + 50);
      for (double lambda : {0.25, 0.5, 0.9}) {
        std::vector<double> mix(mesh.num_nodes());
        for (int i = 0; i < mesh.num_nodes(); ++i)
          mix[i] = lambda * v[i] + (1.0 - lambda) * w[i];
        const double lhs = energy_1d(mesh, spec, b, mix);
        const double rhs = lambda * energy_1d(mesh, spec, b, v) +
                           (1.0 - lambda) * energy_1d(mesh, spec, b, w);
        CHECK(lhs <= rhs + 1e-10);
      }
    }
  }
}

TEST_CASE("reference_solution_1d closed forms") {
  auto r3 = reference_solution_1d(3.0, -10.0);
  CHECK(r3.energy == Approx(-16.0 / 3.0 * std::sqrt(10.0)).epsilon(1e-14));
  CHECK(r3.energy == Approx(-16.8655).margin(5e-5));
  CHECK(r3.value(1.0) == Approx(0.0).margin(1e-14));
  CHECK(r3.value(0.0) == Approx(-2.0 / 3.0 * std::sqrt(10.0)).epsilon(1e-13));

  auto r2 = reference_solution_1d(2.0, -10.0);
  // u = 5 (x^2 - 1)
  for (double x : {-0.7, 0.0, 0.3, 1.0}) CHECK(r2.value(x) == Approx(5.0 * (x * x - 1.0)).margin(1e-12));
  CHECK(r2.energy == Approx(-100.0 / 3.0).epsilon(1e-14));

  for (double p : {1.8, 2.0, 3.0}) {
    auto ref = reference_solution_1d(p, -10.0);
    CHECK(quadrature_energy(ref) == Approx(ref.energy).margin(1e-8));
  }

  REQUIRE_THROWS_AS(reference_solution_1d(3.0, -10.0, -1.0, 2.0), std::invalid_argument);
  REQUIRE_THROWS_AS(reference_solution_1d(1.0, -10.0), std::invalid_argument);
}

TEST_CASE("regularized energy stays consistent with its gradient") {
  auto mesh = make_interval_mesh(-1.0, 1.0, 12);
  auto spec = constant_problem(1.8, mesh, -10.0, 0.0);
  spec.reg_eps = 1e-3;
  Problem1D prob(mesh, spec);
  const int n = prob.num_free();
  auto x = plap_test::random_vector(n, 31);
  std::vector<double> ge(n), gf(n);
  prob.gradient_exact(x, ge);
  prob.gradient_fd(x, gf);
  for (int i = 0; i < n; ++i)
    CHECK(std::abs(ge[i] - gf[i]) / (1.0 + std::abs(ge[i])) <= 1e-5);
}
