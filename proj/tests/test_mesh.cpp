#include <catch2/catch.hpp>

#include <algorithm>
#include <cmath>
#include <set>

#include <plap/mesh.hpp>

using namespace plap;

TEST_CASE("make_interval_mesh basics") {
  auto m = make_interval_mesh(-1.0, 1.0, 1);
  REQUIRE(m.coords == std::vector<double>{-1.0, 0.0, 1.0});
  REQUIRE(m.h == 1.0);

  auto m2 = make_interval_mesh(0.0, 3.0, 2);
  REQUIRE(m2.coords == std::vector<double>{0.0, 1.0, 2.0, 3.0});
  REQUIRE(m2.h == 1.0);

  auto m3 = make_interval_mesh(-1.0, 1.0, 999);
  REQUIRE(m3.h == 0.002);
  REQUIRE(m3.num_nodes() == 1001);
  REQUIRE(m3.coords.front() == -1.0);
  REQUIRE(m3.coords.back() == 1.0);
  REQUIRE(std::is_sorted(m3.coords.begin(), m3.coords.end()));

  REQUIRE(boundary_nodes_of(make_interval_mesh(-1, 1, 1)) == std::vector<int>{0, 2});
}

TEST_CASE("make_interval_mesh rejects bad input") {
  REQUIRE_THROWS_AS(make_interval_mesh(1.0, -1.0, 5), std::invalid_argument);
  REQUIRE_THROWS_AS(make_interval_mesh(0.0, 0.0, 5), std::invalid_argument);
  REQUIRE_THROWS_AS(make_interval_mesh(-1.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("L-shape level 0 matches the reference counts") {
  auto mesh = make_structured_trimesh(DomainKind::LShape, 0);
  REQUIRE(mesh.num_nodes() == 21);
  REQUIRE(mesh.num_elements() == 24);
  REQUIRE(mesh.boundary_nodes.size() == 16);
  REQUIRE(mesh.num_nodes() - static_cast<int>(mesh.boundary_nodes.size()) == 5);
  REQUIRE(mesh.total_area() == Approx(3.0).margin(1e-12));
}

TEST_CASE("L-shape interior-node counts, levels 0..5") {
  const std::vector<int> expected = {5, 33, 161, 705, 2945, 12033};
  for (int level = 0; level <= 5; ++level) {
    auto mesh = make_structured_trimesh(DomainKind::LShape, level);
    int interior = mesh.num_nodes() - static_cast<int>(mesh.boundary_nodes.size());
    CHECK(interior == expected[level]);
  }
  auto level1 = make_structured_trimesh(DomainKind::LShape, 1);
  CHECK(level1.boundary_nodes.size() == 32);  // 65 nodes minus 33 interior
}

TEST_CASE("L-shape boundary detection agrees with the geometric predicate") {
  for (int level : {0, 1, 2}) {
    auto mesh = make_structured_trimesh(DomainKind::LShape, level);
    // interior of the L-shape: inside the big square and not in the closed
    // removed quadrant {x >= 0, y <= 0}
    std::set<int> geometric;
    for (int i = 0; i < mesh.num_nodes(); ++i) {
      const double x = mesh.nodes[i][0], y = mesh.nodes[i][1];
      const bool interior =
          x > -1.0 && x < 1.0 && y > -1.0 && y < 1.0 && !(x >= 0.0 && y <= 0.0);
      if (!interior) geometric.insert(i);
    }
    std::set<int> topological(mesh.boundary_nodes.begin(), mesh.boundary_nodes.end());
    CHECK(topological == geometric);
  }
}

TEST_CASE("unit square level 0") {
  auto mesh = make_structured_trimesh(DomainKind::UnitSquare, 0);
  REQUIRE(mesh.num_nodes() == 9);
  REQUIRE(mesh.num_elements() == 8);
  REQUIRE(mesh.total_area() == Approx(1.0).margin(1e-12));
}

TEST_CASE("structured mesh invariants") {
  for (auto [kind, level] : {std::pair{DomainKind::LShape, 0}, {DomainKind::LShape, 2},
                             {DomainKind::UnitSquare, 1}, {DomainKind::UnitSquare, 2}}) {
    auto mesh = make_structured_trimesh(kind, level);
    const double domain_area = kind == DomainKind::LShape ? 3.0 : 1.0;
    REQUIRE(mesh.total_area() == Approx(domain_area).margin(1e-12));

    for (int e = 0; e < mesh.num_elements(); ++e) {
      REQUIRE(mesh.areas[e] > 0.0);
      CHECK(std::abs(mesh.dphi_x[e][0] + mesh.dphi_x[e][1] + mesh.dphi_x[e][2]) < 1e-12);
      CHECK(std::abs(mesh.dphi_y[e][0] + mesh.dphi_y[e][1] + mesh.dphi_y[e][2]) < 1e-12);

      // Kronecker property: the affine function with gradient dphi[j] and
      // value 1 at vertex j takes value delta_ij at vertex i.
      const auto& en = mesh.elems2nodes[e];
      for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) {
          const double val = 1.0 +
                             mesh.dphi_x[e][j] * (mesh.nodes[en[i]][0] - mesh.nodes[en[j]][0]) +
                             mesh.dphi_y[e][j] * (mesh.nodes[en[i]][1] - mesh.nodes[en[j]][1]);
          const double expected = i == j ? 1.0 : 0.0;
          CHECK(std::abs(val - expected) < 1e-12);
        }
    }

    // node2elems is the exact inverse image of elems2nodes
    for (int e = 0; e < mesh.num_elements(); ++e)
      for (int j = 0; j < 3; ++j) {
        const auto& elems = mesh.node2elems[mesh.elems2nodes[e][j]];
        CHECK(std::find(elems.begin(), elems.end(), e) != elems.end());
      }
    std::size_t total = 0;
    for (const auto& elems : mesh.node2elems) total += elems.size();
    CHECK(total == 3 * static_cast<std::size_t>(mesh.num_elements()));
  }
}

TEST_CASE("nested node sets across consecutive levels") {
  for (auto kind : {DomainKind::LShape, DomainKind::UnitSquare}) {
    auto coarse = make_structured_trimesh(kind, 1);
    auto fine = make_structured_trimesh(kind, 2);
    std::set<std::pair<double, double>> fine_nodes;
    for (const auto& p : fine.nodes) fine_nodes.insert({p[0], p[1]});
    for (const auto& p : coarse.nodes) CHECK(fine_nodes.count({p[0], p[1]}) == 1);
  }
}

TEST_CASE("refine regenerates the next level") {
  auto coarse = make_structured_trimesh(DomainKind::LShape, 0);
  auto fine = refine(coarse);
  REQUIRE(fine.num_elements() == 96);
  REQUIRE(fine.num_nodes() == 65);

  auto direct = make_structured_trimesh(DomainKind::LShape, 1);
  REQUIRE(fine.nodes == direct.nodes);
  REQUIRE(fine.elems2nodes == direct.elems2nodes);

  // similarity ratio 1/2: every child area is a quarter of the parent's
  REQUIRE(fine.areas[0] == Approx(coarse.areas[0] / 4.0).epsilon(1e-14));

  auto finer = refine(fine);
  CHECK(finer.num_nodes() - static_cast<int>(finer.boundary_nodes.size()) == 161);
}

TEST_CASE("structured generation rejects bad input") {
  REQUIRE_THROWS_AS(make_structured_trimesh(DomainKind::Interval, 0), std::invalid_argument);
  REQUIRE_THROWS_AS(make_structured_trimesh(DomainKind::LShape, -1), std::invalid_argument);

  auto raw = make_trimesh_from({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
  REQUIRE_THROWS_AS(refine(raw), std::invalid_argument);  // no structured provenance
}
