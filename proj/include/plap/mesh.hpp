#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace plap {

enum class DomainKind { Interval, UnitSquare, LShape };

/// Uniform 1D mesh of (a, b) with n_interior internal nodes.
/// coords[i] = a + i*h with h = (b - a) / (n_interior + 1).
struct Mesh1D {
  double a = 0.0;
  double b = 1.0;
  int n_interior = 0;
  double h = 0.0;
  std::vector<double> coords;  // n_interior + 2, strictly increasing

  int num_nodes() const { return static_cast<int>(coords.size()); }
  int num_elements() const { return num_nodes() - 1; }
};

inline Mesh1D make_interval_mesh(double a, double b, int n_interior) {
  if (!(a < b)) throw std::invalid_argument("make_interval_mesh: requires a < b");
  if (n_interior < 1) throw std::invalid_argument("make_interval_mesh: requires n_interior >= 1");
  Mesh1D mesh;
  mesh.a = a;
  mesh.b = b;
  mesh.n_interior = n_interior;
  mesh.h = (b - a) / (n_interior + 1);
  mesh.coords.resize(n_interior + 2);
  for (int i = 0; i <= n_interior + 1; ++i) mesh.coords[i] = a + i * mesh.h;
  mesh.coords.front() = a;
  mesh.coords.back() = b;
  return mesh;
}

/// P1 triangulation with the precomputed per-element data the energy kernels
/// consume: element areas and the constant partial derivatives of the three
/// local basis functions (dphi_x, dphi_y), plus node-to-element adjacency and
/// the boundary node set.
struct TriMesh {
  std::vector<std::array<double, 2>> nodes;
  std::vector<std::array<int, 3>> elems2nodes;
  std::vector<double> areas;
  std::vector<std::array<double, 3>> dphi_x;
  std::vector<std::array<double, 3>> dphi_y;
  std::vector<int> boundary_nodes;             // sorted
  std::vector<std::vector<int>> node2elems;

  // Structured-mesh provenance; level < 0 for meshes of unknown origin
  // (e.g. read from a file), which cannot be refined.
  DomainKind kind = DomainKind::UnitSquare;
  int level = -1;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_elements() const { return static_cast<int>(elems2nodes.size()); }

  double total_area() const {
    double s = 0.0;
    for (double a : areas) s += a;
    return s;
  }

  int local_index(int elem, int node) const {
    const auto& en = elems2nodes[elem];
    for (int j = 0; j < 3; ++j)
      if (en[j] == node) return j;
    return -1;
  }
};

namespace detail {

// Fills areas, dphi tables, node2elems and boundary_nodes from nodes + elems2nodes.
// Boundary nodes are the endpoints of edges used by exactly one element.
inline void finalize_topology(TriMesh& mesh) {
  const int nt = mesh.num_elements();
  const int nn = mesh.num_nodes();
  mesh.areas.resize(nt);
  mesh.dphi_x.resize(nt);
  mesh.dphi_y.resize(nt);
  mesh.node2elems.assign(nn, {});

  std::vector<std::pair<int, int>> edges;
  edges.reserve(3 * static_cast<std::size_t>(nt));

  for (int e = 0; e < nt; ++e) {
    const auto& en = mesh.elems2nodes[e];
    for (int j = 0; j < 3; ++j) {
      if (en[j] < 0 || en[j] >= nn) throw std::invalid_argument("TriMesh: node index out of range");
      mesh.node2elems[en[j]].push_back(e);
      int a = en[j], b = en[(j + 1) % 3];
      edges.emplace_back(std::min(a, b), std::max(a, b));
    }
    const auto& p1 = mesh.nodes[en[0]];
    const auto& p2 = mesh.nodes[en[1]];
    const auto& p3 = mesh.nodes[en[2]];
    const double det = (p2[0] - p1[0]) * (p3[1] - p1[1]) - (p3[0] - p1[0]) * (p2[1] - p1[1]);
    if (det == 0.0) throw std::invalid_argument("TriMesh: degenerate element");
    mesh.areas[e] = 0.5 * std::abs(det);
    mesh.dphi_x[e] = {(p2[1] - p3[1]) / det, (p3[1] - p1[1]) / det, (p1[1] - p2[1]) / det};
    mesh.dphi_y[e] = {(p3[0] - p2[0]) / det, (p1[0] - p3[0]) / det, (p2[0] - p1[0]) / det};
  }

  std::sort(edges.begin(), edges.end());
  std::vector<char> on_boundary(nn, 0);
  for (std::size_t i = 0; i < edges.size();) {
    std::size_t j = i;
    while (j < edges.size() && edges[j] == edges[i]) ++j;
    if (j - i == 1) {
      on_boundary[edges[i].first] = 1;
      on_boundary[edges[i].second] = 1;
    }
    i = j;
  }
  mesh.boundary_nodes.clear();
  for (int n = 0; n < nn; ++n)
    if (on_boundary[n]) mesh.boundary_nodes.push_back(n);
}

}  // namespace detail

/// Builds a TriMesh from raw geometry; used by mesh file readers and tests.
inline TriMesh make_trimesh_from(std::vector<std::array<double, 2>> nodes,
                                 std::vector<std::array<int, 3>> elems) {
  TriMesh mesh;
  mesh.nodes = std::move(nodes);
  mesh.elems2nodes = std::move(elems);
  detail::finalize_topology(mesh);
  return mesh;
}

/// Structured triangulation at refinement level L (grid spacing 2^-(L+1)):
///   UnitSquare: [0,1]^2.
///   LShape: (-1,1)^2 with the closed quadrant [0,1]x[-1,0] removed
///           (re-entrant corner at the origin).
/// Nodes are numbered lexicographically by (y, x); every grid square is split
/// by its lower-left to upper-right diagonal. Node sets are nested across
/// consecutive levels.
inline TriMesh make_structured_trimesh(DomainKind kind, int level) {
  if (kind == DomainKind::Interval)
    throw std::invalid_argument("make_structured_trimesh: use make_interval_mesh for 1D domains");
  if (level < 0 || level > 13)
    throw std::invalid_argument("make_structured_trimesh: level out of supported range [0, 13]");

  const int m = 1 << (level + 1);  // grid cells per unit length
  const double h = 1.0 / m;
  const bool lshape = (kind == DomainKind::LShape);
  const int cells = lshape ? 2 * m : m;
  const double origin = lshape ? -1.0 : 0.0;

  // For the L-shape, grid node (i, j) has x > 0 iff i > m and y < 0 iff j < m;
  // cells with lower-left (i, j), i >= m, j < m lie in the removed quadrant.
  auto keep_node = [&](int i, int j) { return !lshape || !(i > m && j < m); };
  auto keep_cell = [&](int i, int j) { return !lshape || !(i >= m && j < m); };

  TriMesh mesh;
  mesh.kind = kind;
  mesh.level = level;

  std::vector<int> id(static_cast<std::size_t>(cells + 1) * (cells + 1), -1);
  auto gid = [&](int i, int j) { return static_cast<std::size_t>(j) * (cells + 1) + i; };
  for (int j = 0; j <= cells; ++j)
    for (int i = 0; i <= cells; ++i)
      if (keep_node(i, j)) {
        id[gid(i, j)] = mesh.num_nodes();
        mesh.nodes.push_back({origin + i * h, origin + j * h});
      }

  for (int j = 0; j < cells; ++j)
    for (int i = 0; i < cells; ++i) {
      if (!keep_cell(i, j)) continue;
      const int ll = id[gid(i, j)], lr = id[gid(i + 1, j)];
      const int ul = id[gid(i, j + 1)], ur = id[gid(i + 1, j + 1)];
      mesh.elems2nodes.push_back({ll, lr, ur});
      mesh.elems2nodes.push_back({ll, ur, ul});
    }

  detail::finalize_topology(mesh);
  return mesh;
}

/// Uniform refinement: each triangle is replaced by 4 congruent children.
/// Structured meshes are regenerated at level + 1, which guarantees nesting.
inline TriMesh refine(const TriMesh& mesh) {
  if (mesh.level < 0)
    throw std::invalid_argument("refine: mesh has no structured provenance");
  return make_structured_trimesh(mesh.kind, mesh.level + 1);
}

inline std::vector<int> boundary_nodes_of(const Mesh1D& mesh) {
  return {0, mesh.num_nodes() - 1};
}

inline std::vector<int> boundary_nodes_of(const TriMesh& mesh) { return mesh.boundary_nodes; }

}  // namespace plap
