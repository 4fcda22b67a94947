#pragma once

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "plap/linalg.hpp"
#include "plap/mesh.hpp"

namespace plap {

using LoadVector = std::vector<double>;  // b = M * f_nodal

/// Tridiagonal 1D P1 mass matrix: h/3 at the corner diagonal entries,
/// 2h/3 at interior diagonal entries, h/6 on the off-diagonals.
inline SparseSymMatrix mass_matrix_1d(const Mesh1D& mesh) {
  const int n = mesh.num_nodes();
  const double h = mesh.h;
  SparseSymMatrix m;
  m.dim = n;
  m.row_offsets.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) m.row_offsets[i + 1] = m.row_offsets[i] + ((i == 0 || i == n - 1) ? 2 : 3);
  for (int i = 0; i < n; ++i) {
    if (i > 0) {
      m.col_indices.push_back(i - 1);
      m.values.push_back(h / 6.0);
    }
    m.col_indices.push_back(i);
    m.values.push_back((i == 0 || i == n - 1) ? h / 3.0 : 2.0 * h / 3.0);
    if (i < n - 1) {
      m.col_indices.push_back(i + 1);
      m.values.push_back(h / 6.0);
    }
  }
  return m;
}

/// Tridiagonal Hessian structure on the full (n+2)-dimensional node set;
/// in 1D only consecutive coefficients couple.
inline SparsityPattern hessian_sparsity_1d(const Mesh1D& mesh) {
  const int n = mesh.num_nodes();
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(3 * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (i > 0) pairs.emplace_back(i, i - 1);
    pairs.emplace_back(i, i);
    if (i < n - 1) pairs.emplace_back(i, i + 1);
  }
  return pattern_from_pairs(n, std::move(pairs));
}

/// Node adjacency extracted from elems2nodes alone: (i, j) is a structural
/// nonzero iff i == j or nodes i and j share a mesh edge.
inline SparsityPattern hessian_sparsity_2d(const TriMesh& mesh) {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(9 * static_cast<std::size_t>(mesh.num_elements()));
  for (const auto& en : mesh.elems2nodes)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) pairs.emplace_back(en[a], en[b]);
  return pattern_from_pairs(mesh.num_nodes(), std::move(pairs));
}

/// P1 mass matrix assembled from the local element matrices
/// (|T|/12) * [[2,1,1],[1,2,1],[1,1,2]]; its structure equals the mesh
/// adjacency pattern.
inline SparseSymMatrix mass_matrix_2d(const TriMesh& mesh) {
  SparseSymMatrix m = matrix_from_pattern(hessian_sparsity_2d(mesh));
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& en = mesh.elems2nodes[e];
    const double w = mesh.areas[e] / 12.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) m.add(en[a], en[b], (a == b) ? 2.0 * w : w);
  }
  return m;
}

inline LoadVector load_vector(const SparseSymMatrix& mass, std::span<const double> f_nodal) {
  if (static_cast<int>(f_nodal.size()) != mass.dim)
    throw std::invalid_argument("load_vector: f_nodal length does not match matrix dimension");
  LoadVector b(mass.dim);
  mass.matvec(f_nodal, b);
  return b;
}

}  // namespace plap
