#pragma once

#include <charconv>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "plap/linalg.hpp"
#include "plap/mesh.hpp"

namespace plap {

/// Shortest decimal representation that round-trips the exact double.
inline std::string format_double(double x) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

// Mesh text format:
//   nodes <N> <dim>      followed by N coordinate lines
//   elements <T> <k>     followed by T lines of k 0-based node indices
//   boundary <m>         followed by m 0-based node indices

inline void write_mesh(std::ostream& os, const Mesh1D& mesh) {
  os << "nodes " << mesh.num_nodes() << " 1\n";
  for (double x : mesh.coords) os << format_double(x) << "\n";
  os << "elements " << mesh.num_elements() << " 2\n";
  for (int e = 0; e < mesh.num_elements(); ++e) os << e << " " << e + 1 << "\n";
  os << "boundary 2\n0\n" << mesh.num_nodes() - 1 << "\n";
}

inline void write_mesh(std::ostream& os, const TriMesh& mesh) {
  os << "nodes " << mesh.num_nodes() << " 2\n";
  for (const auto& p : mesh.nodes) os << format_double(p[0]) << " " << format_double(p[1]) << "\n";
  os << "elements " << mesh.num_elements() << " 3\n";
  for (const auto& en : mesh.elems2nodes) os << en[0] << " " << en[1] << " " << en[2] << "\n";
  os << "boundary " << mesh.boundary_nodes.size() << "\n";
  for (int n : mesh.boundary_nodes) os << n << "\n";
}

namespace detail {

inline void expect_keyword(std::istream& is, const char* kw) {
  std::string tok;
  if (!(is >> tok) || tok != kw)
    throw std::runtime_error(std::string("mesh file: expected '") + kw + "', got '" + tok + "'");
}

}  // namespace detail

inline std::variant<Mesh1D, TriMesh> read_mesh(std::istream& is) {
  detail::expect_keyword(is, "nodes");
  int n_nodes = 0, dim = 0;
  if (!(is >> n_nodes >> dim) || n_nodes < 2 || (dim != 1 && dim != 2))
    throw std::runtime_error("mesh file: bad node header");

  if (dim == 1) {
    std::vector<double> coords(n_nodes);
    for (double& x : coords)
      if (!(is >> x)) throw std::runtime_error("mesh file: bad coordinate");
    detail::expect_keyword(is, "elements");
    int n_elems = 0, k = 0;
    if (!(is >> n_elems >> k) || k != 2 || n_elems != n_nodes - 1)
      throw std::runtime_error("mesh file: bad 1D element header");
    for (int e = 0; e < n_elems; ++e) {
      int a = 0, b = 0;
      if (!(is >> a >> b)) throw std::runtime_error("mesh file: bad element");
    }
    detail::expect_keyword(is, "boundary");
    int m = 0;
    if (!(is >> m)) throw std::runtime_error("mesh file: bad boundary header");
    for (int i = 0; i < m; ++i) {
      int n = 0;
      if (!(is >> n)) throw std::runtime_error("mesh file: bad boundary node");
    }
    Mesh1D mesh;
    mesh.coords = std::move(coords);
    mesh.a = mesh.coords.front();
    mesh.b = mesh.coords.back();
    mesh.n_interior = n_nodes - 2;
    mesh.h = (mesh.b - mesh.a) / (n_nodes - 1);
    return mesh;
  }

  std::vector<std::array<double, 2>> nodes(n_nodes);
  for (auto& p : nodes)
    if (!(is >> p[0] >> p[1])) throw std::runtime_error("mesh file: bad coordinate");
  detail::expect_keyword(is, "elements");
  int n_elems = 0, k = 0;
  if (!(is >> n_elems >> k) || k != 3) throw std::runtime_error("mesh file: bad 2D element header");
  std::vector<std::array<int, 3>> elems(n_elems);
  for (auto& en : elems)
    if (!(is >> en[0] >> en[1] >> en[2])) throw std::runtime_error("mesh file: bad element");
  detail::expect_keyword(is, "boundary");
  int m = 0;
  if (!(is >> m)) throw std::runtime_error("mesh file: bad boundary header");
  std::vector<int> boundary(m);
  for (int& n : boundary)
    if (!(is >> n)) throw std::runtime_error("mesh file: bad boundary node");

  TriMesh mesh = make_trimesh_from(std::move(nodes), std::move(elems));
  mesh.boundary_nodes = std::move(boundary);
  std::sort(mesh.boundary_nodes.begin(), mesh.boundary_nodes.end());
  return mesh;
}

/// Coordinate-list dump of the structural nonzeros, "<i> <j>" per line.
inline void write_sparsity(std::ostream& os, const SparsityPattern& pat) {
  for (int i = 0; i < pat.dim; ++i)
    for (int k = pat.row_offsets[i]; k < pat.row_offsets[i + 1]; ++k)
      os << i << " " << pat.col_indices[k] << "\n";
}

// Solution exports, one node per line in mesh node order.

inline void write_solution_csv(std::ostream& os, const Mesh1D& mesh, std::span<const double> u) {
  os << "x,u\n";
  for (int i = 0; i < mesh.num_nodes(); ++i)
    os << format_double(mesh.coords[i]) << "," << format_double(u[i]) << "\n";
}

inline void write_solution_csv(std::ostream& os, const TriMesh& mesh, std::span<const double> u) {
  os << "x,y,u\n";
  for (int i = 0; i < mesh.num_nodes(); ++i)
    os << format_double(mesh.nodes[i][0]) << "," << format_double(mesh.nodes[i][1]) << ","
       << format_double(u[i]) << "\n";
}

}  // namespace plap
