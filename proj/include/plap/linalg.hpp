#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace plap {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

/// Row-major dense matrix; backs the no-sparsity Hessian path and BFGS.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, fill) {}

  static DenseMatrix identity(int n) {
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  void matvec(std::span<const double> x, std::span<double> y) const {
    for (int i = 0; i < rows_; ++i) {
      const double* row = a_.data() + static_cast<std::size_t>(i) * cols_;
      double s = 0.0;
      for (int j = 0; j < cols_; ++j) s += row[j] * x[j];
      y[i] = s;
    }
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

/// Structural nonzeros of a symmetric matrix in compressed-row form, plus an
/// optional structurally-orthogonal column grouping (used to recover whole
/// column groups from single finite-difference gradient evaluations).
struct SparsityPattern {
  int dim = 0;
  std::vector<int> row_offsets;  // dim + 1
  std::vector<int> col_indices;  // sorted within each row
  std::vector<int> coloring;     // one color per column; empty until colored
  int num_colors = 0;

  int nnz() const { return static_cast<int>(col_indices.size()); }

  bool has(int i, int j) const {
    auto first = col_indices.begin() + row_offsets[i];
    auto last = col_indices.begin() + row_offsets[i + 1];
    return std::binary_search(first, last, j);
  }
};

/// Symmetric sparse matrix sharing the compressed-row layout of SparsityPattern.
struct SparseSymMatrix {
  int dim = 0;
  std::vector<int> row_offsets;
  std::vector<int> col_indices;
  std::vector<double> values;

  int nnz() const { return static_cast<int>(col_indices.size()); }

  // Index of entry (i, j) in values, or -1 when structurally absent.
  int find(int i, int j) const {
    auto first = col_indices.begin() + row_offsets[i];
    auto last = col_indices.begin() + row_offsets[i + 1];
    auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) return -1;
    return static_cast<int>(it - col_indices.begin());
  }

  double at(int i, int j) const {
    int k = find(i, j);
    return k < 0 ? 0.0 : values[k];
  }

  void add(int i, int j, double v) {
    int k = find(i, j);
    if (k < 0) throw std::invalid_argument("SparseSymMatrix::add: entry outside pattern");
    values[k] += v;
  }

  void matvec(std::span<const double> x, std::span<double> y) const {
    for (int i = 0; i < dim; ++i) {
      double s = 0.0;
      for (int k = row_offsets[i]; k < row_offsets[i + 1]; ++k) s += values[k] * x[col_indices[k]];
      y[i] = s;
    }
  }
};

/// Builds a pattern from an (i, j) pair list; duplicates are merged.
/// Pairs are taken as given, so callers wanting symmetry pass both (i, j) and (j, i).
inline SparsityPattern pattern_from_pairs(int dim, std::vector<std::pair<int, int>> pairs) {
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  SparsityPattern pat;
  pat.dim = dim;
  pat.row_offsets.assign(dim + 1, 0);
  for (const auto& [i, j] : pairs) {
    if (i < 0 || i >= dim || j < 0 || j >= dim)
      throw std::invalid_argument("pattern_from_pairs: index out of range");
    ++pat.row_offsets[i + 1];
  }
  for (int i = 0; i < dim; ++i) pat.row_offsets[i + 1] += pat.row_offsets[i];
  pat.col_indices.reserve(pairs.size());
  for (const auto& [i, j] : pairs) pat.col_indices.push_back(j);  // pair order is row-major sorted
  return pat;
}

/// Zero-valued matrix with the structure of `pat`.
inline SparseSymMatrix matrix_from_pattern(const SparsityPattern& pat) {
  SparseSymMatrix m;
  m.dim = pat.dim;
  m.row_offsets = pat.row_offsets;
  m.col_indices = pat.col_indices;
  m.values.assign(pat.col_indices.size(), 0.0);
  return m;
}

inline bool pattern_is_symmetric(const SparsityPattern& pat) {
  for (int i = 0; i < pat.dim; ++i)
    for (int k = pat.row_offsets[i]; k < pat.row_offsets[i + 1]; ++k)
      if (!pat.has(pat.col_indices[k], i)) return false;
  return true;
}

/// A coloring is valid iff no row holds two columns of the same color.
inline bool coloring_is_valid(const SparsityPattern& pat) {
  if (static_cast<int>(pat.coloring.size()) != pat.dim) return false;
  std::vector<int> seen(pat.num_colors, -1);
  for (int i = 0; i < pat.dim; ++i) {
    for (int k = pat.row_offsets[i]; k < pat.row_offsets[i + 1]; ++k) {
      int c = pat.coloring[pat.col_indices[k]];
      if (c < 0 || c >= pat.num_colors) return false;
      if (seen[c] == i) return false;
      seen[c] = i;
    }
  }
  return true;
}

/// Greedy sequential coloring of the column-intersection graph: columns get
/// the smallest color not used by any earlier column sharing a nonzero row.
/// Deterministic (natural column order). Requires a symmetric pattern with a
/// full diagonal.
inline SparsityPattern color_columns(SparsityPattern pat) {
  for (int i = 0; i < pat.dim; ++i)
    if (!pat.has(i, i)) throw std::invalid_argument("color_columns: pattern must have a full diagonal");

  pat.coloring.assign(pat.dim, -1);
  std::vector<int> forbidden_stamp;  // forbidden_stamp[c] == col means color c is taken
  int max_color = -1;
  for (int col = 0; col < pat.dim; ++col) {
    // Rows touching this column are exactly row `col`'s entries (symmetry).
    for (int k = pat.row_offsets[col]; k < pat.row_offsets[col + 1]; ++k) {
      int row = pat.col_indices[k];
      for (int k2 = pat.row_offsets[row]; k2 < pat.row_offsets[row + 1]; ++k2) {
        int other = pat.col_indices[k2];
        int c = pat.coloring[other];
        if (c >= 0) forbidden_stamp[c] = col;
      }
    }
    int c = 0;
    while (c < static_cast<int>(forbidden_stamp.size()) && forbidden_stamp[c] == col) ++c;
    if (c > max_color) {
      max_color = c;
      forbidden_stamp.resize(max_color + 1, -1);
    }
    pat.coloring[col] = c;
  }
  pat.num_colors = max_color + 1;
  return pat;
}

/// Sub-pattern on the given sorted index subset, reindexed to 0..keep.size()-1.
/// Any coloring is dropped; callers recolor the restriction.
inline SparsityPattern restrict_pattern(const SparsityPattern& pat, std::span<const int> keep) {
  std::vector<int> map(pat.dim, -1);
  for (std::size_t r = 0; r < keep.size(); ++r) {
    if (keep[r] < 0 || keep[r] >= pat.dim) throw std::invalid_argument("restrict_pattern: index out of range");
    map[keep[r]] = static_cast<int>(r);
  }
  SparsityPattern out;
  out.dim = static_cast<int>(keep.size());
  out.row_offsets.assign(out.dim + 1, 0);
  for (int r = 0; r < out.dim; ++r) {
    int full = keep[r];
    for (int k = pat.row_offsets[full]; k < pat.row_offsets[full + 1]; ++k)
      if (map[pat.col_indices[k]] >= 0) ++out.row_offsets[r + 1];
  }
  for (int r = 0; r < out.dim; ++r) out.row_offsets[r + 1] += out.row_offsets[r];
  out.col_indices.reserve(out.row_offsets[out.dim]);
  for (int r = 0; r < out.dim; ++r) {
    int full = keep[r];
    for (int k = pat.row_offsets[full]; k < pat.row_offsets[full + 1]; ++k) {
      int j = map[pat.col_indices[k]];
      if (j >= 0) out.col_indices.push_back(j);  // stays sorted: map is monotone on keep
    }
  }
  return out;
}

}  // namespace plap
