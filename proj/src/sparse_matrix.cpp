#include "mpk/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mpk {

void SparseMatrix::validate() const {
  if (n < 0) throw std::invalid_argument("SparseMatrix: negative dimension");
  if (static_cast<int>(row_offsets.size()) != n + 1) {
    throw std::invalid_argument("SparseMatrix: row_offsets must have n+1 entries");
  }
  if (row_offsets[0] != 0) throw std::invalid_argument("SparseMatrix: row_offsets[0] must be 0");
  if (row_offsets[static_cast<std::size_t>(n)] != nnz()) {
    throw std::invalid_argument("SparseMatrix: row_offsets[n] must equal nnz");
  }
  if (col_indices.size() != values.size()) {
    throw std::invalid_argument("SparseMatrix: col_indices/values size mismatch");
  }
  for (int i = 0; i < n; ++i) {
    if (row_offsets[i] > row_offsets[i + 1]) {
      throw std::invalid_argument("SparseMatrix: row_offsets not non-decreasing at row " +
                                  std::to_string(i));
    }
    int prev = -1;
    for (int p = row_offsets[i]; p < row_offsets[i + 1]; ++p) {
      const int c = col_indices[static_cast<std::size_t>(p)];
      if (c < 0 || c >= n) {
        throw std::invalid_argument("SparseMatrix: column index out of range in row " +
                                    std::to_string(i));
      }
      if (c <= prev) {
        throw std::invalid_argument(
            "SparseMatrix: column indices not strictly increasing in row " + std::to_string(i));
      }
      prev = c;
    }
  }
}

double SparseMatrix::frobenius_norm() const noexcept {
  double s = 0.0;
  for (double v : values) s += v * v;
  return std::sqrt(s);
}

double SparseMatrix::max_abs_value() const noexcept {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double SparseMatrix::max_abs_diag() const noexcept {
  double m = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = at(i, i);
    m = std::max(m, std::abs(d));
  }
  return m;
}

double SparseMatrix::at(int row, int col) const noexcept {
  const int lo = row_offsets[static_cast<std::size_t>(row)];
  const int hi = row_offsets[static_cast<std::size_t>(row) + 1];
  const auto begin = col_indices.begin() + lo;
  const auto end = col_indices.begin() + hi;
  const auto it = std::lower_bound(begin, end, col);
  if (it != end && *it == col) {
    return values[static_cast<std::size_t>(lo + (it - begin))];
  }
  return 0.0;
}

SparseMatrix from_triplets(int n, std::vector<Triplet> entries) {
  for (const Triplet& t : entries) {
    if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n) {
      throw std::invalid_argument("from_triplets: entry out of range");
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseMatrix a;
  a.n = n;
  a.row_offsets.assign(static_cast<std::size_t>(n) + 1, 0);
  std::size_t i = 0;
  while (i < entries.size()) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < entries.size() && entries[j].row == entries[i].row &&
           entries[j].col == entries[i].col) {
      sum += entries[j].value;
      ++j;
    }
    a.col_indices.push_back(entries[i].col);
    a.values.push_back(sum);
    a.row_offsets[static_cast<std::size_t>(entries[i].row) + 1]++;
    i = j;
  }
  for (int r = 0; r < n; ++r) a.row_offsets[static_cast<std::size_t>(r) + 1] += a.row_offsets[static_cast<std::size_t>(r)];
  return a;
}

void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
  if (static_cast<int>(x.size()) != a.n || static_cast<int>(y.size()) != a.n) {
    throw std::invalid_argument("spmv: dimension mismatch");
  }
  for (int i = 0; i < a.n; ++i) {
    double s = 0.0;
    for (int p = a.row_offsets[static_cast<std::size_t>(i)];
         p < a.row_offsets[static_cast<std::size_t>(i) + 1]; ++p) {
      s += a.values[static_cast<std::size_t>(p)] * x[static_cast<std::size_t>(a.col_indices[static_cast<std::size_t>(p)])];
    }
    y[static_cast<std::size_t>(i)] = s;
  }
}

std::vector<double> spmv(const SparseMatrix& a, std::span<const double> x) {
  std::vector<double> y(static_cast<std::size_t>(a.n));
  spmv(a, x, y);
  return y;
}

}  // namespace mpk
