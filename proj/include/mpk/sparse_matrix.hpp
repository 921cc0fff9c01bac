#pragma once

#include <span>
#include <vector>

namespace mpk {

// Square sparse operator in compressed-sparse-row layout. Within each row the
// column indices are strictly increasing; row_offsets[0] == 0 and
// row_offsets[n] == nnz.
struct SparseMatrix {
  int n = 0;
  std::vector<int> row_offsets;
  std::vector<int> col_indices;
  std::vector<double> values;

  [[nodiscard]] int nnz() const noexcept { return static_cast<int>(values.size()); }

  // Throws std::invalid_argument if the CSR invariants are violated.
  void validate() const;

  [[nodiscard]] double frobenius_norm() const noexcept;
  [[nodiscard]] double max_abs_value() const noexcept;
  // Largest |a_ii|; zero-length rows contribute nothing.
  [[nodiscard]] double max_abs_diag() const noexcept;
  // Returns the value at (row, col), 0 if not stored.
  [[nodiscard]] double at(int row, int col) const noexcept;
};

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

// Builds CSR from an unordered triplet list; duplicate entries are summed,
// columns sorted ascending within each row.
SparseMatrix from_triplets(int n, std::vector<Triplet> entries);

// y = A*x. Row-wise dot products accumulated in ascending column order so a
// single-threaded run is bit-reproducible. Throws on dimension mismatch.
void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y);
std::vector<double> spmv(const SparseMatrix& a, std::span<const double> x);

}  // namespace mpk
