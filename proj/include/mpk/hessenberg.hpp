#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mpk {

// Growable dense column-major store for the Arnoldi coefficient matrix.
// Rows track the basis column count, columns the search-direction count;
// the standard shape at solve time is rows == cols + 1, but deflation can
// leave fewer rows, so the solver tolerates any shape.
class HessenbergStore {
 public:
  HessenbergStore() = default;

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

  [[nodiscard]] double at(std::size_t r, std::size_t c) const noexcept {
    return entries_[c * rows_ + r];
  }
  [[nodiscard]] std::span<const double> column(std::size_t c) const noexcept {
    return {entries_.data() + c * rows_, rows_};
  }
  [[nodiscard]] const std::vector<double>& entries() const noexcept { return entries_; }

  // Grows the row count, zero-padding existing columns at the bottom.
  void grow_rows(std::size_t new_rows);
  // Appends one column; its length must equal rows().
  void append_column(std::span<const double> col);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

struct LsqSolution {
  std::vector<double> y;
  double resnorm = 0.0;
  // True when the store was numerically rank-deficient and the minimum-norm
  // minimizer was returned; upstream treats it as a stagnation signal.
  bool rank_deficient = false;
};

// Solves min_y || beta*e1 - H*y ||_2 by dense QR of the small store. A
// rank-deficient or wide store falls back to an SVD-based minimum-norm solve.
LsqSolution hessenberg_lsq(const HessenbergStore& h, double beta);

// Incremental Householder QR against the fixed right-hand side beta*e1.
// Reflectors persist across grow_rows/append_column calls, so refreshing the
// residual estimate each iteration costs only the new columns. A column whose
// tail vanishes under the existing reflectors gains no pivot and solve()
// assigns it a zero coefficient; the attained residual still equals the
// least-squares minimum because such a column lies in the span of the pivot
// columns before it.
class HessenbergQr {
 public:
  explicit HessenbergQr(double beta);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return pivot_row_.size(); }
  [[nodiscard]] std::size_t rank() const noexcept { return rank_; }
  [[nodiscard]] bool rank_deficient() const noexcept { return rank_ < cols(); }

  // Grows the row count, zero-padding the right-hand side.
  void grow_rows(std::size_t new_rows);
  // Appends one column; its length must equal rows().
  void append_column(std::span<const double> col);

  // || beta*e1 - H*y ||_2 at the minimizer.
  [[nodiscard]] double resnorm() const noexcept;
  // The minimizer; non-pivot columns get zero coefficients.
  [[nodiscard]] std::vector<double> solve() const;

 private:
  struct Reflector {
    std::size_t start;
    std::vector<double> v;  // acts on rows [start, start + v.size())
    double two_over_vtv;
  };

  double beta_ = 0.0;
  std::size_t rows_ = 0;
  std::size_t rank_ = 0;
  double col_scale_ = 0.0;
  std::vector<Reflector> reflectors_;
  std::vector<std::vector<double>> r_cols_;  // pivot columns: rows [0, pivot], diagonal last
  std::vector<int> pivot_row_;               // -1 for non-pivot columns
  std::vector<double> qt_rhs_;
};

// Same solve on a raw column-major matrix; exposed for reuse and testing.
LsqSolution dense_lsq_min_norm(std::size_t rows, std::size_t cols,
                               std::span<const double> a_colmajor,
                               std::span<const double> rhs);

}  // namespace mpk
