#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace mpk {

// Dense n-by-m collection of column vectors, stored column-major and grown by
// appending columns. Used for the orthonormal basis, the search-direction
// store, and candidate blocks.
class ColumnBlock {
 public:
  ColumnBlock() = default;
  explicit ColumnBlock(std::size_t n, std::size_t m = 0)
      : n_(n), data_(n * m, 0.0) {}

  [[nodiscard]] std::size_t rows() const noexcept { return n_; }
  [[nodiscard]] std::size_t cols() const noexcept { return n_ == 0 ? 0 : data_.size() / n_; }

  [[nodiscard]] std::span<double> col(std::size_t j) noexcept {
    return {data_.data() + j * n_, n_};
  }
  [[nodiscard]] std::span<const double> col(std::size_t j) const noexcept {
    return {data_.data() + j * n_, n_};
  }

  [[nodiscard]] double* data() noexcept { return data_.data(); }
  [[nodiscard]] const double* data() const noexcept { return data_.data(); }

  void reserve_cols(std::size_t m) { data_.reserve(n_ * m); }

  void append_column(std::span<const double> v) {
    if (v.size() != n_) throw std::invalid_argument("ColumnBlock: column length mismatch");
    data_.insert(data_.end(), v.begin(), v.end());
  }

  void append_zero_column() { data_.resize(data_.size() + n_, 0.0); }

  // Keeps only the leading m columns.
  void truncate_cols(std::size_t m) {
    if (m < cols()) data_.resize(n_ * m);
  }

  // max_ij |block^T block - I|, the orthonormality defect.
  [[nodiscard]] double orthonormality_defect() const noexcept;

  [[nodiscard]] double frobenius_norm() const noexcept;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

}  // namespace mpk
