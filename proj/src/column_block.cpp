#include "mpk/column_block.hpp"

#include <cmath>

#include "mpk/kernels.hpp"

namespace mpk {

double ColumnBlock::orthonormality_defect() const noexcept {
  const std::size_t m = cols();
  double worst = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      const double g = kernels::dot(n_, col(i).data(), col(j).data());
      const double target = (i == j) ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(g - target));
    }
  }
  return worst;
}

double ColumnBlock::frobenius_norm() const noexcept {
  return std::sqrt(kernels::dot(data_.size(), data_.data(), data_.data()));
}

}  // namespace mpk
