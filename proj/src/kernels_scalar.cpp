#include "mpk/kernels.hpp"

// Reference kernels. Loops run in ascending index order with a single
// accumulator so results are reproducible across runs of the same binary.

namespace mpk::kernels::scalar {

double dot(std::size_t n, const double* x, const double* y) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy(std::size_t n, double a, const double* x, double* y) noexcept {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scal(std::size_t n, double a, double* x) noexcept {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void gemv_colmajor(std::size_t n, std::size_t k, const double* m, const double* c,
                   double* y) noexcept {
  for (std::size_t j = 0; j < k; ++j) {
    const double* col = m + j * n;
    const double cj = c[j];
    for (std::size_t i = 0; i < n; ++i) y[i] += cj * col[i];
  }
}

}  // namespace mpk::kernels::scalar
