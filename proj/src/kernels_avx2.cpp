#include "mpk/kernels.hpp"

#if defined(MPK_HAVE_AVX2)

#include <immintrin.h>

namespace mpk::kernels::avx2 {

namespace {

inline double hsum(__m256d v) noexcept {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

}  // namespace

double dot(std::size_t n, const double* x, const double* y) noexcept {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  __m256d acc3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
    acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 8), _mm256_loadu_pd(y + i + 8), acc2);
    acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 12), _mm256_loadu_pd(y + i + 12), acc3);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  }
  acc0 = _mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3));
  double s = hsum(acc0);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy(std::size_t n, double a, const double* x, double* y) noexcept {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d y0 = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    __m256d y1 = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4));
    _mm256_storeu_pd(y + i, y0);
    _mm256_storeu_pd(y + i + 4, y1);
  }
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void scal(std::size_t n, double a, double* x) noexcept {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) x[i] *= a;
}

void gemv_colmajor(std::size_t n, std::size_t k, const double* m, const double* c,
                   double* y) noexcept {
  // Columns are processed four at a time so each pass over y folds in four
  // coefficients, cutting y traffic relative to repeated axpy.
  std::size_t j = 0;
  for (; j + 4 <= k; j += 4) {
    const double* c0 = m + (j + 0) * n;
    const double* c1 = m + (j + 1) * n;
    const double* c2 = m + (j + 2) * n;
    const double* c3 = m + (j + 3) * n;
    const __m256d a0 = _mm256_set1_pd(c[j + 0]);
    const __m256d a1 = _mm256_set1_pd(c[j + 1]);
    const __m256d a2 = _mm256_set1_pd(c[j + 2]);
    const __m256d a3 = _mm256_set1_pd(c[j + 3]);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
      __m256d acc = _mm256_loadu_pd(y + i);
      acc = _mm256_fmadd_pd(a0, _mm256_loadu_pd(c0 + i), acc);
      acc = _mm256_fmadd_pd(a1, _mm256_loadu_pd(c1 + i), acc);
      acc = _mm256_fmadd_pd(a2, _mm256_loadu_pd(c2 + i), acc);
      acc = _mm256_fmadd_pd(a3, _mm256_loadu_pd(c3 + i), acc);
      _mm256_storeu_pd(y + i, acc);
    }
    for (; i < n; ++i) {
      y[i] += c[j] * c0[i] + c[j + 1] * c1[i] + c[j + 2] * c2[i] + c[j + 3] * c3[i];
    }
  }
  for (; j < k; ++j) axpy(n, c[j], m + j * n, y);
}

}  // namespace mpk::kernels::avx2

#endif  // MPK_HAVE_AVX2
