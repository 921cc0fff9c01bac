#include "mpk/kernels.hpp"

#if defined(MPK_HAVE_NEON)

#include <arm_neon.h>

namespace mpk::kernels::neon {

double dot(std::size_t n, const double* x, const double* y) noexcept {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  float64x2_t acc2 = vdupq_n_f64(0.0);
  float64x2_t acc3 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(x + i), vld1q_f64(y + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
    acc2 = vfmaq_f64(acc2, vld1q_f64(x + i + 4), vld1q_f64(y + i + 4));
    acc3 = vfmaq_f64(acc3, vld1q_f64(x + i + 6), vld1q_f64(y + i + 6));
  }
  for (; i + 2 <= n; i += 2) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(x + i), vld1q_f64(y + i));
  }
  acc0 = vaddq_f64(vaddq_f64(acc0, acc1), vaddq_f64(acc2, acc3));
  double s = vgetq_lane_f64(acc0, 0) + vgetq_lane_f64(acc0, 1);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy(std::size_t n, double a, const double* x, double* y) noexcept {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
    vst1q_f64(y + i + 2, vfmaq_f64(vld1q_f64(y + i + 2), va, vld1q_f64(x + i + 2)));
  }
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void scal(std::size_t n, double a, double* x) noexcept {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(x + i, vmulq_f64(va, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) x[i] *= a;
}

void gemv_colmajor(std::size_t n, std::size_t k, const double* m, const double* c,
                   double* y) noexcept {
  std::size_t j = 0;
  for (; j + 2 <= k; j += 2) {
    const double* c0 = m + (j + 0) * n;
    const double* c1 = m + (j + 1) * n;
    const float64x2_t a0 = vdupq_n_f64(c[j + 0]);
    const float64x2_t a1 = vdupq_n_f64(c[j + 1]);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
      float64x2_t acc = vld1q_f64(y + i);
      acc = vfmaq_f64(acc, a0, vld1q_f64(c0 + i));
      acc = vfmaq_f64(acc, a1, vld1q_f64(c1 + i));
      vst1q_f64(y + i, acc);
    }
    for (; i < n; ++i) y[i] += c[j] * c0[i] + c[j + 1] * c1[i];
  }
  for (; j < k; ++j) axpy(n, c[j], m + j * n, y);
}

}  // namespace mpk::kernels::neon

#endif  // MPK_HAVE_NEON
