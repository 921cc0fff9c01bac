#pragma once

#include <cstddef>
#include <string>

// Dense level-1/level-2 kernels used by every solver inner loop.
//
// Each kernel has a scalar reference implementation with a fixed, ascending
// summation order, plus SIMD variants (AVX2 on x86-64, NEON on aarch64)
// selected once at startup. The active set can be overridden with the
// environment variable MPK_SIMD=scalar|avx2|neon|auto or programmatically
// with force_kernel_set(). Variants are equivalence-tested against the
// scalar reference; they may differ from it in the last bits only
// (reassociated sums, fused multiply-add).

namespace mpk::kernels {

namespace scalar {
double dot(std::size_t n, const double* x, const double* y) noexcept;
void axpy(std::size_t n, double a, const double* x, double* y) noexcept;
void scal(std::size_t n, double a, double* x) noexcept;
// y += M*c with M column-major n-by-k, contiguous columns.
void gemv_colmajor(std::size_t n, std::size_t k, const double* m, const double* c,
                   double* y) noexcept;
}  // namespace scalar

#if defined(MPK_HAVE_AVX2)
namespace avx2 {
double dot(std::size_t n, const double* x, const double* y) noexcept;
void axpy(std::size_t n, double a, const double* x, double* y) noexcept;
void scal(std::size_t n, double a, double* x) noexcept;
void gemv_colmajor(std::size_t n, std::size_t k, const double* m, const double* c,
                   double* y) noexcept;
}  // namespace avx2
#endif

#if defined(MPK_HAVE_NEON)
namespace neon {
double dot(std::size_t n, const double* x, const double* y) noexcept;
void axpy(std::size_t n, double a, const double* x, double* y) noexcept;
void scal(std::size_t n, double a, double* x) noexcept;
void gemv_colmajor(std::size_t n, std::size_t k, const double* m, const double* c,
                   double* y) noexcept;
}  // namespace neon
#endif

enum class KernelSet { Scalar, Avx2, Neon };

KernelSet active_kernel_set() noexcept;
const char* kernel_set_name(KernelSet set) noexcept;
bool kernel_set_available(KernelSet set) noexcept;

// Overrides the automatic choice; throws std::invalid_argument if the set is
// not compiled in or not supported by this CPU.
void force_kernel_set(KernelSet set);
// Restores automatic selection (CPU detection, MPK_SIMD honored).
void reset_kernel_set();

// Dispatched entry points. All callers in the library go through these, so a
// single process always computes with one kernel set.
double dot(std::size_t n, const double* x, const double* y) noexcept;
void axpy(std::size_t n, double a, const double* x, double* y) noexcept;
void scal(std::size_t n, double a, double* x) noexcept;
void gemv_colmajor(std::size_t n, std::size_t k, const double* m, const double* c,
                   double* y) noexcept;
double nrm2(std::size_t n, const double* x) noexcept;

}  // namespace mpk::kernels
