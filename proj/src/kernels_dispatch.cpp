#include "mpk/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace mpk::kernels {

namespace {

struct KernelTable {
  double (*dot)(std::size_t, const double*, const double*) noexcept;
  void (*axpy)(std::size_t, double, const double*, double*) noexcept;
  void (*scal)(std::size_t, double, double*) noexcept;
  void (*gemv)(std::size_t, std::size_t, const double*, const double*, double*) noexcept;
};

constexpr KernelTable kScalarTable{scalar::dot, scalar::axpy, scalar::scal,
                                   scalar::gemv_colmajor};

#if defined(MPK_HAVE_AVX2)
constexpr KernelTable kAvx2Table{avx2::dot, avx2::axpy, avx2::scal, avx2::gemv_colmajor};
#endif
#if defined(MPK_HAVE_NEON)
constexpr KernelTable kNeonTable{neon::dot, neon::axpy, neon::scal, neon::gemv_colmajor};
#endif

bool cpu_supports(KernelSet set) noexcept {
  switch (set) {
    case KernelSet::Scalar:
      return true;
    case KernelSet::Avx2:
#if defined(MPK_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case KernelSet::Neon:
#if defined(MPK_HAVE_NEON)
      return true;  // baseline on aarch64
#else
      return false;
#endif
  }
  return false;
}

KernelSet auto_select() noexcept {
  if (const char* env = std::getenv("MPK_SIMD"); env != nullptr && *env != '\0') {
    if (std::strcmp(env, "scalar") == 0) return KernelSet::Scalar;
    if (std::strcmp(env, "avx2") == 0 && cpu_supports(KernelSet::Avx2)) return KernelSet::Avx2;
    if (std::strcmp(env, "neon") == 0 && cpu_supports(KernelSet::Neon)) return KernelSet::Neon;
    // unknown or unavailable value falls through to detection
  }
  if (cpu_supports(KernelSet::Avx2)) return KernelSet::Avx2;
  if (cpu_supports(KernelSet::Neon)) return KernelSet::Neon;
  return KernelSet::Scalar;
}

const KernelTable& table_for(KernelSet set) noexcept {
  switch (set) {
#if defined(MPK_HAVE_AVX2)
    case KernelSet::Avx2:
      return kAvx2Table;
#endif
#if defined(MPK_HAVE_NEON)
    case KernelSet::Neon:
      return kNeonTable;
#endif
    default:
      return kScalarTable;
  }
}

std::atomic<KernelSet> g_active{auto_select()};

}  // namespace

KernelSet active_kernel_set() noexcept { return g_active.load(std::memory_order_relaxed); }

const char* kernel_set_name(KernelSet set) noexcept {
  switch (set) {
    case KernelSet::Scalar:
      return "scalar";
    case KernelSet::Avx2:
      return "avx2";
    case KernelSet::Neon:
      return "neon";
  }
  return "unknown";
}

bool kernel_set_available(KernelSet set) noexcept { return cpu_supports(set); }

void force_kernel_set(KernelSet set) {
  if (!cpu_supports(set)) {
    throw std::invalid_argument(std::string("kernel set not available on this machine: ") +
                                kernel_set_name(set));
  }
  g_active.store(set, std::memory_order_relaxed);
}

void reset_kernel_set() { g_active.store(auto_select(), std::memory_order_relaxed); }

double dot(std::size_t n, const double* x, const double* y) noexcept {
  return table_for(g_active.load(std::memory_order_relaxed)).dot(n, x, y);
}

void axpy(std::size_t n, double a, const double* x, double* y) noexcept {
  table_for(g_active.load(std::memory_order_relaxed)).axpy(n, a, x, y);
}

void scal(std::size_t n, double a, double* x) noexcept {
  table_for(g_active.load(std::memory_order_relaxed)).scal(n, a, x);
}

void gemv_colmajor(std::size_t n, std::size_t k, const double* m, const double* c,
                   double* y) noexcept {
  table_for(g_active.load(std::memory_order_relaxed)).gemv(n, k, m, c, y);
}

double nrm2(std::size_t n, const double* x) noexcept { return std::sqrt(dot(n, x, x)); }

}  // namespace mpk::kernels
