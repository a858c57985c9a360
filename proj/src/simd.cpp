#include "mlsop/simd.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace mlsop::simd {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double dot3_scalar(const double* a, const double* b, const double* c, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i] * c[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

// acc *= base^exp, exponentiation by squaring applied columnwise
void pow_mul_scalar(double* acc, const double* base, unsigned exp, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double r = 1.0, p = base[i];
    unsigned e = exp;
    while (e) {
      if (e & 1u) r *= p;
      e >>= 1u;
      if (e) p *= p;
    }
    acc[i] *= r;
  }
}

std::atomic<const KernelTable*> g_table{nullptr};

const KernelTable* pick_table() {
  Backend want = cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
  if (const char* env = std::getenv("MLSOP_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) want = Backend::scalar;
    if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) want = Backend::avx2;
  }
  return want == Backend::avx2 ? &detail::avx2_table : &detail::scalar_table;
}

}  // namespace

namespace detail {
const KernelTable scalar_table{dot_scalar, dot3_scalar, axpy_scalar, pow_mul_scalar};
}  // namespace detail

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& kernels() {
  const KernelTable* t = g_table.load(std::memory_order_acquire);
  if (!t) {
    t = pick_table();
    g_table.store(t, std::memory_order_release);
  }
  return *t;
}

Backend active_backend() {
  return &kernels() == &detail::avx2_table ? Backend::avx2 : Backend::scalar;
}

void force_backend(Backend b) {
  if (b == Backend::avx2 && !cpu_has_avx2()) b = Backend::scalar;
  g_table.store(b == Backend::avx2 ? &detail::avx2_table : &detail::scalar_table,
                std::memory_order_release);
}

std::string_view backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

}  // namespace mlsop::simd
