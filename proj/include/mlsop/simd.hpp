#pragma once

#include <cstddef>
#include <string_view>

// Data-parallel inner loops of the library: dot products, weighted dot
// products, axpy updates and elementwise integer powers over point columns.
// Scalar reference kernels always exist; an AVX2+FMA variant is selected at
// runtime when the CPU supports it. The two paths are equivalence-tested
// against each other (they may differ by rounding, not by contract).
//
// Selection: automatic on first use, overridable with the MLSOP_SIMD
// environment variable ("scalar" or "avx2") or force_backend() from code.

namespace mlsop::simd {

enum class Backend { scalar, avx2 };

struct KernelTable {
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum_i a[i] * b[i] * c[i]
  double (*dot3)(const double* a, const double* b, const double* c, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // acc[i] *= base[i]^exp  (exp >= 0; exp == 0 leaves acc unchanged)
  void (*pow_mul)(double* acc, const double* base, unsigned exp, std::size_t n);
};

/// Active kernel table (initialized on first call).
const KernelTable& kernels();

/// Backend behind kernels().
Backend active_backend();

/// Override the automatic choice (used by the equivalence tests).
/// Requesting avx2 on a CPU without it falls back to scalar.
void force_backend(Backend b);

std::string_view backend_name(Backend b);

/// True when the CPU can run the AVX2 variant.
bool cpu_has_avx2();

namespace detail {
extern const KernelTable scalar_table;
extern const KernelTable avx2_table;  // valid only if cpu_has_avx2()
}  // namespace detail

}  // namespace mlsop::simd
