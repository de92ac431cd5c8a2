#pragma once

#include <cstddef>

// Small dense kernels used in the hot loops (pairwise distances during
// graph construction, axpy updates inside the diffusion iteration and the
// filter). Scalar reference implementations always exist; an AVX2 variant
// is picked at runtime when the CPU supports it.
namespace lgclvo::kern {

enum class Backend { automatic, scalar, avx2 };

// Force a backend (tests use this to cross-check scalar vs SIMD).
// Requesting avx2 on a CPU without it throws.
void set_backend(Backend b);
Backend active_backend();
bool avx2_available();

double dot(const double* a, const double* b, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::size_t n);
double sum(const double* x, std::size_t n);

namespace detail {
struct KernelTable {
  double (*dot)(const double*, const double*, std::size_t);
  double (*squared_distance)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  double (*sum)(const double*, std::size_t);
};
const KernelTable& scalar_table();
const KernelTable* avx2_table();  // nullptr when not compiled in
}  // namespace detail

}  // namespace lgclvo::kern
