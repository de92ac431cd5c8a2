#include "lgclvo/kernels.hpp"

#include <atomic>
#include <stdexcept>

namespace lgclvo::kern {

namespace detail {
#ifndef LGCLVO_HAVE_AVX2_TU
const KernelTable* avx2_table() { return nullptr; }
#endif
}  // namespace detail

namespace {

std::atomic<const detail::KernelTable*> g_table{nullptr};
std::atomic<Backend> g_backend{Backend::automatic};

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

const detail::KernelTable* resolve(Backend b) {
  switch (b) {
    case Backend::scalar:
      return &detail::scalar_table();
    case Backend::avx2: {
      const detail::KernelTable* t = detail::avx2_table();
      if (t == nullptr || !cpu_has_avx2())
        throw std::runtime_error("AVX2 backend not available on this CPU/build");
      return t;
    }
    case Backend::automatic:
    default: {
      const detail::KernelTable* t = detail::avx2_table();
      if (t != nullptr && cpu_has_avx2()) return t;
      return &detail::scalar_table();
    }
  }
}

const detail::KernelTable& table() {
  const detail::KernelTable* t = g_table.load(std::memory_order_acquire);
  if (t == nullptr) {
    t = resolve(g_backend.load());
    g_table.store(t, std::memory_order_release);
  }
  return *t;
}

}  // namespace

void set_backend(Backend b) {
  g_table.store(resolve(b), std::memory_order_release);
  g_backend.store(b);
}

Backend active_backend() {
  const detail::KernelTable* t = &table();
  return t == &detail::scalar_table() ? Backend::scalar : Backend::avx2;
}

bool avx2_available() { return detail::avx2_table() != nullptr && cpu_has_avx2(); }

double dot(const double* a, const double* b, std::size_t n) { return table().dot(a, b, n); }
double squared_distance(const double* a, const double* b, std::size_t n) {
  return table().squared_distance(a, b, n);
}
void axpy(double alpha, const double* x, double* y, std::size_t n) {
  table().axpy(alpha, x, y, n);
}
double sum(const double* x, std::size_t n) { return table().sum(x, n); }

}  // namespace lgclvo::kern
