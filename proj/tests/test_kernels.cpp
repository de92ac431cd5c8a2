#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lgclvo/kernels.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace lgclvo;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("scalar kernels match hand-computed values") {
  kern::set_backend(kern::Backend::scalar);
  const double a[] = {1.0, 2.0, 3.0};
  const double b[] = {4.0, -5.0, 6.0};
  CHECK(kern::dot(a, b, 3) == doctest::Approx(12.0));
  CHECK(kern::squared_distance(a, b, 3) == doctest::Approx(9.0 + 49.0 + 9.0));
  CHECK(kern::sum(a, 3) == doctest::Approx(6.0));

  double y[] = {1.0, 1.0, 1.0};
  kern::axpy(2.0, a, y, 3);
  CHECK(y[0] == doctest::Approx(3.0));
  CHECK(y[1] == doctest::Approx(5.0));
  CHECK(y[2] == doctest::Approx(7.0));
  kern::set_backend(kern::Backend::automatic);
}

TEST_CASE("avx2 backend agrees with scalar reference") {
  if (!kern::avx2_available()) {
    MESSAGE("AVX2 not available, skipping equivalence check");
    return;
  }
  // Odd lengths exercise the tail loops.
  for (std::size_t n : {0, 1, 3, 4, 7, 8, 17, 64, 1001}) {
    auto a = random_vec(n, 11 + n);
    auto b = random_vec(n, 23 + n);

    kern::set_backend(kern::Backend::scalar);
    const double dot_s = kern::dot(a.data(), b.data(), n);
    const double sq_s = kern::squared_distance(a.data(), b.data(), n);
    const double sum_s = kern::sum(a.data(), n);
    auto y_s = b;
    kern::axpy(0.37, a.data(), y_s.data(), n);

    kern::set_backend(kern::Backend::avx2);
    CHECK(kern::dot(a.data(), b.data(), n) == doctest::Approx(dot_s).epsilon(1e-12));
    CHECK(kern::squared_distance(a.data(), b.data(), n) ==
          doctest::Approx(sq_s).epsilon(1e-12));
    CHECK(kern::sum(a.data(), n) == doctest::Approx(sum_s).epsilon(1e-12));
    auto y_v = b;
    kern::axpy(0.37, a.data(), y_v.data(), n);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(y_v[i] == doctest::Approx(y_s[i]).epsilon(1e-14));
  }
  kern::set_backend(kern::Backend::automatic);
}

TEST_CASE("backend selection") {
  kern::set_backend(kern::Backend::scalar);
  CHECK(kern::active_backend() == kern::Backend::scalar);
  if (kern::avx2_available()) {
    kern::set_backend(kern::Backend::avx2);
    CHECK(kern::active_backend() == kern::Backend::avx2);
  }
  kern::set_backend(kern::Backend::automatic);
}
