#include <doctest.h>

#include <random>
#include <stdexcept>
#include <vector>

#include "thinfilm/simd/kernels.hpp"

using namespace thinfilm;

namespace {

std::vector<double> random_vec(std::mt19937& rng, std::size_t n, double lo = -1.0,
                               double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

struct BackendGuard {
  simd::Backend saved = simd::active_backend();
  ~BackendGuard() { simd::set_backend(saved); }
};

}  // namespace

TEST_CASE("scalar backend is always available") {
  CHECK(simd::backend_supported(simd::Backend::Scalar));
  BackendGuard guard;
  simd::set_backend(simd::Backend::Scalar);
  CHECK(simd::active_backend() == simd::Backend::Scalar);
}

TEST_CASE("kernel equivalence: scalar vs dispatched backend") {
  if (!simd::backend_supported(simd::Backend::Avx2)) {
    MESSAGE("avx2 not supported on this host; dispatch test degenerates to scalar");
  }
  BackendGuard guard;
  std::mt19937 rng(12345);
  for (std::size_t n : {0ul, 1ul, 3ul, 4ul, 7ul, 8ul, 17ul, 64ul, 1001ul}) {
    const auto x = random_vec(rng, n, -3.0, 3.0);
    const auto y = random_vec(rng, n, -3.0, 3.0);

    simd::set_backend(simd::Backend::Scalar);
    const double dot_s = simd::dot(x.data(), y.data(), n);
    const double abs_s = simd::abs_sum(x.data(), n);
    const double sqr_s = simd::sqr_sum(x.data(), n);
    const double max_s = simd::abs_max(x.data(), n);
    auto ax_s = y;
    simd::axpy(0.37, x.data(), ax_s.data(), n);

    if (simd::backend_supported(simd::Backend::Avx2))
      simd::set_backend(simd::Backend::Avx2);
    const double dot_v = simd::dot(x.data(), y.data(), n);
    const double abs_v = simd::abs_sum(x.data(), n);
    const double sqr_v = simd::sqr_sum(x.data(), n);
    const double max_v = simd::abs_max(x.data(), n);
    auto ax_v = y;
    simd::axpy(0.37, x.data(), ax_v.data(), n);

    const double tol = 1e-13 * (1.0 + static_cast<double>(n));
    CHECK(std::fabs(dot_v - dot_s) <= tol * (1.0 + std::fabs(dot_s)));
    CHECK(std::fabs(abs_v - abs_s) <= tol * (1.0 + abs_s));
    CHECK(std::fabs(sqr_v - sqr_s) <= tol * (1.0 + sqr_s));
    CHECK(max_v == max_s);  // max is order-independent and exact
    for (std::size_t i = 0; i < n; ++i)
      CHECK(std::fabs(ax_v[i] - ax_s[i]) <= 1e-15 * (1.0 + std::fabs(ax_s[i])));
  }
}

TEST_CASE("axpy accumulates in place") {
  BackendGuard guard;
  std::vector<double> x{1, 2, 3, 4, 5}, y{10, 10, 10, 10, 10};
  simd::axpy(2.0, x.data(), y.data(), 5);
  CHECK(y[0] == 12.0);
  CHECK(y[4] == 20.0);
}

TEST_CASE("setting an unsupported backend throws") {
  if (simd::backend_supported(simd::Backend::Avx2)) return;
  CHECK_THROWS_AS(simd::set_backend(simd::Backend::Avx2), std::invalid_argument);
}
