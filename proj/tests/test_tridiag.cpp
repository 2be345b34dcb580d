#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "test_support.hpp"
#include "thinfilm/tridiag.hpp"

using namespace thinfilm;

namespace {

// Random system with the sign structure the PWC Schur complement produces:
// positive off-diagonals, negative diagonal dominated by its neighbours.
void random_pwc_like(std::mt19937& rng, std::size_t n, std::vector<double>& diag,
                     std::vector<double>& off) {
  std::uniform_real_distribution<double> hd(0.5, 2.0), xd(0.5, 2.0);
  std::vector<double> g(n + 1);
  for (auto& v : g) {
    const double h = hd(rng), dx = xd(rng);
    v = h * h * h / dx;
  }
  diag.assign(n, 0.0);
  off.assign(n - 1, 0.0);
  diag[0] = -g[1];
  for (std::size_t i = 1; i < n; ++i) diag[i] = -(g[i] + g[i + 1]);
  for (std::size_t i = 0; i + 1 < n; ++i) off[i] = g[i + 1];
}

double max_abs(const std::vector<long double>& v) {
  double m = 0;
  for (auto x : v) m = std::max(m, std::fabs(static_cast<double>(x)));
  return m;
}

}  // namespace

TEST_CASE("1x1 inverse") {
  const std::vector<double> diag{2.0};
  const TridiagInverse k(diag, std::span<const double>{});
  CHECK(k.element(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("2x2 inverse against the hand-computed value") {
  const std::vector<double> diag{2.0, 2.0}, off{1.0};
  const TridiagInverse k(diag, off);
  CHECK(k.element(0, 0) == doctest::Approx(2.0 / 3).epsilon(1e-14));
  CHECK(k.element(1, 1) == doctest::Approx(2.0 / 3).epsilon(1e-14));
  CHECK(k.element(0, 1) == doctest::Approx(-1.0 / 3).epsilon(1e-14));
  CHECK(k.element(1, 0) == doctest::Approx(-1.0 / 3).epsilon(1e-14));
}

TEST_CASE("random n=16 matches the dense oracle elementwise") {
  std::mt19937 rng(99);
  std::vector<double> diag, off;
  random_pwc_like(rng, 16, diag, off);
  const TridiagInverse k(diag, off);
  const auto dense = oracle::tridiag_dense_inverse(diag, off);
  const double scale = max_abs(dense);
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t j = 0; j < 16; ++j)
      CHECK(std::fabs(k.element(i, j) - static_cast<double>(dense[i * 16 + j])) <=
            1e-10 * scale);
}

TEST_CASE("K * K^{-1} = I for a PWC-structured matrix") {
  std::mt19937 rng(5);
  std::vector<double> diag, off;
  const std::size_t n = 24;
  random_pwc_like(rng, n, diag, off);
  const TridiagInverse k(diag, off);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = diag[i] * k.element(i, j);
      if (i > 0) s += off[i - 1] * k.element(i - 1, j);
      if (i + 1 < n) s += off[i] * k.element(i + 1, j);
      CHECK(std::fabs(s - (i == j ? 1.0 : 0.0)) <= 1e-10);
    }
}

TEST_CASE("apply agrees with elementwise products") {
  std::mt19937 rng(17);
  std::vector<double> diag, off;
  const std::size_t n = 33;
  random_pwc_like(rng, n, diag, off);
  const TridiagInverse k(diag, off);
  std::uniform_real_distribution<double> vd(-2.0, 2.0);
  std::vector<double> v(n), y(n);
  for (auto& x : v) x = vd(rng);
  k.apply(v, y);
  for (std::size_t i = 0; i < n; ++i) {
    long double acc = 0;
    for (std::size_t j = 0; j < n; ++j) acc += (long double)k.element(i, j) * v[j];
    CHECK(std::fabs(y[i] - static_cast<double>(acc)) <= 1e-11 * (1 + std::fabs(y[i])));
  }
}

TEST_CASE("underflowing partial products fall back to running products") {
  // S_k ~ 1e-5 each, so T underflows past ~56 entries at n = 64.
  const std::size_t n = 64;
  std::vector<double> diag(n, -1.0), off(n - 1, 1e-5);
  const TridiagInverse k(diag, off);
  CHECK_FALSE(k.ratio_path());
  const auto dense = oracle::tridiag_dense_inverse(diag, off);
  const double scale = max_abs(dense);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double got = k.element(i, j);
      CHECK(std::isfinite(got));
      CHECK(std::fabs(got - static_cast<double>(dense[i * n + j])) <= 1e-10 * scale);
    }
  std::vector<double> v(n, 1.0), y(n);
  k.apply(v, y);
  for (std::size_t i = 0; i < n; ++i) {
    long double acc = 0;
    for (std::size_t j = 0; j < n; ++j) acc += dense[i * n + j];
    CHECK(std::fabs(y[i] - static_cast<double>(acc)) <= 1e-10 * scale * n);
  }
}

TEST_CASE("singular matrix is reported, not silently inverted") {
  const std::vector<double> diag{1.0, 1.0}, off{1.0};
  CHECK_THROWS_AS(TridiagInverse(diag, off), Error);
}

TEST_CASE("acceptance-scale oracle: 200 random PWC-structured matrices up to n=64") {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<std::size_t> nd(2, 64);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = nd(rng);
    std::vector<double> diag, off;
    random_pwc_like(rng, n, diag, off);
    const TridiagInverse k(diag, off);
    const auto dense = oracle::tridiag_dense_inverse(diag, off);
    const double scale = max_abs(dense);
    double worst = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        worst = std::max(worst,
                         std::fabs(k.element(i, j) - static_cast<double>(dense[i * n + j])));
    CHECK(worst <= 1e-9 * scale);
  }
}
