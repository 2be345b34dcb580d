#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "thinfilm/pwc.hpp"
#include "thinfilm/pwl.hpp"
#include "thinfilm/simd/kernels.hpp"

using namespace thinfilm;

namespace {

BoundaryConditions flux_bc(double Q, double U = 0, double PN = 0, double eta = 1) {
  return BoundaryConditions{Q, PN, U, eta, BcMode::MixedFluxOutlet, 0.0};
}

// Dense assembly of the full 2N-1 block system for residual checks.
struct DenseBlocks {
  std::size_t m;              // 2n-1
  std::vector<double> M, b;   // row-major
};

DenseBlocks dense_system(const PWCSystem& s) {
  const std::size_t n = s.n, m = 2 * n - 1;
  DenseBlocks d{m, std::vector<double>(m * m, 0.0), std::vector<double>(m, 0.0)};
  auto M = [&](std::size_t i, std::size_t j) -> double& { return d.M[i * m + j]; };
  // upper block: identity on gradients; rows 1..n-1 carry the +-1/dx pairs
  for (std::size_t k = 0; k < n; ++k) M(k, k) = 1.0;
  for (std::size_t k = 1; k < n; ++k) {
    M(k, n + k - 1) = 1.0 / s.widths[k];             // p_k column
    if (k + 1 < n) M(k, n + k) = -1.0 / s.widths[k]; // p_{k+1} column
  }
  // lower block: flux elimination rows
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double h3k = std::pow(s.heights[k], 3.0), h3k1 = std::pow(s.heights[k + 1], 3.0);
    M(n + k, k) = -h3k;
    M(n + k, k + 1) = h3k1;
  }
  for (std::size_t k = 0; k < n; ++k) d.b[k] = s.b_upper[k];
  for (std::size_t k = 0; k + 1 < n; ++k) d.b[n + k] = s.b_lower[k];
  return d;
}

}  // namespace

TEST_CASE("assemble_pwc: step geometry boundary entries and Schur data") {
  const HeightProfile bfs = build_profile(Bfs{2, 1, 8, 16});
  const PWCSystem s = assemble_pwc(bfs, flux_bc(1));
  CHECK(s.b_upper[0] == doctest::Approx(-1.5).epsilon(1e-15));
  CHECK(s.b_upper[1] == 0.0);
  // First Schur row sees only the second component: the flux BC row carries
  // no pressure entries, so alpha_0 = -h_1^3/dx_1.
  REQUIRE(s.alpha.size() == 1);
  CHECK(s.alpha[0] == doctest::Approx(-1.0 / 8).epsilon(1e-15));
  CHECK(s.b_lower[0] == 0.0);
}

TEST_CASE("assemble_pwc: two equal components") {
  const HeightProfile p{PiecewiseConstant{{0.0, 0.5, 1.0}, {1.0, 1.0}}};
  const PWCSystem s = assemble_pwc(p, flux_bc(1));
  CHECK(s.alpha[0] == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(s.b_lower[0] == 0.0);
}

TEST_CASE("assemble_pwc: wall-driven rhs entries") {
  const HeightProfile bfs = build_profile(Bfs{2, 1, 8, 16});
  const PWCSystem s = assemble_pwc(bfs, flux_bc(0, 1));
  CHECK(s.b_lower[0] == doctest::Approx(-6.0).epsilon(1e-15));  // 6 eta U (h1 - h0)
}

TEST_CASE("assemble_pwc rejects single components and analytic profiles") {
  const HeightProfile p{PiecewiseConstant{{0.0, 1.0}, {1.0}}};
  CHECK_THROWS_AS(assemble_pwc(p, flux_bc(1)), Error);
  CHECK_THROWS_AS(assemble_pwc(build_profile(LogisticGeom{2, 1, 32, 16}), flux_bc(1)), Error);
}

TEST_CASE("solve_pwc: step geometry is exact") {
  const HeightProfile bfs = build_profile(Bfs{2, 1, 8, 16});
  const PressureSolution sol = solve_pwc(bfs, flux_bc(1));
  CHECK(sol.values()[0] == doctest::Approx(108.0).epsilon(1e-12));
  CHECK(sol.values()[1] == doctest::Approx(96.0).epsilon(1e-12));
  CHECK(sol.values()[2] == 0.0);
}

TEST_CASE("solve_pwc: flat channel split into 8 components stays linear") {
  std::vector<double> knots(9), vals(8, 1.0);
  for (int i = 0; i <= 8; ++i) knots[i] = i / 8.0;
  const HeightProfile p{PiecewiseConstant{knots, vals}};
  const PressureSolution sol = solve_pwc(p, flux_bc(1));
  for (int i = 0; i <= 8; ++i)
    CHECK(sol.values()[i] == doctest::Approx(12.0 * (1.0 - knots[i])).epsilon(1e-12));
}

TEST_CASE("solve_pwc: pure Couette has zero pressure everywhere") {
  std::vector<double> knots{0, 0.25, 0.5, 1.0};
  const HeightProfile p{PiecewiseConstant{knots, {1.0, 1.0, 1.0}}};
  const PressureSolution sol = solve_pwc(p, flux_bc(1.0, 2.0));  // Q = U h / 2
  for (double v : sol.values()) CHECK(std::fabs(v) <= 1e-13);
}

TEST_CASE("solve_pwc: single component closed form") {
  const HeightProfile p{PiecewiseConstant{{0.0, 1.0}, {1.0}}};
  const PressureSolution sol = solve_pwc(p, flux_bc(1));
  CHECK(sol.values()[0] == doctest::Approx(12.0).epsilon(1e-14));
  CHECK(sol.values()[1] == 0.0);
}

TEST_CASE("dense residual of the full block system stays below 1e-9 |b|") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> hd(0.5, 2.5), wd(0.2, 1.5), qd(-2.0, 2.0);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng() % 60);
    std::vector<double> knots{0.0}, vals;
    for (std::size_t k = 0; k < n; ++k) {
      knots.push_back(knots.back() + wd(rng));
      vals.push_back(hd(rng));
    }
    const HeightProfile p{PiecewiseConstant{knots, vals}};
    const BoundaryConditions bc = flux_bc(qd(rng), qd(rng), qd(rng));
    const PWCSystem sys = assemble_pwc(p, bc);
    const PressureSolution sol = solve_pwc(sys);

    // x = [gradients; interior pressures]
    const DenseBlocks d = dense_system(sys);
    std::vector<double> x;
    for (std::size_t k = 0; k < n; ++k) x.push_back(sol.gradients()[k]);
    for (std::size_t k = 1; k < n; ++k) x.push_back(sol.values()[k]);
    double bmax = 0, rmax = 0;
    for (double v : d.b) bmax = std::max(bmax, std::fabs(v));
    for (std::size_t i = 0; i < d.m; ++i) {
      double r = -d.b[i];
      for (std::size_t j = 0; j < d.m; ++j) r += d.M[i * d.m + j] * x[j];
      rmax = std::max(rmax, std::fabs(r));
    }
    CHECK(rmax <= 1e-9 * std::max(bmax, 1.0));
  }
}

TEST_CASE("flux-elimination identity holds for all component pairs") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> hd(0.5, 2.5);
  std::vector<double> knots{0.0}, vals;
  const std::size_t n = 12;
  for (std::size_t k = 0; k < n; ++k) {
    knots.push_back(knots.back() + 0.5 + 0.1 * k);
    vals.push_back(hd(rng));
  }
  const HeightProfile p{PiecewiseConstant{knots, vals}};
  const BoundaryConditions bc = flux_bc(1.4, 0.6);
  const PressureSolution sol = solve_pwc(p, bc);
  double scale = 0;
  for (std::size_t k = 0; k < n; ++k)
    scale = std::max(scale, std::fabs(std::pow(vals[k], 3.0) * sol.gradients()[k]));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j) {
      const double lhs = std::pow(vals[k], 3.0) * sol.gradients()[k] -
                         std::pow(vals[j], 3.0) * sol.gradients()[j] +
                         6.0 * bc.eta * bc.U * (vals[j] - vals[k]);
      CHECK(std::fabs(lhs) <= 1e-9 * std::max(scale, 1.0));
    }
}

TEST_CASE("solve_pwc matches per-interval analytic integration") {
  // dp/dx on each component is (-12 eta Q + 6 eta U h)/h^3; accumulate from
  // the outlet.
  std::mt19937 rng(53);
  std::uniform_real_distribution<double> hd(0.6, 2.2);
  std::vector<double> knots{0.0}, vals;
  const std::size_t n = 9;
  for (std::size_t k = 0; k < n; ++k) {
    knots.push_back(knots.back() + 0.7);
    vals.push_back(hd(rng));
  }
  const HeightProfile p{PiecewiseConstant{knots, vals}};
  const BoundaryConditions bc = flux_bc(0.9, -0.4, 2.0, 1.3);
  const PressureSolution sol = solve_pwc(p, bc);

  std::vector<double> expect(n + 1);
  expect[n] = bc.P_N;
  for (std::size_t k = n; k-- > 0;) {
    const double h = vals[k];
    const double g = (-12 * bc.eta * bc.Q + 6 * bc.eta * bc.U * h) / (h * h * h);
    expect[k] = expect[k + 1] - g * (knots[k + 1] - knots[k]);
  }
  double scale = 0;
  for (double v : expect) scale = std::max(scale, std::fabs(v));
  for (std::size_t k = 0; k <= n; ++k)
    CHECK(std::fabs(sol.values()[k] - expect[k]) <= 1e-10 * scale);
}

TEST_CASE("pwc solve is backend-equivalent between scalar and simd paths") {
  if (!simd::backend_supported(simd::Backend::Avx2)) return;
  std::vector<double> knots{0.0}, vals;
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> hd(0.5, 2.0);
  for (int k = 0; k < 200; ++k) {
    knots.push_back(knots.back() + 0.1);
    vals.push_back(hd(rng));
  }
  const HeightProfile p{PiecewiseConstant{knots, vals}};
  const simd::Backend saved = simd::active_backend();
  simd::set_backend(simd::Backend::Scalar);
  const PressureSolution a = solve_pwc(p, flux_bc(1.1, 0.3));
  simd::set_backend(simd::Backend::Avx2);
  const PressureSolution b = solve_pwc(p, flux_bc(1.1, 0.3));
  simd::set_backend(saved);
  double scale = 0;
  for (double v : a.values()) scale = std::max(scale, std::fabs(v));
  for (std::size_t k = 0; k < a.values().size(); ++k)
    CHECK(std::fabs(a.values()[k] - b.values()[k]) <= 1e-12 * scale);
}
