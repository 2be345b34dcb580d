#include <doctest.h>

#include <cmath>

#include "test_support.hpp"
#include "thinfilm/analysis.hpp"
#include "thinfilm/pwl.hpp"

using namespace thinfilm;

namespace {
BoundaryConditions flux_bc(double Q, double U = 0, double PN = 0, double eta = 1) {
  return BoundaryConditions{Q, PN, U, eta, BcMode::MixedFluxOutlet, 0.0};
}
}  // namespace

TEST_CASE("sinusoid exact pressure: zeros, reference value, companion flux") {
  // zeros wherever sin(alpha x) = 0
  for (double x : {0.0, 0.5, 1.0})
    CHECK(sinusoid_exact_pressure(1, 0.5, 2 * M_PI, 3, 1, x) ==
          doctest::Approx(0.0).scale(1).epsilon(1e-12));
  // x = 1/4: |p| = 4/pi (numerator 18, denominator 4.5 pi); positive with
  // the flux-consistent sign.
  CHECK(sinusoid_exact_pressure(1, 0.5, 2 * M_PI, 3, 1, 0.25) ==
        doctest::Approx(4.0 / M_PI).epsilon(1e-13));
  CHECK(sinusoid_companion_flux(1, 0.5, 3) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("sinusoid exact pressure is periodic: dP over one period vanishes") {
  const double p0 = sinusoid_exact_pressure(1, 0.5, 2 * M_PI, 3, 1, 0.0);
  const double p1 = sinusoid_exact_pressure(1, 0.5, 2 * M_PI, 3, 1, 1.0);
  CHECK(p1 - p0 == doctest::Approx(0.0).scale(1).epsilon(1e-13));
}

TEST_CASE("exact sinusoid solution carries the companion flux") {
  // Plug the exact p and h into the flux relation at sample points.
  const double H0 = 1, delta = 0.5, alpha = 2 * M_PI, U = 3, eta = 1;
  const double Q = sinusoid_companion_flux(H0, delta, U);
  for (double x : {0.1, 0.23, 0.37, 0.61, 0.83}) {
    const double h = H0 * (1 + delta * std::cos(alpha * x));
    const double dp = oracle::derivative(
        [&](double xx) { return sinusoid_exact_pressure(H0, delta, alpha, U, eta, xx); }, x, 1e-5);
    const double q = -(h * h * h * dp - 6 * eta * U * h) / (12 * eta);
    CHECK(q == doctest::Approx(Q).epsilon(1e-9));
  }
}

TEST_CASE("bfs exact pressure reproduces the hand-computed corner values") {
  const Bfs g{2, 1, 8, 16};
  const BoundaryConditions bc = flux_bc(1);
  CHECK(bfs_exact_pressure(g, bc, 0) == doctest::Approx(108.0));
  CHECK(bfs_exact_pressure(g, bc, 8) == doctest::Approx(96.0));
  CHECK(bfs_exact_pressure(g, bc, 16) == doctest::Approx(0.0).scale(1));
}

TEST_CASE("error_norms: zero field and the 3-4-5 example") {
  const ErrorNorms z = error_norms(std::vector<double>{0, 0, 0}, 0.5);
  CHECK(z.l1 == 0.0);
  CHECK(z.l2 == 0.0);
  CHECK(z.linf == 0.0);
  const ErrorNorms n = error_norms(std::vector<double>{3, 4}, 1.0);
  CHECK(n.l1 == doctest::Approx(7.0));
  CHECK(n.l2 == doctest::Approx(5.0));
  CHECK(n.linf == doctest::Approx(4.0));
}

TEST_CASE("loglog_fit recovers a known slope") {
  std::vector<double> x{1, 2, 4, 8}, y;
  for (double v : x) y.push_back(3.0 * v * v);
  const FitResult f = loglog_fit(x, y);
  CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.rms_residual <= 1e-12);
}

TEST_CASE("convergence: all three methods are second order on the sinusoid") {
  const SinusoidPeriodic g{1, 0.5, 2 * M_PI, 1};
  BoundaryConditions bc;
  bc.mode = BcMode::DirichletPressureDrop;
  bc.P_0 = 0;
  bc.P_N = 0;
  bc.U = 3;
  const std::vector<std::size_t> sizes{64, 128, 256};
  for (Method m : {Method::FD, Method::PWC, Method::PWL}) {
    const ConvergenceReport r = convergence_study(m, g, bc, sizes);
    CHECK(r.order_l2.slope == doctest::Approx(2.0).epsilon(0.12));
    CHECK(r.order_linf.slope == doctest::Approx(2.0).epsilon(0.12));
  }
}

TEST_CASE("convergence: pwc against a fine-grid pwl reference on the logistic") {
  const LogisticGeom g{2, 1, 32, 16};
  const ConvergenceReport r = convergence_study(
      Method::PWC, g, flux_bc(1), {64, 128, 256, 512, 1024},
      Reference{Reference::Kind::FineGridPwl, 1 << 14});
  CHECK(r.order_l2.slope == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("convergence report serialises round numbers") {
  const SinusoidPeriodic g{1, 0.5, 2 * M_PI, 1};
  BoundaryConditions bc = flux_bc(1, 3);
  const ConvergenceReport r = convergence_study(Method::PWL, g, bc, {64, 128, 256});
  const nlohmann::json j = convergence_report_to_json(r);
  CHECK(j.at("method") == "pwl");
  CHECK(j.at("cases").size() == 3);
  CHECK(j.at("orders").contains("dP"));
}

TEST_CASE("timing study fits a sane slope on small problems") {
  const LogisticGeom g{2, 1, 32, 16};
  const TimingReport r = timing_study(Method::PWL, g, flux_bc(1), {256, 1024, 4096}, 5, 1);
  CHECK(r.cases.size() == 3);
  for (const auto& c : r.cases) CHECK(c.median_s > 0);
  CHECK(r.slope.slope > 0.2);
  CHECK(r.slope.slope < 3.0);
}

TEST_CASE("pwl wall time stays linear out to n = 1e6") {
  const LogisticGeom g{2, 1, 32, 16};
  const TimingReport r =
      timing_study(Method::PWL, g, flux_bc(1), {1000, 10000, 100000, 1000000}, 5, 2);
  CHECK(std::fabs(r.slope.slope - 1.0) <= 0.4);
}

TEST_CASE("comparison report on the flat channel is the identity case") {
  StokesConfig cfg;
  cfg.delta = 1.0 / 16;
  cfg.tol = 1e-10;
  const ComparisonReport r =
      compare_reynolds_stokes(CustomPwc{{0.0, 2.0}, {1.0}}, flux_bc(1), cfg);
  CHECK(r.ratio == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_FALSE(r.recirculation);
  CHECK(r.cross_film_max <= 1e-6);
  const nlohmann::json j = comparison_report_to_json(r);
  CHECK(j.contains("dP_stokes"));
  CHECK(j.at("recirculation") == false);
}
