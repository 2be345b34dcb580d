#include <doctest.h>

#include <cmath>

#include "thinfilm/geometry.hpp"

using namespace thinfilm;

TEST_CASE("bfs builds a two-component step") {
  const HeightProfile p = build_profile(Bfs{2, 1, 8, 16});
  const auto& pc = std::get<PiecewiseConstant>(p.kind());
  CHECK(pc.knots == std::vector<double>{0, 8, 16});
  CHECK(pc.values == std::vector<double>{2, 1});
  CHECK(p(8, Side::Left) == 2.0);
  CHECK(p(8, Side::Right) == 1.0);
  CHECK(p(3.0) == 2.0);
}

TEST_CASE("bfs parameter validation names the constraint") {
  CHECK_THROWS_WITH_AS(build_profile(Bfs{1, 2, 8, 16}),
                       "InvalidGeometry: H_in must exceed H_out", Error);
  CHECK_THROWS_AS(build_profile(Bfs{2, -1, 8, 16}), Error);
  CHECK_THROWS_AS(build_profile(Bfs{2, 1, 16, 16}), Error);
}

TEST_CASE("wedge builds three linear pieces with slopes 0, -1/2, 0") {
  const HeightProfile p = build_profile(WedgeGeom{2, 1, 7, 7, 2});
  const auto& pl = std::get<PiecewiseLinear>(p.kind());
  CHECK(pl.knots == std::vector<double>{0, 7, 9, 16});
  CHECK(p.slope(3.0) == 0.0);
  CHECK(p.slope(8.0) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(p.slope(12.0) == 0.0);
  CHECK(p(8.0) == doctest::Approx(1.5));
  CHECK_THROWS_AS(build_profile(WedgeGeom{2, 1, 7, 7, 0}), Error);
}

TEST_CASE("logistic midpoint is the mean of the asymptotes") {
  const HeightProfile p = build_profile(LogisticGeom{2, 1, 32, 16});
  CHECK(p(8.0) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(p(0.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(p(16.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(build_profile(LogisticGeom{2, 1, -1, 16}), Error);
  CHECK_THROWS_AS(build_profile(LogisticGeom{1, 2, 32, 16}), Error);
}

TEST_CASE("eval_height is one-sided at knots and guards the domain") {
  const HeightProfile p = build_profile(Bfs{2, 1, 8, 16});
  CHECK(eval_height(p, 8, Side::Left) == 2.0);
  CHECK(eval_height(p, 8, Side::Right) == 1.0);
  CHECK_THROWS_AS(eval_height(p, -0.5), Error);
  CHECK_THROWS_AS(eval_height(p, 16.5), Error);
}

TEST_CASE("sinusoid-periodic quarter-period heights") {
  const HeightProfile p = build_profile(SinusoidPeriodic{1, 0.5, 2 * M_PI, 1});
  const HeightProfile s = sample_pwl(p, 4);
  const auto& pl = std::get<PiecewiseLinear>(s.kind());
  const double exp[5] = {1.5, 1.0, 0.5, 1.0, 1.5};
  for (int k = 0; k < 4; ++k) {
    CHECK(pl.left[k] == doctest::Approx(exp[k]).epsilon(1e-12));
    CHECK(pl.right[k] == doctest::Approx(exp[k + 1]).epsilon(1e-12));
  }
}

TEST_CASE("sinusoid-cavity is continuous and flat outside the textured run") {
  const HeightProfile p = build_profile(SinusoidCavity{1, 0.5, 2, 1, 8});
  // stored on [0, 2L]; k even -> flat value H0(1+delta)
  CHECK(p(0.0) == doctest::Approx(1.5));
  CHECK(p(16.0) == doctest::Approx(1.5));
  CHECK(p(8.0) == doctest::Approx(1.5));          // centre: cos(0) = 1
  CHECK(p(7.0 + 1e-9) == doctest::Approx(1.5).epsilon(1e-6));  // junction continuity
  CHECK(p.slope(0.0) == 0.0);
  const HeightProfile podd = build_profile(SinusoidCavity{1, 0.5, 3, 1, 8});
  CHECK(podd(0.0) == doctest::Approx(0.5));  // k odd -> flat value H0(1-delta)
  CHECK_THROWS_AS(build_profile(SinusoidCavity{1, 1.5, 2, 1, 8}), Error);
}

TEST_CASE("sample_pwc of a constant stays constant; logistic matches endpoints average") {
  const HeightProfile flat{PiecewiseConstant{{0, 1}, {1.0}}};
  const HeightProfile s = sample_pwc(flat, 7);
  for (double v : std::get<PiecewiseConstant>(s.kind()).values) CHECK(v == 1.0);

  const HeightProfile lg = build_profile(LogisticGeom{2, 1, 32, 16});
  const HeightProfile s2 = sample_pwc(lg, 2);
  const auto& pc = std::get<PiecewiseConstant>(s2.kind());
  CHECK(pc.values[0] == doctest::Approx(1.75).epsilon(1e-12));
  CHECK(pc.values[1] == doctest::Approx(1.25).epsilon(1e-12));
}

TEST_CASE("sample_pwc with matching knots is the identity") {
  const HeightProfile bfs = build_profile(Bfs{2, 1, 8, 16});
  const HeightProfile s2 = sample_pwc(bfs, 2);
  const auto& pc = std::get<PiecewiseConstant>(s2.kind());
  CHECK(pc.values == std::vector<double>{2, 1});
  CHECK(pc.knots == std::vector<double>{0, 8, 16});
}

TEST_CASE("sample_pwl reproduces aligned piecewise-linear input and keeps jumps") {
  const HeightProfile wedge = build_profile(WedgeGeom{2, 1, 8, 6, 2});  // knots 0,8,10,16
  const HeightProfile sw = sample_pwl(wedge, 8);
  const auto& pl = std::get<PiecewiseLinear>(sw.kind());
  for (std::size_t k = 0; k < 8; ++k) {
    const double xa = pl.knots[k], xb = pl.knots[k + 1];
    CHECK(pl.left[k] == doctest::Approx(wedge(xa, Side::Right)).epsilon(1e-14));
    CHECK(pl.right[k] == doctest::Approx(wedge(xb, Side::Left)).epsilon(1e-14));
  }

  const HeightProfile bfs = build_profile(Bfs{2, 1, 8, 16});
  const HeightProfile sb = sample_pwl(bfs, 4);
  const auto& pb = std::get<PiecewiseLinear>(sb.kind());
  CHECK(pb.right[1] == 2.0);  // left limit at the jump
  CHECK(pb.left[2] == 1.0);   // right limit at the jump
}

TEST_CASE("sample_pwl is idempotent on its own output") {
  const HeightProfile lg = build_profile(LogisticGeom{2, 1, 32, 16});
  const HeightProfile once = sample_pwl(lg, 19);
  const HeightProfile twice = sample_pwl(once, 19);
  const auto& a = std::get<PiecewiseLinear>(once.kind());
  const auto& b = std::get<PiecewiseLinear>(twice.kind());
  for (std::size_t k = 0; k < a.left.size(); ++k) {
    CHECK(b.left[k] == doctest::Approx(a.left[k]).epsilon(1e-15));
    CHECK(b.right[k] == doctest::Approx(a.right[k]).epsilon(1e-15));
  }
}

TEST_CASE("sample_pwl interpolation error decays at second order on the logistic") {
  const HeightProfile lg = build_profile(LogisticGeom{2, 1, 32, 16});
  std::vector<double> errs;
  std::vector<std::size_t> sizes{1024, 2048, 4096};
  for (std::size_t n : sizes) {
    const HeightProfile s = sample_pwl(lg, n);
    double e = 0;
    for (int i = 0; i <= 20000; ++i) {
      const double x = 16.0 * i / 20000.0;
      e = std::max(e, std::fabs(s(x) - lg(x)));
    }
    errs.push_back(e);
  }
  const double slope01 = std::log(errs[0] / errs[1]) / std::log(2.0);
  const double slope12 = std::log(errs[1] / errs[2]) / std::log(2.0);
  CHECK(slope01 == doctest::Approx(2.0).epsilon(0.15));
  CHECK(slope12 == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("profiles raise on non-positive heights") {
  CHECK_THROWS_AS((HeightProfile{PiecewiseConstant{{0, 1, 2}, {1.0, -0.5}}}), Error);
  CHECK_THROWS_AS((HeightProfile{PiecewiseLinear{{0, 1}, {1.0}, {0.0}}}), Error);
}

TEST_CASE("geometry JSON round trip") {
  const GeometrySpec specs[] = {
      Bfs{2, 1, 8, 16},
      WedgeGeom{2, 1, 7, 7, 2},
      LogisticGeom{2, 1, 32, 16},
      SinusoidCavity{1, 0.5, 2, 1, 8},
      SinusoidPeriodic{1, 0.5, 2 * M_PI, 1},
      CustomPwc{{0, 1, 2}, {1, 2}},
      CustomPwl{{0, 1, 2}, {1, 2, 1}},
  };
  for (const auto& s : specs) {
    const auto j = geometry_to_json(s);
    const GeometrySpec back = geometry_from_json(j);
    CHECK(geometry_to_json(back) == j);
    CHECK(geometry_name(back) == j.at("geometry").get<std::string>());
  }
  CHECK_THROWS_AS(geometry_from_json(nlohmann::json{{"geometry", "moebius"}, {"params", {}}}),
                  Error);
}
