#pragma once

// Gap-height profiles h(x): the four named slider geometries plus tabulated
// user profiles, and the piecewise-constant / piecewise-linear samplers that
// feed the solvers.

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "thinfilm/errors.hpp"

namespace thinfilm {

enum class Side { Left, Right };

// ---------------------------------------------------------------------------
// Named geometries

struct Bfs {  // step: h = H_in on [0,l), H_out on [l,L]
  double H_in, H_out, l, L;
};
struct WedgeGeom {  // flat inlet run, linear ramp, flat outlet run
  double H_in, H_out, l_in, l_out, l_wedge;
};
struct LogisticGeom {  // smooth step, transition slope lambda*(H_in-H_out)/4
  double H_in, H_out, lambda, L;
};
struct SinusoidCavity {  // k textures on [l..] flanked by flat runs; stored on [0, 2L]
  double H_0, delta;
  int k;
  double l, L;
};
struct SinusoidPeriodic {  // h = H_0 (1 + delta cos(alpha x)) on [0, L]
  double H_0, delta, alpha, L;
};
struct CustomPwc {
  std::vector<double> knots;   // size N+1, strictly increasing
  std::vector<double> values;  // size N
};
struct CustomPwl {  // continuous tabulated profile
  std::vector<double> knots;    // size N+1
  std::vector<double> heights;  // size N+1
};

using GeometrySpec =
    std::variant<Bfs, WedgeGeom, LogisticGeom, SinusoidCavity, SinusoidPeriodic, CustomPwc, CustomPwl>;

std::string geometry_name(const GeometrySpec& spec);
GeometrySpec geometry_from_json(const nlohmann::json& j);
nlohmann::json geometry_to_json(const GeometrySpec& spec);

// ---------------------------------------------------------------------------
// Height profiles

struct PiecewiseConstant {
  std::vector<double> knots;   // size N+1
  std::vector<double> values;  // size N
};

// Both one-sided limits are stored at every knot, so jump discontinuities
// survive sampling and solving.
struct PiecewiseLinear {
  std::vector<double> knots;  // size N+1
  std::vector<double> left;   // h(x_k^+), size N (left end of interval k)
  std::vector<double> right;  // h(x_{k+1}^-), size N (right end of interval k)
};

struct Analytic {
  enum class Form { Logistic, SinusoidCavity, SinusoidPeriodic };
  Form form;
  double a = 0, b = 0, c = 0, d = 0;  // form-specific parameters
  double x0 = 0, x1 = 0;
  double value(double x) const;
  double deriv(double x) const;  // exact derivative, for validation/reporting
};

class HeightProfile {
 public:
  using Kind = std::variant<PiecewiseConstant, PiecewiseLinear, Analytic>;

  explicit HeightProfile(Kind kind);

  double x0() const;
  double x1() const;
  std::size_t intervals() const;  // 1 for analytic kinds

  // One-sided evaluation; the side only matters at interior knots of a
  // piecewise profile with a jump. Throws OutOfDomain outside [x0, x1].
  double operator()(double x, Side side = Side::Right) const;
  double slope(double x, Side side = Side::Right) const;

  bool piecewise() const;
  const Kind& kind() const { return kind_; }
  const std::vector<double>& knots() const;  // piecewise kinds only

  // Interval index containing x; at a shared knot the side picks which.
  std::size_t interval_at(double x, Side side) const;

 private:
  Kind kind_;
};

HeightProfile build_profile(const GeometrySpec& spec);

double eval_height(const HeightProfile& p, double x, Side side = Side::Right);

// Uniform N-interval samplers. Values positive or they throw InvalidProfile.
HeightProfile sample_pwc(const HeightProfile& p, std::size_t n);
HeightProfile sample_pwl(const HeightProfile& p, std::size_t n);

// Exact piecewise-linear view of a piecewise profile (PWC becomes zero-slope
// segments). Analytic profiles must be sampled instead.
HeightProfile as_piecewise_linear(const HeightProfile& p);

}  // namespace thinfilm
