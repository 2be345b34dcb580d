#pragma once

// Exact Reynolds solution for piecewise-linear heights. Pressure continuity
// at each interior knot couples the per-interval closed forms through the
// flux constant C_Q = -12 eta Q and one pressure constant per interval; the
// Schur block is bidiagonal with unit entries, so one backward partial-sum
// pass solves the system in O(N).

#include <cstddef>
#include <vector>

#include "thinfilm/geometry.hpp"
#include "thinfilm/reynolds.hpp"

namespace thinfilm {

struct PWLSystem {
  std::size_t n = 0;              // intervals
  std::vector<double> knots;      // n+1
  std::vector<double> slope;      // classified slope per interval (0 when flat)
  std::vector<double> cq_coef;    // interior knot rows k=1..n-1: coefficient on C_Q
  std::vector<double> rhs;        // interior knot rows (the 6 eta U terms)
  double outlet_cq_coef = 0.0;    // C_P_{n-1} = P_N + outlet_cq_coef*C_Q + outlet_rhs
  double outlet_rhs = 0.0;
  double zero_slope_tol = 1e-12;
  BoundaryConditions bc;          // resolved to flux mode
  HeightProfile profile;          // flat-classified intervals snapped exactly flat
};

// Accepts piecewise-linear or piecewise-constant profiles (the latter is the
// all-zero-slope case). Intervals whose endpoint heights differ by at most
// zero_slope_tol * max(h) are classified flat.
PWLSystem assemble_pwl(const HeightProfile& profile, const BoundaryConditions& bc,
                       double zero_slope_tol = 1e-12);

PressureSolution solve_pwl(const PWLSystem& sys);
PressureSolution solve_pwl(const HeightProfile& profile, const BoundaryConditions& bc,
                           double zero_slope_tol = 1e-12);

}  // namespace thinfilm
