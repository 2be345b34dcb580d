#pragma once

// Exact Reynolds solution for piecewise-constant heights. The 2N-1 block
// system (N constant gradients, N-1 interior pressures) is reduced to its
// symmetric tridiagonal Schur complement K = -CB and solved through the
// element-wise tridiagonal inverse, giving an O(N^2) solve.

#include <cstddef>
#include <vector>

#include "thinfilm/geometry.hpp"
#include "thinfilm/reynolds.hpp"

namespace thinfilm {

struct PWCSystem {
  std::size_t n = 0;           // piecewise components
  std::vector<double> knots;   // n+1
  std::vector<double> widths;  // n
  std::vector<double> heights; // n
  std::vector<double> b_upper; // n   (only [0] and [n-1] nonzero)
  std::vector<double> b_lower; // n-1
  std::vector<double> alpha;   // Schur diagonal, n-1
  std::vector<double> beta;    // Schur off-diagonal, n-2
  BoundaryConditions bc;       // resolved to flux mode
  HeightProfile profile;
};

// Requires a piecewise-constant profile with n >= 2 components (n = 1 is a
// closed form handled by solve_pwc directly). Dirichlet-mode bc is converted
// to the equivalent flux first.
PWCSystem assemble_pwc(const HeightProfile& profile, const BoundaryConditions& bc);

PressureSolution solve_pwc(const PWCSystem& sys);
PressureSolution solve_pwc(const HeightProfile& profile, const BoundaryConditions& bc);

}  // namespace thinfilm
