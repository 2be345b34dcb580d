#pragma once

// Finite-difference baseline for the Reynolds equation on a uniform grid:
// conservation-form second-order stencil with half-grid averaged h^3, a
// right-sided flux boundary row, and a Dirichlet outlet row. The banded path
// is the O(N) accuracy solver; the dense path reproduces the O(N^3) solve
// the timing study measures.

#include <cstddef>
#include <span>
#include <vector>

#include "thinfilm/geometry.hpp"
#include "thinfilm/reynolds.hpp"

namespace thinfilm {

struct FDSystem {
  std::size_t n = 0;          // grid intervals; n+1 points
  double dx = 0.0;
  std::vector<double> x;      // n+1
  std::vector<double> h;      // n+1, one-sided limits averaged at jump nodes
  // Row i: sub[i] p_{i-1} + diag[i] p_i + sup[i] p_{i+1} (+ sup2 p_2 on row 0).
  std::vector<double> sub, diag, sup;
  double sup2 = 0.0;
  std::vector<double> rhs;
  BoundaryConditions bc;      // resolved to flux mode
  HeightProfile profile;
};

enum class FDPath { Banded, Dense };

FDSystem assemble_fd(const HeightProfile& profile, const BoundaryConditions& bc, std::size_t n);

PressureSolution solve_fd(const FDSystem& sys, FDPath path = FDPath::Banded);
PressureSolution solve_fd(const HeightProfile& profile, const BoundaryConditions& bc,
                          std::size_t n, FDPath path = FDPath::Banded);

// ||A p - b||_inf over the assembled rows.
double fd_residual_inf(const FDSystem& sys, std::span<const double> p);

}  // namespace thinfilm
