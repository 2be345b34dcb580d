#pragma once

// Two-dimensional Stokes flow in the slider gap via the stream-function
// biharmonic formulation (Re = 0). The surface y = h(x) is masked onto the
// grid as a staircase; walls carry psi Dirichlet values plus no-slip closures
// that are exact for cubic profiles, so developed channel flow is reproduced
// to round-off.
//
// Two iteration schemes solve the same discrete system:
//   CoupledPoisson (default): zeta = lap(psi), lap(zeta) = 0, SOR sweeps with
//     wall-vorticity closures. Eliminating zeta reproduces the 13-point
//     biharmonic stencil, but the sweeps converge at a Poisson-like rate.
//   Sor13: direct SOR relaxation of the 13-point stencil with the ghost
//     closures folded in. Kept for cross-checks; impractically slow on fine
//     grids.

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <vector>

#include <nlohmann/json.hpp>

#include "thinfilm/geometry.hpp"
#include "thinfilm/reynolds.hpp"

namespace thinfilm {

struct StokesConfig {
  double delta = 1.0 / 16;
  double tol = 1e-8;
  std::size_t max_iter = 200000;
  double relaxation = 1.6;        // interior SOR factor
  // The wall-vorticity update feeds the interior sweeps; small values keep
  // the coupling contractive for over-relaxed interiors on coarse grids.
  double wall_relaxation = 0.05;
  enum class Scheme { CoupledPoisson, Sor13 };
  Scheme scheme = Scheme::CoupledPoisson;
};

StokesConfig stokes_config_from_json(const nlohmann::json& j);
nlohmann::json stokes_config_to_json(const StokesConfig& cfg);

enum class NodeType : std::uint8_t {
  Solid,
  Fluid,
  Inlet,
  Outlet,
  BottomWall,
  Surface,
};

struct StokesGrid {
  double delta = 0.0;
  std::size_t nx = 0, ny = 0;  // (nx+1) x (ny+1) nodes
  double x0 = 0.0;
  std::vector<NodeType> mask;         // (nx+1)*(ny+1), j-major per column
  std::vector<std::size_t> surface_j; // staircase level per column
  HeightProfile profile;

  std::size_t idx(std::size_t i, std::size_t j) const { return i * (ny + 1) + j; }
  NodeType type(std::size_t i, std::size_t j) const { return mask[idx(i, j)]; }
  double x_at(std::size_t i) const { return x0 + delta * static_cast<double>(i); }
  double y_at(std::size_t j) const { return delta * static_cast<double>(j); }
};

// Requires |h'| <= 1e-8 at both ends (NonFlatInlet otherwise) and the domain
// length and end heights to sit on the grid (SpacingMismatch otherwise).
StokesGrid build_stokes_grid(const HeightProfile& profile, double delta);

// Developed-flow stream function: psi = Q y^2 (3h - 2y)/h^3 + U y (h-y)^2/h^2.
double inlet_stream(const BoundaryConditions& bc, double h0, double y);

struct StokesField {
  StokesGrid grid;
  BoundaryConditions bc;
  std::vector<double> psi, zeta, u, v, p;
  std::vector<double> residual_history;  // one entry per iteration
  enum class Status { Converged, MaxIterations, Diverged };
  Status status = Status::Converged;
  double residual = 0.0;
  std::size_t iterations = 0;
};

// On MaxIterations/Diverged the best iterate so far is returned; callers
// decide whether that is an error.
StokesField iterate_biharmonic(const StokesGrid& grid, const BoundaryConditions& bc,
                               const StokesConfig& cfg);

// u = dpsi/dy, v = -dpsi/dx via derivative stencils exact for cubics.
void recover_velocity(StokesField& field);

// grad p from the Re = 0 momentum balance (eta * lap u, eta * lap v),
// integrated by trapezoid along the lower wall from the outlet and then up
// each column; anchored so the outlet column mean equals P_N.
void recover_pressure(StokesField& field);

// Trapezoid of u over column i (equals Q up to discretisation error).
double column_flux(const StokesField& field, std::size_t i);

// CSV export, header "x,y,mask,psi,u,v,p".
void write_field_csv(const StokesField& field, std::ostream& os);

}  // namespace thinfilm
