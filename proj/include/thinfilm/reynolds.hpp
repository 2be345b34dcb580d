#pragma once

// Shared lubrication-theory layer: boundary conditions, velocity
// reconstruction from a pressure solution, the constant-flux relation, and
// the exact gap integrals behind the pressure-drop identity
//   p(x_N) - p(x_0) = -12 eta Q int h^-3 + 6 eta U int h^-2.

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "thinfilm/geometry.hpp"

namespace thinfilm {

enum class BcMode { MixedFluxOutlet, DirichletPressureDrop };

struct BoundaryConditions {
  double Q = 0.0;    // prescribed flux (mixed mode)
  double P_N = 0.0;  // outlet pressure
  double U = 0.0;    // lower-wall sliding velocity
  double eta = 1.0;  // dynamic viscosity
  BcMode mode = BcMode::MixedFluxOutlet;
  double P_0 = 0.0;  // inlet pressure (Dirichlet mode only)
};

// Report-only diagnostics; never gate a solve.
struct LubricationRegime {
  double L_x, L_y;
  double epsilon;  // L_y / L_x
  double U_star, V_star;
  double Re;  // rho U* L_x / eta, rho = 1
};
LubricationRegime regime_for(const HeightProfile& profile, const BoundaryConditions& bc);

// Exact per-interval integrals of h^-3 and h^-2 over a piecewise profile.
struct GapIntegrals {
  double inv_h3 = 0.0;
  double inv_h2 = 0.0;
};
GapIntegrals gap_integrals(const HeightProfile& piecewise_profile);

double pressure_drop(const HeightProfile& piecewise_profile, const BoundaryConditions& bc);
double dirichlet_to_flux(const HeightProfile& piecewise_profile, double P_0, double P_N, double U,
                         double eta);

// Resolve Dirichlet mode to the equivalent prescribed flux; mixed mode passes
// through unchanged.
BoundaryConditions resolve_bc(const HeightProfile& piecewise_profile, const BoundaryConditions& bc);

// ---------------------------------------------------------------------------

class PressureSolution {
 public:
  enum class Backend {
    PwcExact,    // constant gradient per interval
    PwlExact,    // closed form per interval from the coupling constants
    GridLinear,  // finite-difference grid values, linear in between
  };

  static PressureSolution pwc_exact(HeightProfile profile, BoundaryConditions bc,
                                    std::vector<double> knot_pressures,
                                    std::vector<double> gradients);
  static PressureSolution pwl_exact(HeightProfile profile, BoundaryConditions bc, double C_Q,
                                    std::vector<double> C_P, std::vector<double> knot_pressures);
  static PressureSolution grid_linear(HeightProfile profile, BoundaryConditions bc,
                                      std::vector<double> grid_x, std::vector<double> grid_p);

  const std::vector<double>& knots() const { return x_; }
  const std::vector<double>& values() const { return p_; }
  const HeightProfile& profile() const { return profile_; }
  const BoundaryConditions& bc() const { return bc_; }
  Backend backend() const { return backend_; }

  double pressure(double x, Side side = Side::Right) const;
  double dpdx(double x, Side side = Side::Right) const;
  double d2pdx2(double x, Side side = Side::Right) const;

  // PWL coupling constants (PwlExact backend only).
  double flux_constant() const { return C_Q_; }
  const std::vector<double>& pressure_constants() const { return C_P_; }
  const std::vector<double>& gradients() const { return gradients_; }

 private:
  PressureSolution(Backend backend, HeightProfile profile, BoundaryConditions bc);

  Backend backend_;
  HeightProfile profile_;
  BoundaryConditions bc_;
  std::vector<double> x_, p_;
  std::vector<double> gradients_;  // PwcExact
  double C_Q_ = 0.0;               // PwlExact
  std::vector<double> C_P_;        // PwlExact
};

// u(x,y) = (1/2eta) p'(x) (y^2 - h y) + (U/h)(h - y). The side picks the
// one-sided limit at knots where h (and hence u) jumps.
double velocity_u(const PressureSolution& sol, double x, double y, Side side = Side::Right);

// v(x,y) from incompressibility. Discontinuous across knots: without an
// explicit side an evaluation at an interior knot throws AtKnot.
double velocity_v(const PressureSolution& sol, double x, double y,
                  std::optional<Side> side = std::nullopt);

// Q = -(1/12eta) (h^3 p' - 6 eta U h)
double flux_at(const PressureSolution& sol, double x, Side side = Side::Right);

// CSV export, 17 significant digits: header "x,p,dpdx" (right-sided gradient).
void write_pressure_csv(const PressureSolution& sol, std::ostream& os);
// Header "x,y,u,v" on the tensor grid xs × ys (points above h(x) are skipped).
void write_velocity_csv(const PressureSolution& sol, const std::vector<double>& xs,
                        const std::vector<double>& ys, std::ostream& os);

// Shared formatting helper: shortest-faithful fixed significant digits.
std::string format_g17(double v);

}  // namespace thinfilm
