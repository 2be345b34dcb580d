#include "thinfilm/pwl.hpp"

#include <cmath>

namespace thinfilm {

namespace {
inline double cube(double v) { return v * v * v; }
}

PWLSystem assemble_pwl(const HeightProfile& profile_in, const BoundaryConditions& bc_in,
                       double zero_slope_tol) {
  const HeightProfile plp = as_piecewise_linear(profile_in);
  auto pl = std::get<PiecewiseLinear>(plp.kind());
  const std::size_t n = pl.left.size();

  double hmax = 0;
  for (std::size_t k = 0; k < n; ++k) hmax = std::max({hmax, pl.left[k], pl.right[k]});

  // Snap flat-classified intervals to exactly equal endpoints so that every
  // later evaluation of the solution classifies them identically.
  std::vector<double> slope(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (std::fabs(pl.right[k] - pl.left[k]) <= zero_slope_tol * hmax) {
      const double h = 0.5 * (pl.left[k] + pl.right[k]);
      pl.left[k] = pl.right[k] = h;
      slope[k] = 0.0;
    } else {
      slope[k] = (pl.right[k] - pl.left[k]) / (pl.knots[k + 1] - pl.knots[k]);
    }
  }
  HeightProfile snapped{PiecewiseLinear{pl.knots, pl.left, pl.right}};

  PWLSystem sys{.n = n,
                .knots = pl.knots,
                .slope = std::move(slope),
                .cq_coef = {},
                .rhs = {},
                .outlet_cq_coef = 0.0,
                .outlet_rhs = 0.0,
                .zero_slope_tol = zero_slope_tol,
                .bc = resolve_bc(snapped, bc_in),
                .profile = snapped};
  const auto& bc = sys.bc;
  const double euu = 6.0 * bc.eta * bc.U;

  // Interior knot rows, the four slope cases folded into one form:
  //   C_Pk - C_P{k-1} - (a_r - a_l) C_Q = 6 eta U (u_r - u_l)
  // with the right/left interval contributions switching branch on slope.
  sys.cq_coef.assign(n, 0.0);  // index k = 1..n-1 used
  sys.rhs.assign(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    const double hkp = pl.left[k];       // h(x_k^+)
    const double hkm = pl.right[k - 1];  // h(x_k^-)
    const double wl = pl.knots[k] - pl.knots[k - 1];
    double a_r, u_r, a_l, u_l;
    if (sys.slope[k] != 0.0) {
      a_r = 0.5 / (hkp * hkp) / sys.slope[k];
      u_r = 1.0 / hkp / sys.slope[k];
    } else {
      a_r = 0.0;
      u_r = 0.0;
    }
    if (sys.slope[k - 1] != 0.0) {
      a_l = 0.5 / (hkm * hkm) / sys.slope[k - 1];
      u_l = 1.0 / hkm / sys.slope[k - 1];
    } else {
      a_l = -wl / cube(hkm);
      u_l = -wl / (hkm * hkm);
    }
    sys.cq_coef[k] = a_r - a_l;
    sys.rhs[k] = euu * (u_r - u_l);
  }

  // Outlet row: the fixed outlet pressure determines C_P_{n-1}.
  const double hN = pl.right[n - 1];  // h(x_N^-)
  const double wN = pl.knots[n] - pl.knots[n - 1];
  if (sys.slope[n - 1] != 0.0) {
    sys.outlet_cq_coef = 0.5 / (hN * hN) / sys.slope[n - 1];
    sys.outlet_rhs = euu / hN / sys.slope[n - 1];
  } else {
    sys.outlet_cq_coef = -wN / cube(hN);
    sys.outlet_rhs = -euu * wN / (hN * hN);
  }

  return sys;
}

PressureSolution solve_pwl(const PWLSystem& sys) {
  const std::size_t n = sys.n;
  const auto& bc = sys.bc;

  // The identity row gives C_Q outright; D^{-1} is upper triangular with -1
  // entries, so the remaining solve is one reversed partial sum.
  const double C_Q = -12.0 * bc.eta * bc.Q;
  std::vector<double> C_P(n);
  C_P[n - 1] = bc.P_N + sys.outlet_cq_coef * C_Q + sys.outlet_rhs;
  for (std::size_t k = n - 1; k >= 1; --k)
    C_P[k - 1] = C_P[k] - sys.cq_coef[k] * C_Q - sys.rhs[k];

  const auto& pl = std::get<PiecewiseLinear>(sys.profile.kind());
  const double euu = 6.0 * bc.eta * bc.U;
  std::vector<double> p(n + 1);
  for (std::size_t k = 0; k < n; ++k) {
    const double h = pl.left[k];
    p[k] = (sys.slope[k] != 0.0) ? -(0.5 * C_Q / (h * h) + euu / h) / sys.slope[k] + C_P[k]
                                 : C_P[k];
  }
  p[n] = bc.P_N;

  return PressureSolution::pwl_exact(sys.profile, bc, C_Q, std::move(C_P), std::move(p));
}

PressureSolution solve_pwl(const HeightProfile& profile, const BoundaryConditions& bc,
                           double zero_slope_tol) {
  return solve_pwl(assemble_pwl(profile, bc, zero_slope_tol));
}

}  // namespace thinfilm
