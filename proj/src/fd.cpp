#include "thinfilm/fd.hpp"

#include <cmath>

#include "thinfilm/linalg.hpp"

namespace thinfilm {

namespace {
inline double cube(double v) { return v * v * v; }
}

FDSystem assemble_fd(const HeightProfile& profile, const BoundaryConditions& bc_in,
                     std::size_t n) {
  if (n < 3) fail(Errc::TooFewPoints, "the right-sided boundary stencil needs n >= 3");

  FDSystem sys{.n = n,
               .dx = 0.0,
               .x = {},
               .h = {},
               .sub = {},
               .diag = {},
               .sup = {},
               .sup2 = 0.0,
               .rhs = {},
               .bc = resolve_bc(profile, bc_in),
               .profile = profile};
  const auto& bc = sys.bc;

  const double x0 = profile.x0();
  sys.dx = (profile.x1() - x0) / static_cast<double>(n);
  sys.x.resize(n + 1);
  sys.h.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    sys.x[i] = (i == n) ? profile.x1() : x0 + sys.dx * static_cast<double>(i);
    // The discretisation does not see jumps; a node on one takes the average
    // of the one-sided limits.
    sys.h[i] = 0.5 * (profile(sys.x[i], Side::Left) + profile(sys.x[i], Side::Right));
  }

  sys.sub.assign(n + 1, 0.0);
  sys.diag.assign(n + 1, 0.0);
  sys.sup.assign(n + 1, 0.0);
  sys.rhs.assign(n + 1, 0.0);

  // Forward one-sided first derivative, second order: the flux condition
  // pins dp/dx at the inlet.
  const double dx = sys.dx;
  sys.diag[0] = -3.0 / (2.0 * dx);
  sys.sup[0] = 4.0 / (2.0 * dx);
  sys.sup2 = -1.0 / (2.0 * dx);
  sys.rhs[0] = -12.0 * bc.eta * bc.Q / cube(sys.h[0]) + 6.0 * bc.eta * bc.U / (sys.h[0] * sys.h[0]);

  const double s = 1.0 / (2.0 * dx * dx);
  for (std::size_t i = 1; i < n; ++i) {
    const double hm = cube(sys.h[i - 1]), hc = cube(sys.h[i]), hp = cube(sys.h[i + 1]);
    sys.sub[i] = s * (hc + hm);
    sys.sup[i] = s * (hp + hc);
    sys.diag[i] = -s * (hp + 2.0 * hc + hm);
    sys.rhs[i] = 6.0 * bc.eta * bc.U * (sys.h[i + 1] - sys.h[i - 1]) / (2.0 * dx);
  }

  sys.diag[n] = 1.0;
  sys.rhs[n] = bc.P_N;

  return sys;
}

PressureSolution solve_fd(const FDSystem& sys, FDPath path) {
  const std::size_t m = sys.n + 1;
  std::vector<double> p = sys.rhs;

  if (path == FDPath::Dense) {
    std::vector<double> a(m * m, 0.0);
    a[0] = sys.diag[0];
    a[1] = sys.sup[0];
    a[2] = sys.sup2;
    for (std::size_t i = 1; i < sys.n; ++i) {
      a[i * m + i - 1] = sys.sub[i];
      a[i * m + i] = sys.diag[i];
      a[i * m + i + 1] = sys.sup[i];
    }
    a[sys.n * m + sys.n] = sys.diag[sys.n];
    DenseLU lu(std::move(a), m);
    lu.solve(p);
  } else {
    BandLU band(m, 1, 2);
    band.at(0, 0) = sys.diag[0];
    band.at(0, 1) = sys.sup[0];
    band.at(0, 2) = sys.sup2;
    for (std::size_t i = 1; i < sys.n; ++i) {
      band.at(i, i - 1) = sys.sub[i];
      band.at(i, i) = sys.diag[i];
      band.at(i, i + 1) = sys.sup[i];
    }
    band.at(sys.n, sys.n) = sys.diag[sys.n];
    band.factor();
    band.solve(p);
  }

  return PressureSolution::grid_linear(sys.profile, sys.bc, sys.x, std::move(p));
}

PressureSolution solve_fd(const HeightProfile& profile, const BoundaryConditions& bc,
                          std::size_t n, FDPath path) {
  return solve_fd(assemble_fd(profile, bc, n), path);
}

double fd_residual_inf(const FDSystem& sys, std::span<const double> p) {
  if (p.size() != sys.n + 1) fail(Errc::GridMismatch, "pressure size mismatch");
  double r = std::fabs(sys.diag[0] * p[0] + sys.sup[0] * p[1] + sys.sup2 * p[2] - sys.rhs[0]);
  for (std::size_t i = 1; i < sys.n; ++i) {
    const double ri =
        sys.sub[i] * p[i - 1] + sys.diag[i] * p[i] + sys.sup[i] * p[i + 1] - sys.rhs[i];
    r = std::max(r, std::fabs(ri));
  }
  r = std::max(r, std::fabs(sys.diag[sys.n] * p[sys.n] - sys.rhs[sys.n]));
  return r;
}

}  // namespace thinfilm
