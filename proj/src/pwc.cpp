#include "thinfilm/pwc.hpp"

#include <cmath>

#include "thinfilm/tridiag.hpp"

namespace thinfilm {

namespace {
inline double cube(double v) { return v * v * v; }
}

PWCSystem assemble_pwc(const HeightProfile& profile, const BoundaryConditions& bc_in) {
  const auto* pc = std::get_if<PiecewiseConstant>(&profile.kind());
  if (!pc) fail(Errc::InvalidProfile, "assemble_pwc needs a piecewise-constant profile");
  const std::size_t n = pc->values.size();
  if (n < 2) fail(Errc::TooFewComponents, "need at least 2 components; n = 1 is closed form");

  PWCSystem sys{.n = n,
                .knots = pc->knots,
                .widths = {},
                .heights = pc->values,
                .b_upper = {},
                .b_lower = {},
                .alpha = {},
                .beta = {},
                .bc = resolve_bc(profile, bc_in),
                .profile = profile};
  const auto& bc = sys.bc;

  sys.widths.resize(n);
  for (std::size_t k = 0; k < n; ++k) sys.widths[k] = pc->knots[k + 1] - pc->knots[k];

  const double h0 = sys.heights[0];
  sys.b_upper.assign(n, 0.0);
  sys.b_upper[0] = -12.0 * bc.eta * (bc.Q / cube(h0) - 0.5 * bc.U / (h0 * h0));
  sys.b_upper[n - 1] = bc.P_N / sys.widths[n - 1];

  sys.b_lower.resize(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k)
    sys.b_lower[k] = 6.0 * bc.eta * bc.U * (sys.heights[k + 1] - sys.heights[k]);

  // Schur complement K = -CB. Row 0 of the upper block is the flux boundary
  // condition and carries no pressure entries, so the first diagonal entry
  // has only the h_1^3/dx_1 term.
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k) g[k] = cube(sys.heights[k]) / sys.widths[k];
  sys.alpha.resize(n - 1);
  sys.alpha[0] = -g[1];
  for (std::size_t i = 1; i + 1 < n; ++i) sys.alpha[i] = -(g[i] + g[i + 1]);
  sys.beta.resize(n - 2);
  for (std::size_t i = 0; i + 2 < n; ++i) sys.beta[i] = g[i + 1];

  return sys;
}

PressureSolution solve_pwc(const PWCSystem& sys) {
  const std::size_t n = sys.n;
  const auto& bc = sys.bc;

  // Right-hand side of the Schur system: b_lower - C b_upper, where C has a
  // single entry in its first and last columns.
  std::vector<double> rhs = sys.b_lower;
  rhs[0] += cube(sys.heights[0]) * sys.b_upper[0];
  rhs[n - 2] -= cube(sys.heights[n - 1]) * sys.b_upper[n - 1];

  TridiagInverse kinv(sys.alpha, sys.beta);
  std::vector<double> interior(n - 1);
  kinv.apply(rhs, interior);

  std::vector<double> p(n + 1), grad(n);
  for (std::size_t k = 1; k < n; ++k) p[k] = interior[k - 1];
  p[n] = bc.P_N;
  grad[0] = sys.b_upper[0];
  for (std::size_t k = 1; k < n; ++k) grad[k] = (p[k + 1] - p[k]) / sys.widths[k];
  p[0] = p[1] - sys.widths[0] * grad[0];

  return PressureSolution::pwc_exact(sys.profile, bc, std::move(p), std::move(grad));
}

PressureSolution solve_pwc(const HeightProfile& profile, const BoundaryConditions& bc_in) {
  const auto* pc = std::get_if<PiecewiseConstant>(&profile.kind());
  if (!pc) fail(Errc::InvalidProfile, "solve_pwc needs a piecewise-constant profile");
  const BoundaryConditions bc = resolve_bc(profile, bc_in);
  if (pc->values.size() == 1) {
    // Single component: linear pressure pinned to the outlet.
    const double h = pc->values[0];
    const double g0 = -12.0 * bc.eta * bc.Q / (h * h * h) + 6.0 * bc.eta * bc.U / (h * h);
    std::vector<double> p{bc.P_N - g0 * (pc->knots[1] - pc->knots[0]), bc.P_N};
    return PressureSolution::pwc_exact(profile, bc, std::move(p), {g0});
  }
  return solve_pwc(assemble_pwc(profile, bc));
}

}  // namespace thinfilm
