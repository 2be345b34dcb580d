#include "thinfilm/reynolds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace thinfilm {

namespace {

inline double cube(double v) { return v * v * v; }

// Flat-interval classification shared with the PWL solver: the nonzero-slope
// branches divide by the slope, so near-zero slopes are snapped to flat.
inline bool slope_is_zero(double ha, double hb, double scale, double tol = 1e-12) {
  return std::fabs(hb - ha) <= tol * scale;
}

}  // namespace

LubricationRegime regime_for(const HeightProfile& profile, const BoundaryConditions& bc) {
  LubricationRegime r{};
  r.L_x = profile.x1() - profile.x0();
  double hmax = 0;
  const std::size_t m = std::max<std::size_t>(profile.intervals() * 4, 64);
  for (std::size_t i = 0; i <= m; ++i) {
    const double x = profile.x0() + r.L_x * static_cast<double>(i) / static_cast<double>(m);
    hmax = std::max(hmax, profile(x, i == 0 ? Side::Right : Side::Left));
  }
  r.L_y = hmax;
  r.epsilon = r.L_y / r.L_x;
  r.U_star = bc.Q / r.L_y;
  r.V_star = bc.Q / r.L_x;
  r.Re = std::fabs(r.U_star) * r.L_x / bc.eta;  // rho = 1
  return r;
}

GapIntegrals gap_integrals(const HeightProfile& profile) {
  if (!profile.piecewise()) fail(Errc::InvalidProfile, "sample the analytic profile first");
  const auto pwl = as_piecewise_linear(profile);
  const auto& pl = std::get<PiecewiseLinear>(pwl.kind());
  double hscale = 0;
  for (std::size_t k = 0; k < pl.left.size(); ++k)
    hscale = std::max({hscale, pl.left[k], pl.right[k]});
  GapIntegrals g;
  for (std::size_t k = 0; k < pl.left.size(); ++k) {
    const double w = pl.knots[k + 1] - pl.knots[k];
    const double ha = pl.left[k], hb = pl.right[k];
    if (slope_is_zero(ha, hb, hscale)) {
      g.inv_h3 += w / cube(ha);
      g.inv_h2 += w / (ha * ha);
    } else {
      const double m = (hb - ha) / w;
      g.inv_h3 += (1.0 / (ha * ha) - 1.0 / (hb * hb)) / (2.0 * m);
      g.inv_h2 += (1.0 / ha - 1.0 / hb) / m;
    }
  }
  return g;
}

double pressure_drop(const HeightProfile& profile, const BoundaryConditions& bc) {
  const GapIntegrals g = gap_integrals(profile);
  return -12.0 * bc.eta * bc.Q * g.inv_h3 + 6.0 * bc.eta * bc.U * g.inv_h2;
}

double dirichlet_to_flux(const HeightProfile& profile, double P_0, double P_N, double U,
                         double eta) {
  const GapIntegrals g = gap_integrals(profile);
  return (6.0 * eta * U * g.inv_h2 - (P_N - P_0)) / (12.0 * eta * g.inv_h3);
}

BoundaryConditions resolve_bc(const HeightProfile& profile, const BoundaryConditions& bc) {
  if (bc.mode == BcMode::MixedFluxOutlet) return bc;
  BoundaryConditions out = bc;
  out.Q = dirichlet_to_flux(profile, bc.P_0, bc.P_N, bc.U, bc.eta);
  out.mode = BcMode::MixedFluxOutlet;
  return out;
}

// ---------------------------------------------------------------------------
// PressureSolution

PressureSolution::PressureSolution(Backend backend, HeightProfile profile, BoundaryConditions bc)
    : backend_(backend), profile_(std::move(profile)), bc_(bc) {}

PressureSolution PressureSolution::pwc_exact(HeightProfile profile, BoundaryConditions bc,
                                             std::vector<double> knot_pressures,
                                             std::vector<double> gradients) {
  PressureSolution s(Backend::PwcExact, std::move(profile), bc);
  s.x_ = s.profile_.knots();
  s.p_ = std::move(knot_pressures);
  s.gradients_ = std::move(gradients);
  return s;
}

PressureSolution PressureSolution::pwl_exact(HeightProfile profile, BoundaryConditions bc,
                                             double C_Q, std::vector<double> C_P,
                                             std::vector<double> knot_pressures) {
  PressureSolution s(Backend::PwlExact, std::move(profile), bc);
  s.x_ = s.profile_.knots();
  s.p_ = std::move(knot_pressures);
  s.C_Q_ = C_Q;
  s.C_P_ = std::move(C_P);
  return s;
}

PressureSolution PressureSolution::grid_linear(HeightProfile profile, BoundaryConditions bc,
                                               std::vector<double> grid_x,
                                               std::vector<double> grid_p) {
  PressureSolution s(Backend::GridLinear, std::move(profile), bc);
  s.x_ = std::move(grid_x);
  s.p_ = std::move(grid_p);
  return s;
}

namespace {

std::size_t locate(const std::vector<double>& xs, double x, Side side) {
  const double span = xs.back() - xs.front();
  if (x < xs.front() - 1e-12 * span || x > xs.back() + 1e-12 * span)
    fail(Errc::OutOfDomain, "x outside solution domain");
  x = std::clamp(x, xs.front(), xs.back());
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t k = (it == xs.begin()) ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
  if (k >= xs.size() - 1) k = xs.size() - 2;
  if (side == Side::Left && k > 0 && x == xs[k]) --k;
  return k;
}

}  // namespace

double PressureSolution::pressure(double x, Side side) const {
  const std::size_t k = locate(x_, x, side);
  switch (backend_) {
    case Backend::PwcExact:
      return p_[k] + gradients_[k] * (x - x_[k]);
    case Backend::PwlExact: {
      // The PWL assembler snaps flat-classified intervals to exactly equal
      // endpoints, so branch selection here is an exact comparison.
      const auto& pl = std::get<PiecewiseLinear>(profile_.kind());
      const double h = profile_(x, side);
      const double euu = 6.0 * bc_.eta * bc_.U;
      if (pl.left[k] == pl.right[k]) {
        return (C_Q_ / cube(h) + euu / (h * h)) * (x - x_[k]) + C_P_[k];
      }
      const double m = (pl.right[k] - pl.left[k]) / (pl.knots[k + 1] - pl.knots[k]);
      return -(0.5 * C_Q_ / (h * h) + euu / h) / m + C_P_[k];
    }
    case Backend::GridLinear: {
      const double t = (x - x_[k]) / (x_[k + 1] - x_[k]);
      return p_[k] + t * (p_[k + 1] - p_[k]);
    }
  }
  return 0.0;
}

double PressureSolution::dpdx(double x, Side side) const {
  const std::size_t k = locate(x_, x, side);
  switch (backend_) {
    case Backend::PwcExact:
      return gradients_[k];
    case Backend::PwlExact: {
      // p' = (C_Q + 6 eta U h) / h^3, both slope branches.
      const double h = profile_(x, side);
      return (C_Q_ + 6.0 * bc_.eta * bc_.U * h) / cube(h);
    }
    case Backend::GridLinear:
      return (p_[k + 1] - p_[k]) / (x_[k + 1] - x_[k]);
  }
  return 0.0;
}

double PressureSolution::d2pdx2(double x, Side side) const {
  const std::size_t k = locate(x_, x, side);
  switch (backend_) {
    case Backend::PwcExact:
      return 0.0;
    case Backend::PwlExact: {
      const double h = profile_(x, side);
      const double m = profile_.slope(x, side);
      return -m * (3.0 * C_Q_ + 12.0 * bc_.eta * bc_.U * h) / (h * h * h * h);
    }
    case Backend::GridLinear: {
      // Second central difference at the nearest interior grid point.
      const std::size_t n = x_.size() - 1;
      const std::size_t j = std::clamp<std::size_t>(k, 1, n - 1);
      const double dx = x_[j + 1] - x_[j];
      return (p_[j + 1] - 2.0 * p_[j] + p_[j - 1]) / (dx * dx);
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Velocity reconstruction

double velocity_u(const PressureSolution& sol, double x, double y, Side side) {
  const double h = sol.profile()(x, side);
  if (y < -1e-12 * h || y > h * (1.0 + 1e-12)) fail(Errc::OutOfDomain, "y outside the gap");
  const auto& bc = sol.bc();
  const double dp = sol.dpdx(x, side);
  return 0.5 / bc.eta * dp * (y * y - h * y) + bc.U / h * (h - y);
}

double velocity_v(const PressureSolution& sol, double x, double y, std::optional<Side> side) {
  if (!side) {
    const auto& xs = sol.knots();
    const double span = xs.back() - xs.front();
    for (std::size_t k = 1; k + 1 < xs.size(); ++k)
      if (std::fabs(x - xs[k]) <= 1e-12 * span)
        fail(Errc::AtKnot, "v is one-sided at knots; pass a side");
    side = Side::Right;
  }
  const double h = sol.profile()(x, *side);
  if (y < -1e-12 * h || y > h * (1.0 + 1e-12)) fail(Errc::OutOfDomain, "y outside the gap");
  const auto& bc = sol.bc();
  const double dp = sol.dpdx(x, *side);
  const double d2p = sol.d2pdx2(x, *side);
  const double dh = sol.profile().slope(x, *side);
  return -d2p / (6.0 * bc.eta) * y * y * y +
         0.5 * (0.5 / bc.eta * (d2p * h + dp * dh) - bc.U / (h * h) * dh) * y * y;
}

double flux_at(const PressureSolution& sol, double x, Side side) {
  const double h = sol.profile()(x, side);
  const auto& bc = sol.bc();
  return -(cube(h) * sol.dpdx(x, side) - 6.0 * bc.eta * bc.U * h) / (12.0 * bc.eta);
}

// ---------------------------------------------------------------------------
// CSV export

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_pressure_csv(const PressureSolution& sol, std::ostream& os) {
  os << "x,p,dpdx\n";
  const auto& xs = sol.knots();
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const Side side = (k + 1 == xs.size()) ? Side::Left : Side::Right;
    os << format_g17(xs[k]) << ',' << format_g17(sol.values()[k]) << ','
       << format_g17(sol.dpdx(xs[k], side)) << '\n';
  }
}

void write_velocity_csv(const PressureSolution& sol, const std::vector<double>& xs,
                        const std::vector<double>& ys, std::ostream& os) {
  os << "x,y,u,v\n";
  for (double x : xs) {
    const double h = sol.profile()(x, Side::Right);
    for (double y : ys) {
      if (y > h) continue;
      const double u = velocity_u(sol, x, y, Side::Right);
      const double v = velocity_v(sol, x, y, Side::Right);
      os << format_g17(x) << ',' << format_g17(y) << ',' << format_g17(u) << ','
         << format_g17(v) << '\n';
    }
  }
}

}  // namespace thinfilm
