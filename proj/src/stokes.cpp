#include "thinfilm/stokes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace thinfilm {

namespace {

double developed_zeta(const BoundaryConditions& bc, double h, double y) {
  // d2/dy2 of the developed-flow stream function.
  return bc.Q * (6.0 * h - 12.0 * y) / (h * h * h) + bc.U * (6.0 * y - 4.0 * h) / (h * h);
}

bool known_psi(NodeType t) { return t != NodeType::Solid; }

}  // namespace

// ---------------------------------------------------------------------------
// Config JSON

StokesConfig stokes_config_from_json(const nlohmann::json& j) {
  StokesConfig cfg;
  try {
    if (j.contains("delta")) cfg.delta = j.at("delta");
    if (j.contains("tol")) cfg.tol = j.at("tol");
    if (j.contains("max_iter")) cfg.max_iter = j.at("max_iter");
    if (j.contains("relaxation")) cfg.relaxation = j.at("relaxation");
    if (j.contains("wall_relaxation")) cfg.wall_relaxation = j.at("wall_relaxation");
    if (j.contains("scheme")) {
      const std::string s = j.at("scheme");
      if (s == "coupled") cfg.scheme = StokesConfig::Scheme::CoupledPoisson;
      else if (s == "sor13") cfg.scheme = StokesConfig::Scheme::Sor13;
      else fail(Errc::BadConfig, "unknown stokes scheme: " + s);
    }
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::BadConfig, std::string("bad stokes config: ") + e.what());
  }
  if (!(cfg.delta > 0) || !(cfg.tol > 0) || !(cfg.relaxation > 0) || cfg.relaxation >= 2.0)
    fail(Errc::BadConfig, "stokes config out of range");
  return cfg;
}

nlohmann::json stokes_config_to_json(const StokesConfig& cfg) {
  return {{"delta", cfg.delta},
          {"tol", cfg.tol},
          {"max_iter", cfg.max_iter},
          {"relaxation", cfg.relaxation},
          {"wall_relaxation", cfg.wall_relaxation},
          {"scheme", cfg.scheme == StokesConfig::Scheme::CoupledPoisson ? "coupled" : "sor13"}};
}

// ---------------------------------------------------------------------------
// Grid

StokesGrid build_stokes_grid(const HeightProfile& profile, double delta) {
  if (!(delta > 0)) fail(Errc::BadConfig, "delta must be positive");
  const double x0 = profile.x0(), x1 = profile.x1();
  const double Lx = x1 - x0;

  if (std::fabs(profile.slope(x0, Side::Right)) > 1e-8 ||
      std::fabs(profile.slope(x1, Side::Left)) > 1e-8)
    fail(Errc::NonFlatInlet, "profile must have zero height gradient at inlet and outlet");

  const auto nx_l = std::llround(Lx / delta);
  if (nx_l < 4 || std::fabs(static_cast<double>(nx_l) * delta - Lx) > 1e-9 * std::max(1.0, Lx))
    fail(Errc::SpacingMismatch, "delta does not divide the domain length");
  const std::size_t nx = static_cast<std::size_t>(nx_l);

  // The inlet/outlet surface must land on a grid line, otherwise the imposed
  // developed profile and the surface Dirichlet value disagree.
  for (double he : {profile(x0, Side::Right), profile(x1, Side::Left)}) {
    const auto js = std::llround(he / delta);
    if (std::fabs(static_cast<double>(js) * delta - he) > 1e-6 * he)
      fail(Errc::SpacingMismatch, "delta does not divide the inlet/outlet height");
  }

  StokesGrid g{.delta = delta,
               .nx = nx,
               .ny = 0,
               .x0 = x0,
               .mask = {},
               .surface_j = {},
               .profile = profile};

  g.surface_j.resize(nx + 1);
  for (std::size_t i = 0; i <= nx; ++i) {
    const double x = (i == nx) ? x1 : x0 + delta * static_cast<double>(i);
    // At a jump the staircase hugs the narrower gap.
    const double h = std::min(profile(x, Side::Left), profile(x, Side::Right));
    const auto js = std::llround(h / delta);
    if (js < 3) fail(Errc::SpacingMismatch, "gap thinner than three cells");
    g.surface_j[i] = static_cast<std::size_t>(js);
    g.ny = std::max(g.ny, g.surface_j[i]);
  }

  g.mask.assign((nx + 1) * (g.ny + 1), NodeType::Solid);
  for (std::size_t i = 0; i <= nx; ++i) {
    const std::size_t js = g.surface_j[i];
    std::size_t riser_top = js;
    if (i > 0) riser_top = std::max(riser_top, g.surface_j[i - 1]);
    if (i < nx) riser_top = std::max(riser_top, g.surface_j[i + 1]);
    for (std::size_t j = 0; j <= g.ny; ++j) {
      NodeType t;
      if (j > js)
        t = (j <= riser_top) ? NodeType::Surface : NodeType::Solid;
      else if (j == js)
        t = NodeType::Surface;
      else if (j == 0)
        t = NodeType::BottomWall;
      else if (i == 0)
        t = NodeType::Inlet;
      else if (i == nx)
        t = NodeType::Outlet;
      else
        t = NodeType::Fluid;
      g.mask[g.idx(i, j)] = t;
    }
  }
  return g;
}

double inlet_stream(const BoundaryConditions& bc, double h0, double y) {
  if (y < -1e-12 * h0 || y > h0 * (1.0 + 1e-12)) fail(Errc::OutOfDomain, "y outside the gap");
  y = std::clamp(y, 0.0, h0);
  return bc.Q * y * y * (3.0 * h0 - 2.0 * y) / (h0 * h0 * h0) +
         bc.U * y * (h0 - y) * (h0 - y) / (h0 * h0);
}

// ---------------------------------------------------------------------------
// Iteration

namespace {

struct Work {
  const StokesGrid& g;
  const BoundaryConditions& bc;
  std::vector<double>& psi;
  std::vector<double>& zeta;
  double dd;  // delta^2

  std::size_t id(std::size_t i, std::size_t j) const { return g.idx(i, j); }

  // Wall vorticity from the one-sided cubic closure
  //   zeta_w = (8 psi_1 - psi_2 - 7 psi_0 - 6 delta t) / (2 delta^2)
  // with psi_k the values k cells into the fluid and t the tangential wall
  // velocity along the into-fluid coordinate.
  double jensen(double p0, double p1, double p2, double t) const {
    return (8.0 * p1 - p2 - 7.0 * p0 - 6.0 * g.delta * t) / (2.0 * dd);
  }

  // New wall-vorticity value for a Surface node, averaging the closures that
  // see fluid; 0 at fully enclosed concave corners (no fluid neighbour reads
  // it). Bottom-wall nodes use the moving-wall closure.
  double wall_zeta_target(std::size_t i, std::size_t j) const {
    const std::size_t js = g.surface_j[i];
    double sum = 0;
    int cnt = 0;
    if (j == js) {  // fluid below
      sum += jensen(psi[id(i, j)], psi[id(i, j - 1)], psi[id(i, j - 2)], 0.0);
      ++cnt;
    }
    if (i >= 2 && known_psi(g.type(i - 1, j)) && g.type(i - 1, j) != NodeType::Surface &&
        known_psi(g.type(i - 2, j))) {  // fluid to the west
      sum += jensen(psi[id(i, j)], psi[id(i - 1, j)], psi[id(i - 2, j)], 0.0);
      ++cnt;
    }
    if (i + 2 <= g.nx && known_psi(g.type(i + 1, j)) && g.type(i + 1, j) != NodeType::Surface &&
        known_psi(g.type(i + 2, j))) {  // fluid to the east
      sum += jensen(psi[id(i, j)], psi[id(i + 1, j)], psi[id(i + 2, j)], 0.0);
      ++cnt;
    }
    return cnt ? sum / cnt : 0.0;
  }

  double bottom_zeta_target(std::size_t i) const {
    return jensen(psi[id(i, 0)], psi[id(i, 1)], psi[id(i, 2)], bc.U);
  }
};

}  // namespace

StokesField iterate_biharmonic(const StokesGrid& grid, const BoundaryConditions& bc_in,
                               const StokesConfig& cfg) {
  const BoundaryConditions bc =
      grid.profile.piecewise()
          ? resolve_bc(grid.profile, bc_in)
          : resolve_bc(sample_pwl(grid.profile, std::max<std::size_t>(grid.nx, 64)), bc_in);
  const std::size_t nx = grid.nx, ny = grid.ny;
  const double delta = grid.delta, dd = delta * delta;

  StokesField f{.grid = grid,
                .bc = bc,
                .psi = {},
                .zeta = {},
                .u = {},
                .v = {},
                .p = {},
                .residual_history = {},
                .status = StokesField::Status::Converged,
                .residual = 0.0,
                .iterations = 0};
  f.psi.assign((nx + 1) * (ny + 1), bc.Q);
  f.zeta.assign((nx + 1) * (ny + 1), 0.0);

  Work w{grid, bc, f.psi, f.zeta, dd};

  // Initial guess: the developed profile of each column's staircase height.
  // It satisfies every Dirichlet value exactly and is the exact solution for
  // a flat channel.
  for (std::size_t i = 0; i <= nx; ++i) {
    const double heff = delta * static_cast<double>(grid.surface_j[i]);
    for (std::size_t j = 0; j <= grid.surface_j[i]; ++j) {
      f.psi[grid.idx(i, j)] = inlet_stream(bc, heff, grid.y_at(j));
      f.zeta[grid.idx(i, j)] = developed_zeta(bc, heff, grid.y_at(j));
    }
  }

  // Fixed inlet vorticity (developed flow at the true inlet height).
  const double h_in = delta * static_cast<double>(grid.surface_j[0]);
  std::vector<double> zeta_in(grid.surface_j[0] + 1);
  for (std::size_t j = 0; j <= grid.surface_j[0]; ++j)
    zeta_in[j] = developed_zeta(bc, h_in, grid.y_at(j));

  const double omega = cfg.relaxation;
  const double sigma = cfg.wall_relaxation;
  const bool coupled = cfg.scheme == StokesConfig::Scheme::CoupledPoisson;

  auto update_boundary_zeta = [&](double relax) {
    for (std::size_t i = 0; i <= nx; ++i) {
      for (std::size_t j = 0; j <= ny; ++j) {
        const NodeType t = grid.type(i, j);
        std::size_t k = grid.idx(i, j);
        if (t == NodeType::BottomWall) {
          f.zeta[k] += relax * (w.bottom_zeta_target(i) - f.zeta[k]);
        } else if (t == NodeType::Surface) {
          f.zeta[k] += relax * (w.wall_zeta_target(i, j) - f.zeta[k]);
        } else if (t == NodeType::Inlet) {
          f.zeta[k] = zeta_in[j];
        }
      }
    }
    // Outlet: zero normal gradient, second order.
    for (std::size_t j = 1; j < grid.surface_j[nx]; ++j) {
      if (grid.type(nx, j) != NodeType::Outlet) continue;
      f.zeta[grid.idx(nx, j)] =
          (4.0 * f.zeta[grid.idx(nx - 1, j)] - f.zeta[grid.idx(nx - 2, j)]) / 3.0;
    }
  };

  update_boundary_zeta(1.0);

  // Direct 13-point relaxation needs ghost closures expressed as an affine
  // function of the centre value; shared with the composite residual below.
  auto stencil13 = [&](std::size_t ci, std::size_t cj, double& A, double& B) {
    A = 0.0;
    B = 0.0;
    auto add = [&](long ii, long jj, double c) {
      // contribution c * psi(ii,jj), tracking references to the centre
      if (ii == static_cast<long>(ci) && jj == static_cast<long>(cj))
        B += c;
      else
        A += c * f.psi[grid.idx(static_cast<std::size_t>(ii), static_cast<std::size_t>(jj))];
    };
    auto leg = [&](long di, long dj, double wgt) {
      const long i = static_cast<long>(ci) + di, j = static_cast<long>(cj) + dj;
      if (j < 0) {  // ghost below the moving bottom wall
        add(i, 1, 3.0 * wgt);
        add(i, 0, -1.5 * wgt);
        add(i, 2, -0.5 * wgt);
        A += wgt * (-3.0 * delta * bc.U);
        return;
      }
      if (i < 0) {  // inlet: d psi/dx = 0
        add(0, j, -1.5 * wgt);
        add(1, j, 3.0 * wgt);
        add(2, j, -0.5 * wgt);
        return;
      }
      if (i > static_cast<long>(nx)) {  // outlet: d psi/dx = 0
        add(nx, j, -1.5 * wgt);
        add(nx - 1, j, 3.0 * wgt);
        add(nx - 2, j, -0.5 * wgt);
        return;
      }
      const std::size_t ui = static_cast<std::size_t>(i);
      if (j <= static_cast<long>(ny) && grid.type(ui, static_cast<std::size_t>(j)) != NodeType::Solid) {
        add(i, j, wgt);
        return;
      }
      const std::size_t js = grid.surface_j[ui];
      if (j == static_cast<long>(js) + 1) {  // ghost above the surface
        add(i, static_cast<long>(js) - 1, 3.0 * wgt);
        add(i, static_cast<long>(js), -1.5 * wgt);
        add(i, static_cast<long>(js) - 2, -0.5 * wgt);
        return;
      }
      if (j > static_cast<long>(ny)) {
        A += wgt * bc.Q;
        return;
      }
      // ghost across a vertical wall, west or east of the node
      if (ui >= 3 && grid.type(ui - 1, static_cast<std::size_t>(j)) == NodeType::Surface &&
          known_psi(grid.type(ui - 2, static_cast<std::size_t>(j))) &&
          known_psi(grid.type(ui - 3, static_cast<std::size_t>(j)))) {
        add(i - 2, j, 3.0 * wgt);
        add(i - 1, j, -1.5 * wgt);
        add(i - 3, j, -0.5 * wgt);
        return;
      }
      if (ui + 3 <= nx && grid.type(ui + 1, static_cast<std::size_t>(j)) == NodeType::Surface &&
          known_psi(grid.type(ui + 2, static_cast<std::size_t>(j))) &&
          known_psi(grid.type(ui + 3, static_cast<std::size_t>(j)))) {
        add(i + 2, j, 3.0 * wgt);
        add(i + 1, j, -1.5 * wgt);
        add(i + 3, j, -0.5 * wgt);
        return;
      }
      A += wgt * bc.Q;  // staircase corner fallback
    };
    leg(-1, 0, -8.0); leg(1, 0, -8.0); leg(0, -1, -8.0); leg(0, 1, -8.0);
    leg(-1, -1, 2.0); leg(-1, 1, 2.0); leg(1, -1, 2.0); leg(1, 1, 2.0);
    leg(-2, 0, 1.0); leg(2, 0, 1.0); leg(0, -2, 1.0); leg(0, 2, 1.0);
  };

  const double q_scale = std::max(std::fabs(bc.Q), 1e-30);
  double first_residual = -1.0;

  for (std::size_t iter = 1; iter <= cfg.max_iter; ++iter) {
    double dpsi_max = 0.0;

    if (coupled) {
      update_boundary_zeta(sigma);
      // zeta sweep
      for (std::size_t i = 1; i < nx; ++i)
        for (std::size_t j = 1, js = grid.surface_j[i]; j < js; ++j) {
          if (grid.type(i, j) != NodeType::Fluid) continue;
          const std::size_t k = grid.idx(i, j);
          const double gs = 0.25 * (f.zeta[grid.idx(i - 1, j)] + f.zeta[grid.idx(i + 1, j)] +
                                    f.zeta[k - 1] + f.zeta[k + 1]);
          f.zeta[k] += omega * (gs - f.zeta[k]);
        }
      for (std::size_t j = 1; j < grid.surface_j[nx]; ++j)
        if (grid.type(nx, j) == NodeType::Outlet)
          f.zeta[grid.idx(nx, j)] =
              (4.0 * f.zeta[grid.idx(nx - 1, j)] - f.zeta[grid.idx(nx - 2, j)]) / 3.0;
      // psi sweep
      for (std::size_t i = 1; i < nx; ++i)
        for (std::size_t j = 1, js = grid.surface_j[i]; j < js; ++j) {
          if (grid.type(i, j) != NodeType::Fluid) continue;
          const std::size_t k = grid.idx(i, j);
          const double gs = 0.25 * (f.psi[grid.idx(i - 1, j)] + f.psi[grid.idx(i + 1, j)] +
                                    f.psi[k - 1] + f.psi[k + 1] - dd * f.zeta[k]);
          const double upd = omega * (gs - f.psi[k]);
          f.psi[k] += upd;
          dpsi_max = std::max(dpsi_max, std::fabs(upd));
        }
    } else {
      // direct 13-point SOR
      for (std::size_t i = 1; i < nx; ++i)
        for (std::size_t j = 1, js = grid.surface_j[i]; j < js; ++j) {
          if (grid.type(i, j) != NodeType::Fluid) continue;
          double A, B;
          stencil13(i, j, A, B);
          const std::size_t k = grid.idx(i, j);
          const double gs = -A / (20.0 + B);
          const double upd = omega * (gs - f.psi[k]);
          f.psi[k] += upd;
          dpsi_max = std::max(dpsi_max, std::fabs(upd));
        }
    }

    for (std::size_t j = 1; j < grid.surface_j[nx]; ++j)
      if (grid.type(nx, j) == NodeType::Outlet)
        f.psi[grid.idx(nx, j)] =
            (4.0 * f.psi[grid.idx(nx - 1, j)] - f.psi[grid.idx(nx - 2, j)]) / 3.0;

    // Residual of the discrete system (relative inf-norm).
    double psi_scale = q_scale;
    for (std::size_t i = 0; i <= nx; ++i)
      for (std::size_t j = 0; j <= grid.surface_j[i]; ++j)
        psi_scale = std::max(psi_scale, std::fabs(f.psi[grid.idx(i, j)]));

    double resid = 0.0;
    if (coupled) {
      double zeta_scale = 1e-30;
      for (std::size_t i = 0; i <= nx; ++i)
        for (std::size_t j = 0; j <= grid.surface_j[i]; ++j)
          zeta_scale = std::max(zeta_scale, std::fabs(f.zeta[grid.idx(i, j)]));
      double r1 = 0.0, r2 = 0.0, rb = 0.0;
      for (std::size_t i = 1; i < nx; ++i)
        for (std::size_t j = 1, js = grid.surface_j[i]; j < js; ++j) {
          if (grid.type(i, j) != NodeType::Fluid) continue;
          const std::size_t k = grid.idx(i, j);
          const double lp = f.psi[grid.idx(i - 1, j)] + f.psi[grid.idx(i + 1, j)] + f.psi[k - 1] +
                            f.psi[k + 1] - 4.0 * f.psi[k];
          const double lz = f.zeta[grid.idx(i - 1, j)] + f.zeta[grid.idx(i + 1, j)] +
                            f.zeta[k - 1] + f.zeta[k + 1] - 4.0 * f.zeta[k];
          r1 = std::max(r1, std::fabs(lp - dd * f.zeta[k]));
          r2 = std::max(r2, std::fabs(lz));
        }
      for (std::size_t i = 0; i <= nx; ++i)
        for (std::size_t j = 0; j <= ny; ++j) {
          const NodeType t = grid.type(i, j);
          if (t == NodeType::BottomWall)
            rb = std::max(rb, std::fabs(w.bottom_zeta_target(i) - f.zeta[grid.idx(i, j)]));
          else if (t == NodeType::Surface)
            rb = std::max(rb, std::fabs(w.wall_zeta_target(i, j) - f.zeta[grid.idx(i, j)]));
        }
      // Wall rows are zeta assignments, scaled like the interior zeta rows.
      resid = std::max({r1 / (4.0 * psi_scale), r2 / (4.0 * zeta_scale), rb / (4.0 * zeta_scale)});
    } else {
      double r = 0.0;
      for (std::size_t i = 1; i < nx; ++i)
        for (std::size_t j = 1, js = grid.surface_j[i]; j < js; ++j) {
          if (grid.type(i, j) != NodeType::Fluid) continue;
          double A, B;
          stencil13(i, j, A, B);
          r = std::max(r, std::fabs((20.0 + B) * f.psi[grid.idx(i, j)] + A));
        }
      resid = r / (20.0 * psi_scale);
    }

    f.residual_history.push_back(resid);
    f.residual = resid;
    f.iterations = iter;
    if (first_residual < 0) first_residual = resid;

    if (!std::isfinite(resid) || resid > 1e6 * std::max(1.0, first_residual)) {
      f.status = StokesField::Status::Diverged;
      return f;
    }
    if (resid <= cfg.tol && dpsi_max / psi_scale <= cfg.tol) {
      f.status = StokesField::Status::Converged;
      recover_velocity(f);
      recover_pressure(f);
      return f;
    }
  }
  f.status = StokesField::Status::MaxIterations;
  recover_velocity(f);
  recover_pressure(f);
  return f;
}

// ---------------------------------------------------------------------------
// Velocity recovery (stencils exact for cubics)

namespace {

// First derivative of f at index pos within four consecutive values spaced d.
double deriv4(const double* f, int pos, double d) {
  switch (pos) {
    case 0: return (-11.0 * f[0] + 18.0 * f[1] - 9.0 * f[2] + 2.0 * f[3]) / (6.0 * d);
    case 1: return (-2.0 * f[0] - 3.0 * f[1] + 6.0 * f[2] - f[3]) / (6.0 * d);
    case 2: return (f[0] - 6.0 * f[1] + 3.0 * f[2] + 2.0 * f[3]) / (6.0 * d);
    default: return (11.0 * f[3] - 18.0 * f[2] + 9.0 * f[1] - 2.0 * f[0]) / (6.0 * d);
  }
}

// Derivative along a line of m values; centred fourth order in the interior,
// cubic-exact offset stencils near the ends, low-order fallback for short
// runs.
void line_derivative(const std::vector<double>& vals, double d, std::vector<double>& out) {
  const std::size_t m = vals.size();
  out.assign(m, 0.0);
  if (m < 2) return;
  if (m == 2) {
    out[0] = out[1] = (vals[1] - vals[0]) / d;
    return;
  }
  if (m == 3) {
    out[0] = (-3.0 * vals[0] + 4.0 * vals[1] - vals[2]) / (2.0 * d);
    out[1] = (vals[2] - vals[0]) / (2.0 * d);
    out[2] = (3.0 * vals[2] - 4.0 * vals[1] + vals[0]) / (2.0 * d);
    return;
  }
  for (std::size_t k = 0; k < m; ++k) {
    if (k >= 2 && k + 2 < m) {
      out[k] = (-vals[k + 2] + 8.0 * vals[k + 1] - 8.0 * vals[k - 1] + vals[k - 2]) / (12.0 * d);
    } else if (k == 0) {
      out[k] = deriv4(vals.data(), 0, d);
    } else if (k == 1) {
      out[k] = deriv4(vals.data(), 1, d);
    } else if (k + 2 == m) {
      out[k] = deriv4(vals.data() + m - 4, 2, d);
    } else {  // k + 1 == m
      out[k] = deriv4(vals.data() + m - 4, 3, d);
    }
  }
}

}  // namespace

void recover_velocity(StokesField& f) {
  const StokesGrid& g = f.grid;
  const std::size_t nx = g.nx, ny = g.ny;
  f.u.assign((nx + 1) * (ny + 1), 0.0);
  f.v.assign((nx + 1) * (ny + 1), 0.0);

  // u = dpsi/dy column by column; walls get their no-slip values exactly.
  std::vector<double> col, dcol;
  for (std::size_t i = 0; i <= nx; ++i) {
    const std::size_t js = g.surface_j[i];
    col.assign(f.psi.begin() + static_cast<long>(g.idx(i, 0)),
               f.psi.begin() + static_cast<long>(g.idx(i, js)) + 1);
    line_derivative(col, g.delta, dcol);
    for (std::size_t j = 0; j <= js; ++j) f.u[g.idx(i, j)] = dcol[j];
    f.u[g.idx(i, 0)] = f.bc.U;
    f.u[g.idx(i, js)] = 0.0;
  }

  // v = -dpsi/dx row by row over maximal non-solid runs.
  std::vector<double> row, drow;
  for (std::size_t j = 1; j <= ny; ++j) {
    std::size_t i = 0;
    while (i <= nx) {
      if (g.type(i, j) == NodeType::Solid) {
        ++i;
        continue;
      }
      std::size_t b = i;
      while (b + 1 <= nx && g.type(b + 1, j) != NodeType::Solid) ++b;
      row.clear();
      for (std::size_t ii = i; ii <= b; ++ii) row.push_back(f.psi[g.idx(ii, j)]);
      line_derivative(row, g.delta, drow);
      for (std::size_t ii = i; ii <= b; ++ii) f.v[g.idx(ii, j)] = -drow[ii - i];
      i = b + 1;
    }
  }
  // No-slip / boundary values win over one-sided differences.
  for (std::size_t i = 0; i <= nx; ++i)
    for (std::size_t j = 0; j <= ny; ++j) {
      switch (g.type(i, j)) {
        case NodeType::Surface: f.u[g.idx(i, j)] = 0.0; f.v[g.idx(i, j)] = 0.0; break;
        case NodeType::BottomWall: f.u[g.idx(i, j)] = f.bc.U; f.v[g.idx(i, j)] = 0.0; break;
        case NodeType::Inlet:
        case NodeType::Outlet: f.v[g.idx(i, j)] = 0.0; break;
        case NodeType::Solid: f.u[g.idx(i, j)] = 0.0; f.v[g.idx(i, j)] = 0.0; break;
        default: break;
      }
    }
}

// ---------------------------------------------------------------------------
// Pressure recovery

namespace {

// 5-point Laplacian of a velocity component with one-sided second-order
// (cubic-exact) replacements where a neighbour row/column is unavailable.
double lap_component(const StokesGrid& g, const std::vector<double>& q, std::size_t i,
                     std::size_t j) {
  const double dd = g.delta * g.delta;
  auto at = [&](std::size_t ii, std::size_t jj) { return q[g.idx(ii, jj)]; };
  const std::size_t js = g.surface_j[i];

  double dxx;
  if (i == 0)
    dxx = (2.0 * at(0, j) - 5.0 * at(1, j) + 4.0 * at(2, j) - at(3, j)) / dd;
  else if (i == g.nx)
    dxx = (2.0 * at(g.nx, j) - 5.0 * at(g.nx - 1, j) + 4.0 * at(g.nx - 2, j) - at(g.nx - 3, j)) / dd;
  else
    dxx = (at(i - 1, j) - 2.0 * at(i, j) + at(i + 1, j)) / dd;

  double dyy;
  if (j == 0)
    dyy = (2.0 * at(i, 0) - 5.0 * at(i, 1) + 4.0 * at(i, 2) - at(i, 3)) / dd;
  else if (j >= js)
    dyy = (2.0 * at(i, js) - 5.0 * at(i, js - 1) + 4.0 * at(i, js - 2) - at(i, js - 3)) / dd;
  else
    dyy = (at(i, j - 1) - 2.0 * at(i, j) + at(i, j + 1)) / dd;

  return dxx + dyy;
}

}  // namespace

void recover_pressure(StokesField& f) {
  const StokesGrid& g = f.grid;
  const std::size_t nx = g.nx, ny = g.ny;
  const double eta = f.bc.eta;
  f.p.assign((nx + 1) * (ny + 1), 0.0);

  // dp/dx along the lower wall, integrated westward from the outlet.
  std::vector<double> px_wall(nx + 1);
  for (std::size_t i = 0; i <= nx; ++i) px_wall[i] = eta * lap_component(g, f.u, i, 0);
  std::vector<double> p_wall(nx + 1, 0.0);
  for (std::size_t i = nx; i-- > 0;)
    p_wall[i] = p_wall[i + 1] - 0.5 * g.delta * (px_wall[i] + px_wall[i + 1]);

  // dp/dy up each column.
  for (std::size_t i = 0; i <= nx; ++i) {
    const std::size_t js = g.surface_j[i];
    double prev_py = eta * lap_component(g, f.v, i, 0);
    double p = p_wall[i];
    f.p[g.idx(i, 0)] = p;
    for (std::size_t j = 1; j <= js; ++j) {
      const double py = eta * lap_component(g, f.v, i, j);
      p += 0.5 * g.delta * (py + prev_py);
      f.p[g.idx(i, j)] = p;
      prev_py = py;
    }
  }

  // Anchor: outlet column mean equals P_N.
  const std::size_t js_out = g.surface_j[nx];
  double mean = 0;
  for (std::size_t j = 0; j <= js_out; ++j) mean += f.p[g.idx(nx, j)];
  mean /= static_cast<double>(js_out + 1);
  const double shift = f.bc.P_N - mean;
  for (std::size_t i = 0; i <= nx; ++i)
    for (std::size_t j = 0; j <= g.surface_j[i]; ++j) f.p[g.idx(i, j)] += shift;
}

double column_flux(const StokesField& f, std::size_t i) {
  const StokesGrid& g = f.grid;
  const std::size_t js = g.surface_j[i];
  double s = 0;
  for (std::size_t j = 0; j < js; ++j)
    s += 0.5 * g.delta * (f.u[g.idx(i, j)] + f.u[g.idx(i, j + 1)]);
  return s;
}

void write_field_csv(const StokesField& f, std::ostream& os) {
  os << "x,y,mask,psi,u,v,p\n";
  const StokesGrid& g = f.grid;
  for (std::size_t i = 0; i <= g.nx; ++i)
    for (std::size_t j = 0; j <= g.ny; ++j) {
      const std::size_t k = g.idx(i, j);
      os << format_g17(g.x_at(i)) << ',' << format_g17(g.y_at(j)) << ','
         << static_cast<int>(g.type(i, j)) << ',' << format_g17(f.psi[k]) << ','
         << format_g17(f.u[k]) << ',' << format_g17(f.v[k]) << ',' << format_g17(f.p[k]) << '\n';
    }
}

}  // namespace thinfilm
