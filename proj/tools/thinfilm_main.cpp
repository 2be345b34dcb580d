// thinfilm: batch front-end for the lubrication solvers.
//
//   solve    one geometry, one method -> pressure.csv (or field.csv for stokes)
//   converge grid-refinement study    -> report.json + report.csv
//   bench    wall-time complexity fit -> report.json + report.csv
//   compare  Reynolds vs Stokes       -> report.json
//
// Every run writes manifest.json (config echo + wall time). Data files are
// deterministic: same config, byte-identical bytes.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "thinfilm/analysis.hpp"
#include "thinfilm/fd.hpp"
#include "thinfilm/pwc.hpp"
#include "thinfilm/pwl.hpp"
#include "thinfilm/stokes.hpp"

namespace fs = std::filesystem;
using namespace thinfilm;

namespace {

constexpr const char* kVersion = "0.1.0";

struct GeometryFlags {
  std::string name;
  std::string json_path;
  double Hin = 2, Hout = 1, l = 8;
  std::optional<double> L;  // default depends on the geometry
  double lin = 7, lout = 7, lwedge = 2;
  double lambda = 32;
  double H0 = 1, delta = 0.5, alpha = 6.283185307179586;
  int k = 2;
};

void add_geometry_flags(CLI::App* cmd, GeometryFlags& g) {
  cmd->add_option("--geometry", g.name,
                  "bfs | wedge | logistic | sinusoid-cavity | sinusoid-periodic");
  cmd->add_option("--geometry-json", g.json_path, "geometry spec JSON file");
  cmd->add_option("--Hin", g.Hin, "inlet height");
  cmd->add_option("--Hout", g.Hout, "outlet height");
  cmd->add_option("--l", g.l, "step position (bfs) / texture half-run (sinusoid-cavity)");
  cmd->add_option("--L", g.L,
                  "domain length; defaults: 16 (bfs/logistic), 8 (sinusoid-cavity half-length), "
                  "one period 2*pi/alpha (sinusoid-periodic)");
  cmd->add_option("--lin", g.lin, "wedge inlet run");
  cmd->add_option("--lout", g.lout, "wedge outlet run");
  cmd->add_option("--lwedge", g.lwedge, "wedge ramp length");
  cmd->add_option("--lambda", g.lambda, "logistic transition rate");
  cmd->add_option("--H0", g.H0, "sinusoid equilibrium height");
  cmd->add_option("--delta", g.delta, "sinusoid relative amplitude");
  cmd->add_option("--alpha", g.alpha, "sinusoid wavenumber (periodic form)");
  cmd->add_option("--k", g.k, "sinusoid texture count (cavity form)");
}

GeometrySpec geometry_from_flags(const GeometryFlags& g) {
  if (!g.json_path.empty()) {
    std::ifstream in(g.json_path);
    if (!in) fail(Errc::IoError, "cannot read " + g.json_path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      fail(Errc::BadConfig, std::string("bad geometry JSON: ") + e.what());
    }
    return geometry_from_json(j);
  }
  if (g.name == "bfs") return Bfs{g.Hin, g.Hout, g.l, g.L.value_or(16.0)};
  if (g.name == "wedge") return WedgeGeom{g.Hin, g.Hout, g.lin, g.lout, g.lwedge};
  if (g.name == "logistic") return LogisticGeom{g.Hin, g.Hout, g.lambda, g.L.value_or(16.0)};
  if (g.name == "sinusoid-cavity")
    return SinusoidCavity{g.H0, g.delta, g.k, g.l, g.L.value_or(8.0)};
  if (g.name == "sinusoid-periodic")
    return SinusoidPeriodic{g.H0, g.delta, g.alpha, g.L.value_or(2.0 * M_PI / g.alpha)};
  fail(Errc::BadConfig, "unknown or missing --geometry (or use --geometry-json)");
}

struct BcFlags {
  std::optional<double> Q, P0, dP;
  double PN = 0, U = 0, eta = 1;
};

void add_bc_flags(CLI::App* cmd, BcFlags& b) {
  cmd->add_option("--Q", b.Q, "prescribed flux");
  cmd->add_option("--P0", b.P0, "prescribed inlet pressure (Dirichlet mode)");
  cmd->add_option("--dP", b.dP, "prescribed pressure drop P_N - P_0 (Dirichlet mode)");
  cmd->add_option("--PN", b.PN, "outlet pressure");
  cmd->add_option("--U", b.U, "lower-wall sliding velocity");
  cmd->add_option("--eta", b.eta, "dynamic viscosity");
}

BoundaryConditions bc_from_flags(const BcFlags& b) {
  const int given = int(b.Q.has_value()) + int(b.P0.has_value()) + int(b.dP.has_value());
  if (given != 1) fail(Errc::BadConfig, "exactly one of --Q, --P0, --dP must be given");
  BoundaryConditions bc;
  bc.P_N = b.PN;
  bc.U = b.U;
  bc.eta = b.eta;
  if (!(bc.eta > 0)) fail(Errc::BadConfig, "--eta must be positive");
  if (b.Q) {
    bc.Q = *b.Q;
    bc.mode = BcMode::MixedFluxOutlet;
  } else {
    bc.P_0 = b.P0 ? *b.P0 : b.PN - *b.dP;
    bc.mode = BcMode::DirichletPressureDrop;
  }
  return bc;
}

struct StokesFlags {
  std::string config_path;
  std::optional<double> delta, tol, relaxation, wall_relaxation;
  std::optional<std::size_t> max_iter;
  std::optional<std::string> scheme;
};

void add_stokes_flags(CLI::App* cmd, StokesFlags& s) {
  cmd->add_option("--stokes-config", s.config_path, "stokes config JSON file");
  cmd->add_option("--stokes-delta", s.delta, "grid spacing");
  cmd->add_option("--stokes-tol", s.tol, "relative residual tolerance");
  cmd->add_option("--stokes-max-iter", s.max_iter, "iteration cap");
  cmd->add_option("--stokes-relaxation", s.relaxation, "SOR factor");
  cmd->add_option("--stokes-wall-relaxation", s.wall_relaxation, "wall vorticity relaxation");
  cmd->add_option("--stokes-scheme", s.scheme, "coupled | sor13");
}

StokesConfig stokes_from_flags(const StokesFlags& s) {
  StokesConfig cfg;
  if (!s.config_path.empty()) {
    std::ifstream in(s.config_path);
    if (!in) fail(Errc::IoError, "cannot read " + s.config_path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      fail(Errc::BadConfig, std::string("bad stokes config JSON: ") + e.what());
    }
    cfg = stokes_config_from_json(j);
  }
  // flags override the config file
  if (s.delta) cfg.delta = *s.delta;
  if (s.tol) cfg.tol = *s.tol;
  if (s.max_iter) cfg.max_iter = *s.max_iter;
  if (s.relaxation) cfg.relaxation = *s.relaxation;
  if (s.wall_relaxation) cfg.wall_relaxation = *s.wall_relaxation;
  if (s.scheme) {
    if (*s.scheme == "coupled") cfg.scheme = StokesConfig::Scheme::CoupledPoisson;
    else if (*s.scheme == "sor13") cfg.scheme = StokesConfig::Scheme::Sor13;
    else fail(Errc::BadConfig, "unknown stokes scheme: " + *s.scheme);
  }
  return cfg;
}

std::vector<std::size_t> parse_sizes(const std::string& csv) {
  std::vector<std::size_t> sizes;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      const long v = std::stol(tok);
      if (v < 1) throw std::out_of_range("size");
      sizes.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      fail(Errc::BadConfig, "bad size list entry: " + tok);
    }
  }
  if (sizes.empty()) fail(Errc::BadConfig, "empty size list");
  return sizes;
}

std::vector<Method> parse_methods(const std::string& csv) {
  std::vector<Method> ms;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) ms.push_back(method_from_name(tok));
  if (ms.empty()) fail(Errc::BadConfig, "empty method list");
  return ms;
}

void write_text_file(const fs::path& path, const std::string& body) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(Errc::IoError, "cannot write " + path.string());
  os << body;
  if (!os) fail(Errc::IoError, "write failed: " + path.string());
}

struct Manifest {
  nlohmann::json config;
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void write(const fs::path& dir) const {
    nlohmann::json j{{"tool", "thinfilm"},
                     {"version", kVersion},
                     {"config", config},
                     {"outputs", outputs},
                     {"wall_time_s",
                      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                          .count()}};
    std::ofstream os(dir / "manifest.json", std::ios::binary);
    os << j.dump(2) << '\n';
  }
};

int classify_exit(const Error& e) {
  switch (e.code()) {
    case Errc::SingularMatrix:
    case Errc::IoError:
      return 1;
    default:
      return 2;
  }
}

nlohmann::json bc_to_json(const BoundaryConditions& bc) {
  nlohmann::json j{{"P_N", bc.P_N}, {"U", bc.U}, {"eta", bc.eta}};
  if (bc.mode == BcMode::MixedFluxOutlet) j["Q"] = bc.Q;
  else j["P_0"] = bc.P_0;
  return j;
}

// ---------------------------------------------------------------------------

int run_solve(const GeometryFlags& gf, const BcFlags& bf, const StokesFlags& sf,
              const std::string& method, std::size_t n, const std::string& out_dir,
              bool velocity, std::size_t vel_nx, std::size_t vel_ny) {
  const GeometrySpec spec = geometry_from_flags(gf);
  const BoundaryConditions bc = bc_from_flags(bf);
  const HeightProfile profile = build_profile(spec);
  const StokesConfig scfg = stokes_from_flags(sf);
  if (method != "pwc" && method != "pwl" && method != "fd" && method != "stokes")
    fail(Errc::BadConfig, "--method must be pwc | pwl | fd | stokes");

  Manifest man;
  man.config = {{"subcommand", "solve"},
                {"geometry", geometry_to_json(spec)},
                {"bc", bc_to_json(bc)},
                {"method", method},
                {"n", n}};
  if (method == "stokes") man.config["stokes"] = stokes_config_to_json(scfg);
  {
    // report-only flow-regime diagnostics; they never gate a solve
    const LubricationRegime r = regime_for(profile, resolve_bc(
        profile.piecewise() ? profile : sample_pwl(profile, 1024), bc));
    man.config["regime"] = {{"L_x", r.L_x},     {"L_y", r.L_y}, {"epsilon", r.epsilon},
                            {"Re", r.Re},       {"U_star", r.U_star},
                            {"V_star", r.V_star}};
  }

  fs::create_directories(out_dir);

  if (method == "stokes") {
    const StokesGrid grid = build_stokes_grid(profile, scfg.delta);
    const StokesField field = iterate_biharmonic(grid, bc, scfg);
    if (field.status != StokesField::Status::Converged) {
      std::cerr << "stokes iteration did not converge: residual " << field.residual << " after "
                << field.iterations << " iterations\n";
      return 1;
    }
    std::ostringstream os;
    write_field_csv(field, os);
    write_text_file(fs::path(out_dir) / "field.csv", os.str());
    man.outputs = {"field.csv"};
    man.write(out_dir);
    std::cout << "wrote " << out_dir << "/field.csv (" << field.iterations << " iterations)\n";
    return 0;
  }

  PressureSolution sol = [&] {
    const bool analytic = !profile.piecewise();
    switch (method_from_name(method)) {
      case Method::PWC: return solve_pwc(analytic ? sample_pwc(profile, n) : profile, bc);
      case Method::PWL:
        return solve_pwl(analytic ? sample_pwl(profile, n) : as_piecewise_linear(profile), bc);
      default: return solve_fd(profile, bc, n, FDPath::Banded);
    }
  }();

  std::ostringstream os;
  write_pressure_csv(sol, os);
  write_text_file(fs::path(out_dir) / "pressure.csv", os.str());
  man.outputs = {"pressure.csv"};

  if (velocity) {
    const double x0 = profile.x0(), x1 = profile.x1();
    std::vector<double> xs(vel_nx), ys(vel_ny);
    for (std::size_t i = 0; i < vel_nx; ++i)  // cell centres avoid the knot one-sidedness
      xs[i] = x0 + (x1 - x0) * (static_cast<double>(i) + 0.5) / static_cast<double>(vel_nx);
    double hmax = 0;
    for (double x : xs) hmax = std::max(hmax, profile(x));
    for (std::size_t j = 0; j < vel_ny; ++j)
      ys[j] = hmax * static_cast<double>(j) / static_cast<double>(vel_ny - 1);
    std::ostringstream vs;
    write_velocity_csv(sol, xs, ys, vs);
    write_text_file(fs::path(out_dir) / "velocity.csv", vs.str());
    man.outputs.push_back("velocity.csv");
  }

  man.write(out_dir);
  std::cout << "wrote " << out_dir << "/pressure.csv (p(x0) = " << sol.values().front() << ")\n";
  return 0;
}

int run_converge(const GeometryFlags& gf, const BcFlags& bf, const std::string& methods_csv,
                 const std::string& sizes_csv, const std::string& out_dir) {
  const GeometrySpec spec = geometry_from_flags(gf);
  const BoundaryConditions bc = bc_from_flags(bf);
  const auto methods = parse_methods(methods_csv);
  const auto sizes = parse_sizes(sizes_csv);
  if (sizes.size() < 3) fail(Errc::BadConfig, "need at least 3 sizes");

  Manifest man;
  man.config = {{"subcommand", "converge"},
                {"geometry", geometry_to_json(spec)},
                {"bc", bc_to_json(bc)},
                {"methods", methods_csv},
                {"sizes", sizes}};

  std::vector<ConvergenceReport> reports;
  for (Method m : methods) reports.push_back(convergence_study(m, spec, bc, sizes));

  fs::create_directories(out_dir);
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : reports) j.push_back(convergence_report_to_json(r));
  write_text_file(fs::path(out_dir) / "report.json", j.dump(2) + "\n");
  std::ostringstream cs;
  write_convergence_csv(reports, cs);
  write_text_file(fs::path(out_dir) / "report.csv", cs.str());
  man.outputs = {"report.json", "report.csv"};
  man.write(out_dir);

  for (const auto& r : reports)
    std::cout << method_name(r.method) << ": l2 order " << r.order_l2.slope << ", linf order "
              << r.order_linf.slope << '\n';
  return 0;
}

int run_bench(const GeometryFlags& gf, const BcFlags& bf, const std::string& methods_csv,
              const std::string& sizes_csv, const std::string& fd_sizes_csv, std::size_t reps,
              std::size_t warmups, std::size_t fd_cap, const std::string& out_dir) {
  const GeometrySpec spec = geometry_from_flags(gf);
  const BoundaryConditions bc = bc_from_flags(bf);
  const auto methods = parse_methods(methods_csv);
  const auto sizes = parse_sizes(sizes_csv);
  if (reps < 5) fail(Errc::BadConfig, "need --reps >= 5");

  // The dense FD path is O(N^3); cap its sizes separately.
  std::vector<std::size_t> fd_sizes;
  if (!fd_sizes_csv.empty()) {
    fd_sizes = parse_sizes(fd_sizes_csv);
  } else {
    for (std::size_t s : sizes)
      if (s <= fd_cap) fd_sizes.push_back(s);
    if (fd_sizes.size() < 2) fd_sizes = {1000, 1600, 2500, 4000};
  }

  Manifest man;
  man.config = {{"subcommand", "bench"}, {"geometry", geometry_to_json(spec)},
                {"bc", bc_to_json(bc)},  {"methods", methods_csv},
                {"sizes", sizes},        {"fd_sizes", fd_sizes},
                {"reps", reps},          {"warmups", warmups}};

  std::vector<TimingReport> reports;
  for (Method m : methods)
    reports.push_back(
        timing_study(m, spec, bc, m == Method::FD ? fd_sizes : sizes, reps, warmups));

  fs::create_directories(out_dir);
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : reports) j.push_back(timing_report_to_json(r));
  write_text_file(fs::path(out_dir) / "report.json", j.dump(2) + "\n");
  std::ostringstream cs;
  write_timing_csv(reports, cs);
  write_text_file(fs::path(out_dir) / "report.csv", cs.str());
  man.outputs = {"report.json", "report.csv"};
  man.write(out_dir);

  for (const auto& r : reports)
    std::cout << method_name(r.method) << ": slope " << r.slope.slope << '\n';
  return 0;
}

int run_compare(const GeometryFlags& gf, const BcFlags& bf, const StokesFlags& sf,
                const std::string& out_dir, bool dump_field) {
  const GeometrySpec spec = geometry_from_flags(gf);
  const BoundaryConditions bc = bc_from_flags(bf);
  const StokesConfig scfg = stokes_from_flags(sf);
  const HeightProfile profile = build_profile(spec);

  Manifest man;
  man.config = {{"subcommand", "compare"},
                {"geometry", geometry_to_json(spec)},
                {"bc", bc_to_json(bc)},
                {"stokes", stokes_config_to_json(scfg)}};

  const StokesGrid grid = build_stokes_grid(profile, scfg.delta);
  const StokesField field = iterate_biharmonic(grid, bc, scfg);
  if (field.status != StokesField::Status::Converged) {
    std::cerr << "stokes iteration did not converge: residual " << field.residual << " after "
              << field.iterations << " iterations\n";
    return 1;
  }
  const ComparisonReport rep = compare_reynolds_stokes(field);

  fs::create_directories(out_dir);
  write_text_file(fs::path(out_dir) / "report.json", comparison_report_to_json(rep).dump(2) + "\n");
  man.outputs = {"report.json"};
  if (dump_field) {
    std::ostringstream os;
    write_field_csv(field, os);
    write_text_file(fs::path(out_dir) / "field.csv", os.str());
    man.outputs.push_back("field.csv");
  }
  man.write(out_dir);

  std::cout << "dP_reynolds " << rep.dP_reynolds << ", dP_stokes " << rep.dP_stokes
            << ", recirculation " << (rep.recirculation ? "true" : "false") << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thinfilm: lubrication solvers for textured sliders"};
  app.require_subcommand(1);

  GeometryFlags gf;
  BcFlags bf;
  StokesFlags sf;
  std::string method = "pwl", methods_csv = "fd,pwc,pwl";
  std::string sizes_csv = "64,128,256,512,1024";
  std::string bench_sizes_csv = "1000,3162,10000,31623,100000";
  std::string fd_sizes_csv;
  std::string out_dir = "out";
  std::size_t n = 256, reps = 5, warmups = 2, fd_cap = 4000;
  bool velocity = false, dump_field = false;
  std::size_t vel_nx = 64, vel_ny = 32;

  auto* solve = app.add_subcommand("solve", "solve one geometry with one method");
  add_geometry_flags(solve, gf);
  add_bc_flags(solve, bf);
  add_stokes_flags(solve, sf);
  solve->add_option("--method", method, "pwc | pwl | fd | stokes");
  solve->add_option("--N", n, "sampling / grid intervals for analytic profiles and fd");
  solve->add_option("--out", out_dir, "output directory");
  solve->add_flag("--velocity", velocity, "also export velocity.csv");
  solve->add_option("--vel-nx", vel_nx, "velocity grid columns");
  solve->add_option("--vel-ny", vel_ny, "velocity grid rows");

  auto* converge = app.add_subcommand("converge", "grid-refinement convergence study");
  add_geometry_flags(converge, gf);
  add_bc_flags(converge, bf);
  converge->add_option("--methods", methods_csv, "comma list of fd,pwc,pwl");
  converge->add_option("--sizes", sizes_csv, "comma list of grid sizes");
  converge->add_option("--out", out_dir, "output directory");

  auto* bench = app.add_subcommand("bench", "wall-time complexity study");
  add_geometry_flags(bench, gf);
  add_bc_flags(bench, bf);
  bench->add_option("--methods", methods_csv, "comma list of fd,pwc,pwl");
  bench->add_option("--sizes", bench_sizes_csv, "comma list of sizes (pwc/pwl)");
  bench->add_option("--fd-sizes", fd_sizes_csv, "comma list of sizes for the dense fd path");
  bench->add_option("--fd-cap", fd_cap, "largest fd size taken from --sizes");
  bench->add_option("--reps", reps, "timing repetitions (>= 5)");
  bench->add_option("--warmups", warmups, "discarded warmup runs");
  bench->add_option("--out", out_dir, "output directory");

  auto* compare = app.add_subcommand("compare", "Reynolds vs Stokes comparison report");
  add_geometry_flags(compare, gf);
  add_bc_flags(compare, bf);
  add_stokes_flags(compare, sf);
  compare->add_option("--out", out_dir, "output directory");
  compare->add_flag("--field", dump_field, "also export the stokes field.csv");

  // The sinusoid studies default to U-driven flow; nothing else is implied.
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
        e.get_name() == "CallForVersion")
      return app.exit(e);
    std::cerr << "argument error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (solve->parsed())
      return run_solve(gf, bf, sf, method, n, out_dir, velocity, vel_nx, vel_ny);
    if (converge->parsed()) return run_converge(gf, bf, methods_csv, sizes_csv, out_dir);
    if (bench->parsed())
      return run_bench(gf, bf, methods_csv, bench_sizes_csv, fd_sizes_csv, reps, warmups, fd_cap,
                       out_dir);
    if (compare->parsed()) return run_compare(gf, bf, sf, out_dir, dump_field);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return classify_exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
