#pragma once

// Verification and measurement harness: exact reference pressures, discrete
// error norms, grid-convergence order fits, wall-time complexity fits, and
// the Reynolds-vs-Stokes comparison report.

#include <cstddef>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "thinfilm/geometry.hpp"
#include "thinfilm/reynolds.hpp"
#include "thinfilm/stokes.hpp"

namespace thinfilm {

enum class Method { FD, PWC, PWL };
const char* method_name(Method m);
Method method_from_name(const std::string& name);

// Exact pressure for h = H_0 (1 + delta cos(alpha x)) under dP = 0 over a
// whole period, with outlet pressure 0.
double sinusoid_exact_pressure(double H_0, double delta, double alpha, double U, double eta,
                               double x);
// Flux accompanying dP = 0 for that profile (independent of eta).
double sinusoid_companion_flux(double H_0, double delta, double U);

// Exact two-region pressure for the step geometry.
double bfs_exact_pressure(const Bfs& g, const BoundaryConditions& bc, double x);

struct ErrorNorms {
  double l1 = 0, l2 = 0, linf = 0;
};
// Discrete norms with dx weighting: l1 = dx sum|e|, l2 = sqrt(dx sum e^2).
ErrorNorms error_norms(const std::vector<double>& err, double dx);
ErrorNorms error_norms(const PressureSolution& numeric, const std::function<double(double)>& exact,
                       const std::vector<double>& grid);

struct FitResult {
  double slope = 0, intercept = 0, rms_residual = 0;
};
// Least-squares line through (log x, log y).
FitResult loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

// ---------------------------------------------------------------------------

struct ConvergenceCase {
  std::size_t n = 0;
  double dx = 0;
  ErrorNorms norms;
  double dP_err = 0;
};

struct ConvergenceReport {
  Method method{};
  std::string geometry;
  std::vector<ConvergenceCase> cases;
  FitResult order_l1, order_l2, order_linf, order_dP;  // slopes of err vs dx
};

struct Reference {
  enum class Kind { Auto, SinusoidExact, BfsExact, PiecewiseExact, FineGridPwl };
  Kind kind = Kind::Auto;
  std::size_t fine_n = 1 << 14;
};

// Solves the geometry at each size and fits the error orders against the
// reference. Auto picks: sinusoid-periodic -> closed form, bfs -> closed
// form, exact piecewise geometries -> PWL exact solve, otherwise a fine-grid
// PWL solution.
ConvergenceReport convergence_study(Method method, const GeometrySpec& spec,
                                    const BoundaryConditions& bc,
                                    const std::vector<std::size_t>& sizes,
                                    Reference ref = Reference{});

nlohmann::json convergence_report_to_json(const ConvergenceReport& r);
void write_convergence_csv(const std::vector<ConvergenceReport>& reports, std::ostream& os);

// ---------------------------------------------------------------------------

struct TimingCase {
  std::size_t n = 0;
  double median_s = 0;
  std::vector<double> samples_s;
};

struct TimingReport {
  Method method{};
  std::string geometry;
  std::size_t reps = 0, warmups = 0;
  std::vector<TimingCase> cases;
  FitResult slope;  // log time vs log n
};

// Times assembly+solve only (profile sampling and I/O excluded); median of
// `reps` samples after `warmups` discarded runs. The FD method runs its dense
// O(N^3) path here, matching what the complexity claim is about.
TimingReport timing_study(Method method, const GeometrySpec& spec, const BoundaryConditions& bc,
                          const std::vector<std::size_t>& sizes, std::size_t reps = 5,
                          std::size_t warmups = 2);

nlohmann::json timing_report_to_json(const TimingReport& r);
void write_timing_csv(const std::vector<TimingReport>& reports, std::ostream& os);

// ---------------------------------------------------------------------------

struct ComparisonReport {
  double dP_reynolds = 0;
  double dP_stokes = 0;
  double ratio = 0;  // dP_stokes / dP_reynolds
  double min_psi = 0;
  double max_psi_excess = 0;  // max psi - Q
  // Recirculation shows as the stream function escaping [0, Q]: negative
  // excursions for eddies on the lower wall, excursions above Q for eddies on
  // the surface side (the step geometries here produce the latter).
  bool recirculation_negative = false;  // min psi < -1e-6 |Q|
  bool recirculation_positive = false;  // max psi >  Q + 1e-6 |Q|
  bool recirculation = false;
  double cross_film_max = 0;  // max over x of (max_y p - min_y p)
  double stokes_residual = 0;
  std::size_t stokes_iterations = 0;
  bool stokes_converged = false;
};

ComparisonReport compare_reynolds_stokes(const GeometrySpec& spec, const BoundaryConditions& bc,
                                         const StokesConfig& cfg);
ComparisonReport compare_reynolds_stokes(const StokesField& stokes_field);

nlohmann::json comparison_report_to_json(const ComparisonReport& r);

}  // namespace thinfilm
