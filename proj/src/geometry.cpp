#include "thinfilm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace thinfilm {

namespace {

constexpr double kDomainTol = 1e-12;

void require(bool ok, const std::string& what) {
  if (!ok) fail(Errc::InvalidGeometry, what);
}

void check_knots(const std::vector<double>& knots) {
  if (knots.size() < 2) fail(Errc::InvalidProfile, "need at least one interval");
  for (std::size_t i = 0; i + 1 < knots.size(); ++i)
    if (!(knots[i] < knots[i + 1])) fail(Errc::InvalidProfile, "knots must be strictly increasing");
}

void check_positive(const std::vector<double>& h, const char* what) {
  for (double v : h)
    if (!(v > 0.0)) fail(Errc::InvalidProfile, std::string(what) + " must be positive");
}

}  // namespace

// ---------------------------------------------------------------------------
// Analytic forms

double Analytic::value(double x) const {
  switch (form) {
    case Form::Logistic: {
      // a=H_in, b=H_out, c=lambda; midpoint at (x0+x1)/2
      const double mid = 0.5 * (x0 + x1);
      return a + (b - a) / (1.0 + std::exp(c * (mid - x)));
    }
    case Form::SinusoidCavity: {
      // a=H_0, b=delta, c=k (wave count), d=l; stored on [0, 2L], centred form
      // lives on [-L, L].
      const double L = 0.5 * (x1 - x0);
      const double xc = x - x0 - L;
      const int k = static_cast<int>(c);
      if (std::fabs(xc) >= d) return (k % 2 == 0) ? a * (1.0 + b) : a * (1.0 - b);
      return a * (1.0 + b * std::cos(xc * M_PI * c / d));
    }
    case Form::SinusoidPeriodic:
      // a=H_0, b=delta, c=alpha
      return a * (1.0 + b * std::cos(c * (x - x0)));
  }
  return 0.0;
}

double Analytic::deriv(double x) const {
  switch (form) {
    case Form::Logistic: {
      const double mid = 0.5 * (x0 + x1);
      const double e = std::exp(c * (mid - x));
      if (!std::isfinite(e)) return 0.0;  // saturated tail
      const double s = 1.0 + e;
      return (b - a) * c * e / (s * s);
    }
    case Form::SinusoidCavity: {
      const double L = 0.5 * (x1 - x0);
      const double xc = x - x0 - L;
      if (std::fabs(xc) >= d) return 0.0;
      const double w = M_PI * c / d;
      return -a * b * w * std::sin(xc * w);
    }
    case Form::SinusoidPeriodic:
      return -a * b * c * std::sin(c * (x - x0));
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// HeightProfile

HeightProfile::HeightProfile(Kind kind) : kind_(std::move(kind)) {
  if (auto* pc = std::get_if<PiecewiseConstant>(&kind_)) {
    check_knots(pc->knots);
    if (pc->values.size() + 1 != pc->knots.size())
      fail(Errc::InvalidProfile, "piecewise-constant values/knots size mismatch");
    check_positive(pc->values, "heights");
  } else if (auto* pl = std::get_if<PiecewiseLinear>(&kind_)) {
    check_knots(pl->knots);
    if (pl->left.size() + 1 != pl->knots.size() || pl->right.size() != pl->left.size())
      fail(Errc::InvalidProfile, "piecewise-linear endpoint/knots size mismatch");
    check_positive(pl->left, "heights");
    check_positive(pl->right, "heights");
  } else {
    const auto& an = std::get<Analytic>(kind_);
    if (!(an.x0 < an.x1)) fail(Errc::InvalidProfile, "empty analytic domain");
  }
}

double HeightProfile::x0() const {
  if (auto* pc = std::get_if<PiecewiseConstant>(&kind_)) return pc->knots.front();
  if (auto* pl = std::get_if<PiecewiseLinear>(&kind_)) return pl->knots.front();
  return std::get<Analytic>(kind_).x0;
}

double HeightProfile::x1() const {
  if (auto* pc = std::get_if<PiecewiseConstant>(&kind_)) return pc->knots.back();
  if (auto* pl = std::get_if<PiecewiseLinear>(&kind_)) return pl->knots.back();
  return std::get<Analytic>(kind_).x1;
}

std::size_t HeightProfile::intervals() const {
  if (auto* pc = std::get_if<PiecewiseConstant>(&kind_)) return pc->values.size();
  if (auto* pl = std::get_if<PiecewiseLinear>(&kind_)) return pl->left.size();
  return 1;
}

bool HeightProfile::piecewise() const { return !std::holds_alternative<Analytic>(kind_); }

const std::vector<double>& HeightProfile::knots() const {
  if (auto* pc = std::get_if<PiecewiseConstant>(&kind_)) return pc->knots;
  if (auto* pl = std::get_if<PiecewiseLinear>(&kind_)) return pl->knots;
  fail(Errc::InvalidProfile, "analytic profile has no knots");
}

std::size_t HeightProfile::interval_at(double x, Side side) const {
  const auto& xs = knots();
  const double span = xs.back() - xs.front();
  if (x < xs.front() - kDomainTol * span || x > xs.back() + kDomainTol * span) {
    std::ostringstream os;
    os << "x=" << x << " outside [" << xs.front() << ", " << xs.back() << "]";
    fail(Errc::OutOfDomain, os.str());
  }
  x = std::clamp(x, xs.front(), xs.back());
  // upper_bound: first knot > x; interval index is one less.
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t k = (it == xs.begin()) ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
  if (k >= intervals()) k = intervals() - 1;  // x == x_N
  if (side == Side::Left && k > 0 && x == xs[k]) --k;
  return k;
}

double HeightProfile::operator()(double x, Side side) const {
  if (auto* an = std::get_if<Analytic>(&kind_)) {
    const double span = an->x1 - an->x0;
    if (x < an->x0 - kDomainTol * span || x > an->x1 + kDomainTol * span)
      fail(Errc::OutOfDomain, "x outside analytic profile domain");
    return an->value(std::clamp(x, an->x0, an->x1));
  }
  const std::size_t k = interval_at(x, side);
  if (auto* pc = std::get_if<PiecewiseConstant>(&kind_)) return pc->values[k];
  const auto& pl = std::get<PiecewiseLinear>(kind_);
  const double xa = pl.knots[k], xb = pl.knots[k + 1];
  const double t = (x - xa) / (xb - xa);
  return pl.left[k] + t * (pl.right[k] - pl.left[k]);
}

double HeightProfile::slope(double x, Side side) const {
  if (auto* an = std::get_if<Analytic>(&kind_)) return an->deriv(std::clamp(x, an->x0, an->x1));
  const std::size_t k = interval_at(x, side);
  if (std::holds_alternative<PiecewiseConstant>(kind_)) return 0.0;
  const auto& pl = std::get<PiecewiseLinear>(kind_);
  return (pl.right[k] - pl.left[k]) / (pl.knots[k + 1] - pl.knots[k]);
}

double eval_height(const HeightProfile& p, double x, Side side) { return p(x, side); }

// ---------------------------------------------------------------------------
// build_profile

HeightProfile build_profile(const GeometrySpec& spec) {
  return std::visit(
      [](const auto& g) -> HeightProfile {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, Bfs>) {
          require(g.H_out > 0, "H_out must be > 0");
          require(g.H_in > g.H_out, "H_in must exceed H_out");
          require(g.l > 0 && g.l < g.L, "step position l must satisfy 0 < l < L");
          return HeightProfile(PiecewiseConstant{{0.0, g.l, g.L}, {g.H_in, g.H_out}});
        } else if constexpr (std::is_same_v<T, WedgeGeom>) {
          require(g.H_out > 0, "H_out must be > 0");
          require(g.H_in > g.H_out, "H_in must exceed H_out");
          require(g.l_wedge > 0, "l_wedge must be > 0");
          require(g.l_in > 0 && g.l_out > 0, "inlet/outlet runs must be > 0");
          const double a = g.l_in, b = g.l_in + g.l_wedge, L = b + g.l_out;
          return HeightProfile(PiecewiseLinear{{0.0, a, b, L},
                                               {g.H_in, g.H_in, g.H_out},
                                               {g.H_in, g.H_out, g.H_out}});
        } else if constexpr (std::is_same_v<T, LogisticGeom>) {
          require(g.H_out > 0, "H_out must be > 0");
          require(g.H_in >= g.H_out, "H_in must be >= H_out");
          require(g.lambda > 0, "lambda must be > 0");
          require(g.L > 0, "L must be > 0");
          Analytic an{Analytic::Form::Logistic, g.H_in, g.H_out, g.lambda, 0.0, 0.0, g.L};
          return HeightProfile(an);
        } else if constexpr (std::is_same_v<T, SinusoidCavity>) {
          require(g.H_0 > 0, "H_0 must be > 0");
          require(g.delta >= 0 && g.delta < 1, "delta must lie in [0, 1)");
          require(g.k >= 1, "k must be a positive integer");
          require(g.l > 0 && g.l < g.L, "texture run l must satisfy 0 < l < L");
          Analytic an{Analytic::Form::SinusoidCavity, g.H_0,       g.delta,
                      static_cast<double>(g.k),        g.l,        0.0,
                      2.0 * g.L};
          return HeightProfile(an);
        } else if constexpr (std::is_same_v<T, SinusoidPeriodic>) {
          require(g.H_0 > 0, "H_0 must be > 0");
          require(g.delta >= 0 && g.delta < 1, "delta must lie in [0, 1)");
          require(g.alpha != 0, "alpha must be nonzero");
          require(g.L > 0, "L must be > 0");
          Analytic an{Analytic::Form::SinusoidPeriodic, g.H_0, g.delta, g.alpha, 0.0, 0.0, g.L};
          return HeightProfile(an);
        } else if constexpr (std::is_same_v<T, CustomPwc>) {
          return HeightProfile(PiecewiseConstant{g.knots, g.values});
        } else {
          static_assert(std::is_same_v<T, CustomPwl>);
          if (g.heights.size() != g.knots.size())
            fail(Errc::InvalidGeometry, "custom-pwl heights/knots size mismatch");
          std::vector<double> left(g.heights.begin(), g.heights.end() - 1);
          std::vector<double> right(g.heights.begin() + 1, g.heights.end());
          return HeightProfile(PiecewiseLinear{g.knots, std::move(left), std::move(right)});
        }
      },
      spec);
}

// ---------------------------------------------------------------------------
// Samplers

namespace {

std::vector<double> uniform_knots(double x0, double x1, std::size_t n) {
  std::vector<double> xs(n + 1);
  const double dx = (x1 - x0) / static_cast<double>(n);
  for (std::size_t i = 0; i <= n; ++i) xs[i] = x0 + dx * static_cast<double>(i);
  xs[n] = x1;
  return xs;
}

// Positivity of an analytic profile is only checkable by sampling; use a
// denser grid than the solver will see (10 points per interval plus knots).
void check_analytic_positive(const HeightProfile& p, std::size_t n) {
  if (p.piecewise()) return;
  const std::size_t m = 10 * n;
  const double x0 = p.x0(), x1 = p.x1();
  for (std::size_t i = 0; i <= m; ++i) {
    const double x = x0 + (x1 - x0) * static_cast<double>(i) / static_cast<double>(m);
    if (!(p(x) > 0.0)) fail(Errc::InvalidProfile, "profile is not positive on the domain");
  }
}

}  // namespace

HeightProfile sample_pwc(const HeightProfile& p, std::size_t n) {
  if (n < 1) fail(Errc::InvalidProfile, "need n >= 1");
  check_analytic_positive(p, n);
  auto xs = uniform_knots(p.x0(), p.x1(), n);
  std::vector<double> vals(n);
  for (std::size_t i = 0; i < n; ++i) {
    // One-sided limits from inside the interval, so a jump at a shared knot
    // contributes its interval-side value.
    vals[i] = 0.5 * (p(xs[i], Side::Right) + p(xs[i + 1], Side::Left));
    if (!(vals[i] > 0.0)) fail(Errc::InvalidProfile, "sampled height not positive");
  }
  return HeightProfile(PiecewiseConstant{std::move(xs), std::move(vals)});
}

HeightProfile sample_pwl(const HeightProfile& p, std::size_t n) {
  if (n < 1) fail(Errc::InvalidProfile, "need n >= 1");
  check_analytic_positive(p, n);
  auto xs = uniform_knots(p.x0(), p.x1(), n);
  std::vector<double> left(n), right(n);
  for (std::size_t i = 0; i < n; ++i) {
    left[i] = p(xs[i], Side::Right);
    right[i] = p(xs[i + 1], Side::Left);
    if (!(left[i] > 0.0) || !(right[i] > 0.0))
      fail(Errc::InvalidProfile, "sampled height not positive");
  }
  return HeightProfile(PiecewiseLinear{std::move(xs), std::move(left), std::move(right)});
}

HeightProfile as_piecewise_linear(const HeightProfile& p) {
  if (auto* pc = std::get_if<PiecewiseConstant>(&p.kind()))
    return HeightProfile(PiecewiseLinear{pc->knots, pc->values, pc->values});
  if (std::holds_alternative<PiecewiseLinear>(p.kind())) return p;
  fail(Errc::InvalidProfile, "analytic profile must be sampled first");
}

// ---------------------------------------------------------------------------
// JSON

std::string geometry_name(const GeometrySpec& spec) {
  struct V {
    std::string operator()(const Bfs&) const { return "bfs"; }
    std::string operator()(const WedgeGeom&) const { return "wedge"; }
    std::string operator()(const LogisticGeom&) const { return "logistic"; }
    std::string operator()(const SinusoidCavity&) const { return "sinusoid-cavity"; }
    std::string operator()(const SinusoidPeriodic&) const { return "sinusoid-periodic"; }
    std::string operator()(const CustomPwc&) const { return "custom-pwc"; }
    std::string operator()(const CustomPwl&) const { return "custom-pwl"; }
  };
  return std::visit(V{}, spec);
}

nlohmann::json geometry_to_json(const GeometrySpec& spec) {
  nlohmann::json params;
  std::visit(
      [&params](const auto& g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, Bfs>) {
          params = {{"H_in", g.H_in}, {"H_out", g.H_out}, {"l", g.l}, {"L", g.L}};
        } else if constexpr (std::is_same_v<T, WedgeGeom>) {
          params = {{"H_in", g.H_in},
                    {"H_out", g.H_out},
                    {"l_in", g.l_in},
                    {"l_out", g.l_out},
                    {"l_wedge", g.l_wedge}};
        } else if constexpr (std::is_same_v<T, LogisticGeom>) {
          params = {{"H_in", g.H_in}, {"H_out", g.H_out}, {"lambda", g.lambda}, {"L", g.L}};
        } else if constexpr (std::is_same_v<T, SinusoidCavity>) {
          params = {{"H_0", g.H_0}, {"delta", g.delta}, {"k", g.k}, {"l", g.l}, {"L", g.L}};
        } else if constexpr (std::is_same_v<T, SinusoidPeriodic>) {
          params = {{"H_0", g.H_0}, {"delta", g.delta}, {"alpha", g.alpha}, {"L", g.L}};
        } else if constexpr (std::is_same_v<T, CustomPwc>) {
          params = {{"knots", g.knots}, {"values", g.values}};
        } else {
          params = {{"knots", g.knots}, {"heights", g.heights}};
        }
      },
      spec);
  return {{"geometry", geometry_name(spec)}, {"params", params}};
}

GeometrySpec geometry_from_json(const nlohmann::json& j) {
  try {
    const std::string name = j.at("geometry").get<std::string>();
    const nlohmann::json& p = j.at("params");
    if (name == "bfs")
      return Bfs{p.at("H_in"), p.at("H_out"), p.at("l"), p.at("L")};
    if (name == "wedge")
      return WedgeGeom{p.at("H_in"), p.at("H_out"), p.at("l_in"), p.at("l_out"), p.at("l_wedge")};
    if (name == "logistic")
      return LogisticGeom{p.at("H_in"), p.at("H_out"), p.at("lambda"), p.at("L")};
    if (name == "sinusoid-cavity")
      return SinusoidCavity{p.at("H_0"), p.at("delta"), p.at("k"), p.at("l"), p.at("L")};
    if (name == "sinusoid-periodic")
      return SinusoidPeriodic{p.at("H_0"), p.at("delta"), p.at("alpha"), p.at("L")};
    if (name == "custom-pwc")
      return CustomPwc{p.at("knots").get<std::vector<double>>(),
                       p.at("values").get<std::vector<double>>()};
    if (name == "custom-pwl")
      return CustomPwl{p.at("knots").get<std::vector<double>>(),
                       p.at("heights").get<std::vector<double>>()};
    fail(Errc::InvalidGeometry, "unknown geometry name: " + name);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::InvalidGeometry, std::string("bad geometry JSON: ") + e.what());
  }
}

}  // namespace thinfilm
