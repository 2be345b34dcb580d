#include "thinfilm/tridiag.hpp"

#include <cmath>

#include "thinfilm/simd/kernels.hpp"

namespace thinfilm {

namespace {
// Partial products below this magnitude are not trusted as ratio
// denominators; affected rows fall back to running products.
constexpr double kRatioFloor = 1e-280;
}  // namespace

TridiagInverse::TridiagInverse(std::span<const double> diag, std::span<const double> off) {
  const std::size_t n = diag.size();
  if (n == 0) fail(Errc::SingularMatrix, "empty matrix");
  if (off.size() + 1 != n) fail(Errc::SingularMatrix, "off-diagonal size must be n-1");

  double amax = 0;
  for (double a : diag) amax = std::max(amax, std::fabs(a));
  const double pivot_tol = 1e-14 * amax;
  auto check_pivot = [&](double den) {
    if (!(std::fabs(den) > pivot_tol)) fail(Errc::SingularMatrix, "vanishing recursion pivot");
    return den;
  };

  d_.assign(n, 0.0);
  if (n == 1) {
    d_[0] = 1.0 / check_pivot(diag[0]);
    P_.assign(1, 1.0);
    w_.assign(1, d_[0]);
    ratio_safe_ = true;
    return;
  }

  // S_{n-2} = -beta_{n-2}/alpha_{n-1};  S_k = -beta_k / (alpha_{k+1} + S_{k+1} beta_{k+1})
  S_.assign(n - 1, 0.0);
  S_[n - 2] = -off[n - 2] / check_pivot(diag[n - 1]);
  for (std::size_t k = n - 2; k-- > 0;)
    S_[k] = -off[k] / check_pivot(diag[k + 1] + S_[k + 1] * off[k + 1]);

  d_[0] = 1.0 / check_pivot(diag[0] + off[0] * S_[0]);
  for (std::size_t i = 0; i + 2 < n; ++i)
    d_[i + 1] = (1.0 - off[i] * d_[i] * S_[i]) / check_pivot(diag[i + 1] + off[i + 1] * S_[i + 1]);
  d_[n - 1] = (1.0 - off[n - 2] * d_[n - 2] * S_[n - 2]) / check_pivot(diag[n - 1]);

  T_.assign(n - 1, 0.0);
  P_.assign(n, 1.0);
  for (std::size_t k = 0; k < n - 1; ++k) {
    T_[k] = (k == 0 ? S_[0] : T_[k - 1] * S_[k]);
    P_[k + 1] = T_[k];
  }

  ratio_safe_ = true;
  for (double p : P_)
    if (!(std::fabs(p) >= kRatioFloor) || !std::isfinite(p)) ratio_safe_ = false;
  if (ratio_safe_) {
    w_.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      w_[j] = d_[j] / P_[j];
      if (!std::isfinite(w_[j])) ratio_safe_ = false;
    }
    if (!ratio_safe_) w_.clear();
  }
}

double TridiagInverse::element(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  if (i == j) return d_[i];
  if (ratio_safe_) return d_[i] * (P_[j] / P_[i]);
  return element_slow(i, j);
}

double TridiagInverse::element_slow(std::size_t i, std::size_t j) const {
  // K^{-1}_{ij} = d_i * prod_{k=i}^{j-1} S_k, accumulated in index order so the
  // product under/overflows exactly when the element does.
  double r = d_[i];
  for (std::size_t k = i; k < j; ++k) r *= S_[k];
  return r;
}

void TridiagInverse::apply(std::span<const double> v, std::span<double> y) const {
  const std::size_t n = d_.size();
  if (v.size() != n || y.size() != n) fail(Errc::GridMismatch, "apply size mismatch");
  if (ratio_safe_) {
    const double* vp = v.data();
    for (std::size_t i = 0; i < n; ++i) {
      // row i:  P_i * sum_{j<i} w_j v_j  +  d_i v_i  +  (d_i/P_i) * sum_{j>i} P_j v_j
      double acc = P_[i] * simd::dot(w_.data(), vp, i);
      acc += d_[i] * vp[i];
      acc += w_[i] * simd::dot(P_.data() + i + 1, vp + i + 1, n - i - 1);
      y[i] = acc;
    }
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    double acc = d_[i] * v[i];
    double r = 1.0;
    for (std::size_t j = i; j-- > 0;) {  // j < i: d_j * prod_{k=j}^{i-1} S_k
      r *= S_[j];
      acc += d_[j] * r * v[j];
    }
    r = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {  // j > i: d_i * prod_{k=i}^{j-1} S_k
      r *= S_[j - 1];
      acc += d_[i] * r * v[j];
    }
    y[i] = acc;
  }
}

}  // namespace thinfilm
