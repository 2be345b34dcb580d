#pragma once

// Test-only oracles, deliberately independent of the library's solvers:
// a long-double Gauss-Jordan inverse, adaptive Simpson quadrature, and a
// Richardson finite-difference derivative.

#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

// Dense inverse by Gauss-Jordan with partial pivoting in long double.
inline std::vector<long double> dense_inverse(std::vector<long double> a, std::size_t n) {
  std::vector<long double> inv(n * n, 0.0L);
  for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = 1.0L;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::fabs((double)a[i * n + k]) > std::fabs((double)a[p * n + k])) p = i;
    if (p != k)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a[k * n + j], a[p * n + j]);
        std::swap(inv[k * n + j], inv[p * n + j]);
      }
    const long double piv = a[k * n + k];
    for (std::size_t j = 0; j < n; ++j) {
      a[k * n + j] /= piv;
      inv[k * n + j] /= piv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      const long double f = a[i * n + k];
      if (f == 0.0L) continue;
      for (std::size_t j = 0; j < n; ++j) {
        a[i * n + j] -= f * a[k * n + j];
        inv[i * n + j] -= f * inv[k * n + j];
      }
    }
  }
  return inv;
}

// Dense inverse of a symmetric tridiagonal matrix given diagonal/off-diagonal.
inline std::vector<long double> tridiag_dense_inverse(const std::vector<double>& diag,
                                                      const std::vector<double>& off) {
  const std::size_t n = diag.size();
  std::vector<long double> a(n * n, 0.0L);
  for (std::size_t i = 0; i < n; ++i) {
    a[i * n + i] = diag[i];
    if (i + 1 < n) {
      a[i * n + i + 1] = off[i];
      a[(i + 1) * n + i] = off[i];
    }
  }
  return dense_inverse(std::move(a), n);
}

inline double simpson(const std::function<double(double)>& f, double a, double b) {
  const double m = 0.5 * (a + b);
  return (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b));
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int depth = 24) {
  const double m = 0.5 * (a + b);
  const double whole = simpson(f, a, b);
  const double left = simpson(f, a, m), right = simpson(f, m, b);
  if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, 0.5 * tol, depth - 1);
}

// Fourth-order central difference.
inline double derivative(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

inline double second_derivative(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) /
         (12 * h * h);
}

}  // namespace oracle
