#pragma once

// Data-parallel inner-loop kernels: scalar reference implementations plus an
// AVX2/FMA variant selected at runtime. Every hot loop in the solvers goes
// through this dispatch so the two paths can be equivalence-tested.

#include <cstddef>

namespace thinfilm::simd {

enum class Backend { Scalar, Avx2 };

const char* backend_name(Backend b);
bool backend_supported(Backend b);

// The backend used by the dispatched kernels below. Defaults to the widest
// supported one; THINFILM_SIMD=scalar|avx2 in the environment overrides.
Backend active_backend();
void set_backend(Backend b);  // throws std::invalid_argument if unsupported

// y[i] += a * x[i]
void axpy(double a, const double* x, double* y, std::size_t n);
// sum_i x[i] * y[i]
double dot(const double* x, const double* y, std::size_t n);
// sum_i |x[i]|
double abs_sum(const double* x, std::size_t n);
// sum_i x[i]^2
double sqr_sum(const double* x, std::size_t n);
// max_i |x[i]|
double abs_max(const double* x, std::size_t n);

namespace scalar {
void axpy(double a, const double* x, double* y, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double abs_sum(const double* x, std::size_t n);
double sqr_sum(const double* x, std::size_t n);
double abs_max(const double* x, std::size_t n);
}  // namespace scalar

}  // namespace thinfilm::simd
