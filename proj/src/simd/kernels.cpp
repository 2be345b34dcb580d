#include "thinfilm/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

namespace thinfilm::simd {

#ifdef THINFILM_HAVE_AVX2_TU
namespace avx2 {
void axpy(double a, const double* x, double* y, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double abs_sum(const double* x, std::size_t n);
double sqr_sum(const double* x, std::size_t n);
double abs_max(const double* x, std::size_t n);
}  // namespace avx2
#endif

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
  }
  return "?";
}

bool backend_supported(Backend b) {
  if (b == Backend::Scalar) return true;
#ifdef THINFILM_HAVE_AVX2_TU
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

Backend detect_backend() {
  if (const char* env = std::getenv("THINFILM_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::Scalar;
    if (std::strcmp(env, "avx2") == 0 && backend_supported(Backend::Avx2)) return Backend::Avx2;
  }
  return backend_supported(Backend::Avx2) ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend> g_backend{detect_backend()};

}  // namespace

Backend active_backend() { return g_backend.load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (!backend_supported(b))
    throw std::invalid_argument(std::string("simd backend not supported here: ") + backend_name(b));
  g_backend.store(b, std::memory_order_relaxed);
}

void axpy(double a, const double* x, double* y, std::size_t n) {
#ifdef THINFILM_HAVE_AVX2_TU
  if (active_backend() == Backend::Avx2) return avx2::axpy(a, x, y, n);
#endif
  scalar::axpy(a, x, y, n);
}

double dot(const double* x, const double* y, std::size_t n) {
#ifdef THINFILM_HAVE_AVX2_TU
  if (active_backend() == Backend::Avx2) return avx2::dot(x, y, n);
#endif
  return scalar::dot(x, y, n);
}

double abs_sum(const double* x, std::size_t n) {
#ifdef THINFILM_HAVE_AVX2_TU
  if (active_backend() == Backend::Avx2) return avx2::abs_sum(x, n);
#endif
  return scalar::abs_sum(x, n);
}

double sqr_sum(const double* x, std::size_t n) {
#ifdef THINFILM_HAVE_AVX2_TU
  if (active_backend() == Backend::Avx2) return avx2::sqr_sum(x, n);
#endif
  return scalar::sqr_sum(x, n);
}

double abs_max(const double* x, std::size_t n) {
#ifdef THINFILM_HAVE_AVX2_TU
  if (active_backend() == Backend::Avx2) return avx2::abs_max(x, n);
#endif
  return scalar::abs_max(x, n);
}

}  // namespace thinfilm::simd
