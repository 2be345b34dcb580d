#include "thinfilm/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "thinfilm/simd/kernels.hpp"

namespace thinfilm {

// ---------------------------------------------------------------------------
// DenseLU

DenseLU::DenseLU(std::vector<double> a, std::size_t n) : n_(n), a_(std::move(a)), piv_(n) {
  if (a_.size() != n * n) fail(Errc::GridMismatch, "dense matrix size mismatch");
  for (std::size_t k = 0; k < n_; ++k) {
    // Partial pivot: largest magnitude in column k at or below the diagonal.
    std::size_t p = k;
    double best = std::fabs(a_[k * n_ + k]);
    for (std::size_t i = k + 1; i < n_; ++i) {
      const double v = std::fabs(a_[i * n_ + k]);
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (!(best > 1e-300)) fail(Errc::SingularMatrix, "zero pivot in dense LU");
    piv_[k] = p;
    if (p != k)
      for (std::size_t j = 0; j < n_; ++j) std::swap(a_[k * n_ + j], a_[p * n_ + j]);
    const double inv = 1.0 / a_[k * n_ + k];
    for (std::size_t i = k + 1; i < n_; ++i) {
      const double l = a_[i * n_ + k] * inv;
      a_[i * n_ + k] = l;
      simd::axpy(-l, &a_[k * n_ + k + 1], &a_[i * n_ + k + 1], n_ - k - 1);
    }
  }
}

void DenseLU::solve(std::span<double> b) const {
  if (b.size() != n_) fail(Errc::GridMismatch, "rhs size mismatch");
  for (std::size_t k = 0; k < n_; ++k)
    if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
  for (std::size_t i = 1; i < n_; ++i) b[i] -= simd::dot(&a_[i * n_], b.data(), i);
  for (std::size_t i = n_; i-- > 0;) {
    b[i] -= simd::dot(&a_[i * n_ + i + 1], b.data() + i + 1, n_ - i - 1);
    b[i] /= a_[i * n_ + i];
  }
}

std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b) {
  DenseLU lu(std::move(a), b.size());
  lu.solve(b);
  return b;
}

// ---------------------------------------------------------------------------
// BandLU

BandLU::BandLU(std::size_t n, std::size_t kl, std::size_t ku)
    : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1), ab_(ldab_ * n, 0.0), piv_(n) {}

double& BandLU::at(std::size_t i, std::size_t j) {
  // Column-major band storage: entry (i, j) lives at row kl+ku+i-j of column j.
  if (j > i + ku_ || i > j + kl_) fail(Errc::GridMismatch, "entry outside band");
  return ab_[j * ldab_ + (kl_ + ku_ + i - j)];
}

void BandLU::factor() {
  const std::size_t kv = kl_ + ku_;  // fill band width above diagonal
  for (std::size_t k = 0; k < n_; ++k) {
    const std::size_t lm = std::min(kl_, n_ - 1 - k);  // active subdiagonal rows
    std::size_t p = 0;
    double best = std::fabs(ab_[k * ldab_ + kv]);
    for (std::size_t i = 1; i <= lm; ++i) {
      const double v = std::fabs(ab_[k * ldab_ + kv + i]);
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (!(best > 1e-300)) fail(Errc::SingularMatrix, "zero pivot in banded LU");
    piv_[k] = k + p;
    const std::size_t ncols = std::min(kv, n_ - 1 - k);  // columns touched to the right
    if (p != 0)
      for (std::size_t j = 0; j <= ncols; ++j)
        std::swap(ab_[(k + j) * ldab_ + kv - j], ab_[(k + j) * ldab_ + kv - j + p]);
    const double inv = 1.0 / ab_[k * ldab_ + kv];
    for (std::size_t i = 1; i <= lm; ++i) {
      const double l = ab_[k * ldab_ + kv + i] * inv;
      ab_[k * ldab_ + kv + i] = l;
      for (std::size_t j = 1; j <= ncols; ++j)
        ab_[(k + j) * ldab_ + kv - j + i] -= l * ab_[(k + j) * ldab_ + kv - j];
    }
  }
  factored_ = true;
}

void BandLU::solve(std::span<double> b) const {
  if (!factored_) fail(Errc::SingularMatrix, "factor() not called");
  if (b.size() != n_) fail(Errc::GridMismatch, "rhs size mismatch");
  const std::size_t kv = kl_ + ku_;
  for (std::size_t k = 0; k < n_; ++k) {
    if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
    const std::size_t lm = std::min(kl_, n_ - 1 - k);
    for (std::size_t i = 1; i <= lm; ++i) b[k + i] -= ab_[k * ldab_ + kv + i] * b[k];
  }
  for (std::size_t k = n_; k-- > 0;) {
    const std::size_t um = std::min(kv, k);
    b[k] /= ab_[k * ldab_ + kv];
    for (std::size_t i = 1; i <= um; ++i) b[k - i] -= ab_[k * ldab_ + kv - i] * b[k];
  }
}

}  // namespace thinfilm
