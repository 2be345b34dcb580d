#pragma once

// Element-wise inverse of a symmetric tridiagonal matrix through two backward
// recursions: an O(n) setup gives O(1) access to any K^{-1}_{ij}, and the
// matrix-vector product evaluates every element independently in O(n^2).

#include <cstddef>
#include <span>
#include <vector>

#include "thinfilm/errors.hpp"

namespace thinfilm {

class TridiagInverse {
 public:
  // diag has size n, off has size n-1. Throws SingularMatrix on a vanishing
  // recursion denominator (|.| <= 1e-14 * max |diag|).
  TridiagInverse(std::span<const double> diag, std::span<const double> off);

  std::size_t size() const { return d_.size(); }

  double element(std::size_t i, std::size_t j) const;

  // y = K^{-1} v. Each element is realised as d_i * T_{j-1}/T_{i-1}; the
  // per-row partial sums are recomputed from scratch, so the cost is O(n^2).
  void apply(std::span<const double> v, std::span<double> y) const;

  const std::vector<double>& recursion() const { return S_; }          // S_k
  const std::vector<double>& inverse_diagonal() const { return d_; }   // K^{-1}_{ii}
  const std::vector<double>& partial_products() const { return T_; }  // T_k = prod S_0..S_k
  bool ratio_path() const { return ratio_safe_; }

 private:
  double element_slow(std::size_t i, std::size_t j) const;

  std::vector<double> S_;  // size n-1
  std::vector<double> d_;  // size n
  std::vector<double> T_;  // size n-1
  std::vector<double> P_;  // P_[i] = T_{i-1}, P_[0] = 1; size n
  std::vector<double> w_;  // w_[j] = d_j / P_j (ratio path only)
  bool ratio_safe_ = false;
};

}  // namespace thinfilm
