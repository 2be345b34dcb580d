#pragma once

// Direct solvers backing the finite-difference baseline: a dense LU with
// partial pivoting (the O(N^3) path the timing study measures) and a general
// banded LU with partial pivoting for the O(N) accuracy path.

#include <cstddef>
#include <span>
#include <vector>

#include "thinfilm/errors.hpp"

namespace thinfilm {

// Row-major dense LU with partial pivoting; factorisation is in place.
class DenseLU {
 public:
  DenseLU(std::vector<double> a, std::size_t n);  // throws SingularMatrix

  // Solve A x = b in place.
  void solve(std::span<double> b) const;
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  std::vector<double> a_;
  std::vector<std::size_t> piv_;
};

std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b);

// Banded LU with partial pivoting, kl sub- and ku superdiagonals. Storage is
// LAPACK-style band layout with kl extra rows of pivoting fill.
class BandLU {
 public:
  BandLU(std::size_t n, std::size_t kl, std::size_t ku);

  double& at(std::size_t i, std::size_t j);  // assembly access, |i-j| within band
  void factor();                             // throws SingularMatrix
  void solve(std::span<double> b) const;

 private:
  std::size_t n_, kl_, ku_, ldab_;
  std::vector<double> ab_;
  std::vector<std::size_t> piv_;
  bool factored_ = false;
};

}  // namespace thinfilm
