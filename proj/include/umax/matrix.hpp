#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "umax/errors.hpp"

namespace umax {

// Dense square matrix, row-major. Sizes here are m-1 for degree-m kernels,
// so everything is tiny; LU with partial pivoting is all we need.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0.0) {}

  int size() const { return n_; }
  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

  SquareMatrix negated() const {
    SquareMatrix r(n_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = -a_[k];
    return r;
  }

  double max_asymmetry() const {
    double worst = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j)
        worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
    return worst;
  }

  SquareMatrix leading_block(int k) const {
    SquareMatrix r(k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) r(i, j) = (*this)(i, j);
    return r;
  }

 private:
  int n_ = 0;
  std::vector<double> a_;
};

// Determinant via LU decomposition with partial pivoting.
inline double lu_determinant(SquareMatrix a) {
  const int n = a.size();
  double det = 1.0;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (a(pivot, col) == 0.0) return 0.0;
    if (pivot != col) {
      for (int j = 0; j < n; ++j) std::swap(a(pivot, j), a(col, j));
      det = -det;
    }
    det *= a(col, col);
    for (int r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      for (int j = col; j < n; ++j) a(r, j) -= f * a(col, j);
    }
  }
  return det;
}

inline std::vector<double> leading_principal_minors(const SquareMatrix& a) {
  std::vector<double> minors(static_cast<std::size_t>(a.size()));
  for (int k = 1; k <= a.size(); ++k)
    minors[static_cast<std::size_t>(k - 1)] = lu_determinant(a.leading_block(k));
  return minors;
}

// Sign-alternation test on the leading principal minors: (-1)^k minor_k > 0
// for all k iff the matrix is negative definite.
inline bool is_negative_definite(const SquareMatrix& a) {
  const auto minors = leading_principal_minors(a);
  for (std::size_t k = 0; k < minors.size(); ++k) {
    const double signed_minor = (k % 2 == 0) ? -minors[k] : minors[k];
    if (!(signed_minor > 0.0)) return false;
  }
  return true;
}

}  // namespace umax
