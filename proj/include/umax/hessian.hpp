#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "umax/angles.hpp"
#include "umax/errors.hpp"
#include "umax/kernel.hpp"
#include "umax/matrix.hpp"

namespace umax {

enum class HessianMethod { AnalyticGapSum, AnalyticPairwise, FiniteDifference };

struct HessianReport {
  SquareMatrix g;      // Hessian of h at the evaluation point
  double det_g = 0.0;
  double det_neg_g = 0.0;
  HessianMethod method = HessianMethod::FiniteDifference;

  bool negative_definite() const { return is_negative_definite(g); }
};

namespace detail {

inline HessianReport finish_report(SquareMatrix g, HessianMethod method) {
  HessianReport r;
  r.det_g = lu_determinant(g);
  r.det_neg_g = lu_determinant(g.negated());
  r.g = std::move(g);
  r.method = method;
  return r;
}

}  // namespace detail

// Central-difference Hessian of h at an interior point, symmetrized as
// (G + G^T)/2. The kernel must be finite in a step-neighborhood.
inline HessianReport hessian_fd(const Kernel& kernel, std::span<const double> point,
                                double step = 1e-4) {
  const int d = kernel.degree() - 1;
  if (static_cast<int>(point.size()) != d) throw DegreeError("hessian point size must be m - 1");
  std::vector<double> x(point.begin(), point.end());
  auto eval = [&](const std::vector<double>& p) {
    const double v = kernel.eval_angles(std::span<const double>(p));
    if (!std::isfinite(v))
      throw DomainError("kernel evaluation hit an infinity sentinel in hessian_fd");
    return v;
  };
  const double f0 = eval(x);
  SquareMatrix g(d);
  for (int i = 0; i < d; ++i) {
    x[i] = point[i] + step;
    const double fp = eval(x);
    x[i] = point[i] - step;
    const double fm = eval(x);
    x[i] = point[i];
    g(i, i) = (fp - 2.0 * f0 + fm) / (step * step);
    for (int j = i + 1; j < d; ++j) {
      x[i] = point[i] + step;
      x[j] = point[j] + step;
      const double fpp = eval(x);
      x[j] = point[j] - step;
      const double fpm = eval(x);
      x[i] = point[i] - step;
      const double fmm = eval(x);
      x[j] = point[j] + step;
      const double fmp = eval(x);
      x[i] = point[i];
      x[j] = point[j];
      const double v = (fpp - fpm - fmp + fmm) / (4.0 * step * step);
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  return detail::finish_report(std::move(g), HessianMethod::FiniteDifference);
}

// Richardson-extrapolated central differences (steps h and h/2), removing
// the O(h^2) truncation term. Used for acceptance-grade det comparisons.
inline HessianReport hessian_fd_richardson(const Kernel& kernel, std::span<const double> point,
                                           double step = 1e-4) {
  const HessianReport coarse = hessian_fd(kernel, point, step);
  const HessianReport fine = hessian_fd(kernel, point, 0.5 * step);
  const int d = coarse.g.size();
  SquareMatrix g(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = (4.0 * fine.g(i, j) - coarse.g(i, j)) / 3.0;
  return detail::finish_report(std::move(g), HessianMethod::FiniteDifference);
}

// det(-G) at the regular m-gon for a gap-sum kernel: the Hessian there is
// g''(2pi/m) times the tridiagonal matrix B_{m-1} (2 on the diagonal, -1 off),
// whose determinant is m, giving m * (-g''(2pi/m))^{m-1}.
inline double det_neg_hessian_gapsum(const Generator& g, int m) {
  const double gpp = g.second_derivative(kTwoPi / m);
  if (gpp == 0.0)
    throw DegenerateHessian("g''(2pi/m) = 0: gap-sum Hessian is degenerate");
  double det = static_cast<double>(m);
  for (int i = 0; i < m - 1; ++i) det *= -gpp;
  return det;
}

// Hessian of a pairwise-sum kernel at the regular m-gon. Toeplitz:
// entry (i, j) is -g''(2pi |i-j| / m) off the diagonal and
// sum_{s=1}^{m-1} g''(2pi s / m) on it.
inline HessianReport pairwise_hessian(const Generator& g, int m) {
  const int d = m - 1;
  std::vector<double> gpp(static_cast<std::size_t>(m));
  double diag = 0.0;
  for (int s = 1; s < m; ++s) {
    gpp[static_cast<std::size_t>(s)] = g.second_derivative(kTwoPi * s / m);
    diag += gpp[static_cast<std::size_t>(s)];
  }
  SquareMatrix mat(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      mat(i, j) = (i == j) ? diag : -gpp[static_cast<std::size_t>(std::abs(i - j))];
  HessianReport r = detail::finish_report(std::move(mat), HessianMethod::AnalyticPairwise);
  if (r.det_g == 0.0)
    throw DegenerateHessian("pairwise Hessian determinant vanishes");
  return r;
}

// Determinant of the n x n tridiagonal matrix with 2 on the diagonal and -1
// off it, via the recurrence d(n) = 2 d(n-1) - d(n-2); equals n + 1.
inline std::int64_t tridiagonal_det(int n) {
  if (n < 1) throw ConfigError("tridiagonal_det requires n >= 1");
  std::int64_t prev = 1;  // d(0), empty matrix
  std::int64_t cur = 2;   // d(1)
  for (int k = 2; k <= n; ++k) {
    const std::int64_t next = 2 * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace umax
