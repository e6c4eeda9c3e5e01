#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "umax/angles.hpp"
#include "umax/density.hpp"
#include "umax/errors.hpp"
#include "umax/extremum.hpp"

namespace umax {

// Weibull-type limit law of the rescaled extreme statistic
//   T_n = n^{2m/(m-1)} (M - H_n)      (u-max)
//   T_n = n^{2m/(m-1)} (H_n - mu)     (u-min)
// with F(t) = 1 - exp(-c t^{(m-1)/2}) for t >= 0.
//
// Internally everything is stored as the ordered-maximizer coefficient c;
// the total-maximizer constant K_total = (m-1)! K_ordered with c = K_total/m!
// is a presentation-layer conversion.
struct LimitLaw {
  int m = 0;
  Mode mode = Mode::UMax;
  double coefficient = 0.0;  // c

  double scaling_exponent() const { return 2.0 * m / (m - 1.0); }
  double shape_exponent() const { return 0.5 * (m - 1); }

  double cdf(double t) const {
    if (t < 0.0) throw DomainError("limit CDF argument must be nonnegative");
    return -std::expm1(-coefficient * std::pow(t, shape_exponent()));
  }
};

inline LimitLaw make_limit_law(int m, Mode mode, double coefficient) {
  if (m < 2) throw ConfigError("limit law requires m >= 2 (scaling exponent undefined at m = 1)");
  if (!(coefficient > 0.0) || !std::isfinite(coefficient))
    throw ConsistencyError("limit law coefficient must be positive and finite");
  return LimitLaw{m, mode, coefficient};
}

inline double limit_cdf(const LimitLaw& law, double t) { return law.cdf(t); }

// Limit constants in both conventions, plus the per-maximizer density
// product integrals that enter them.
struct LimitConstant {
  double k_ordered = 0.0;  // sum over ordered maximizers; c = K_ordered / m
  double k_total = 0.0;    // sum over all maximizer orbit members; c = K_total / m!
  double coefficient = 0.0;
  std::vector<double> product_integrals;
  std::vector<bool> b3_ok;
};

// General limit constant over the ordered maximizers:
//   K = (2pi)^{(m-1)/2} / Gamma((m+1)/2) * sum_i J_i / sqrt(det(-G_i)),
// where J_i is the density product integral at maximizer W_i. At least one
// J_i must be positive (condition B3); every det(-G_i) must be positive.
inline LimitConstant limit_constant_general(const MaxAnalysis& analysis, const Density& p,
                                            int quad_nodes = 8192) {
  const int m = analysis.m;
  if (analysis.ordered_maximizers.empty()) throw ConsistencyError("analysis has no maximizers");
  if (analysis.det_neg_hessian.size() != analysis.ordered_maximizers.size())
    throw ConsistencyError("analysis is missing Hessian determinants");

  LimitConstant out;
  double sum = 0.0;
  bool any_b3 = false;
  for (std::size_t i = 0; i < analysis.ordered_maximizers.size(); ++i) {
    const double det = analysis.det_neg_hessian[i];
    if (!(det > 0.0))
      throw DegenerateHessian("det(-G) must be positive at every maximizer (got " +
                              std::to_string(det) + ")");
    const double j =
        product_integral(p, std::span<const double>(analysis.ordered_maximizers[i]), quad_nodes);
    out.product_integrals.push_back(j);
    const bool ok = j >= kB3Threshold;
    out.b3_ok.push_back(ok);
    any_b3 = any_b3 || ok;
    sum += j / std::sqrt(det);
  }
  if (!any_b3)
    throw B3Violation("density product integral vanishes at every maximizer (condition B3)");

  const double shape = 0.5 * (m - 1);
  out.k_ordered = std::pow(kTwoPi, shape) / std::tgamma(0.5 * (m + 1)) * sum;
  out.k_total = static_cast<double>(factorial(m - 1)) * out.k_ordered;
  out.coefficient = out.k_ordered / m;
  return out;
}

// Closed-form limit constant for gap-sum kernels whose maximum (u-max) or
// minimum (u-min) sits at the regular m-gon:
//   K = (2pi)^{(m-1)/2} [int prod_{l=0}^{m-1} p(x + 2pi l/m) dx]
//       / ( (-g''(2pi/m))^{(m-1)/2} Gamma((m+1)/2) sqrt(m) )
// with -g'' replaced by +g'' in u-min mode.
inline double limit_constant_gapsum(const Generator& g, int m, const Density& p, Mode mode,
                                    int quad_nodes = 8192) {
  if (m < 2) throw ConfigError("limit constant requires m >= 2");
  const double gpp = g.second_derivative(kTwoPi / m);
  double curvature = 0.0;
  if (mode == Mode::UMax) {
    if (!(gpp < 0.0))
      throw ModeMismatch("u-max gap-sum law needs g''(2pi/m) < 0; got " + std::to_string(gpp));
    curvature = -gpp;
  } else {
    if (!(gpp > 0.0))
      throw ModeMismatch("u-min gap-sum law needs g''(2pi/m) > 0; got " + std::to_string(gpp));
    curvature = gpp;
  }
  std::vector<double> w(static_cast<std::size_t>(m - 1));
  for (int l = 1; l < m; ++l) w[static_cast<std::size_t>(l - 1)] = kTwoPi * l / m;
  const double j = product_integral(p, std::span<const double>(w), quad_nodes);
  const double shape = 0.5 * (m - 1);
  return std::pow(kTwoPi, shape) * j /
         (std::pow(curvature, shape) * std::tgamma(0.5 * (m + 1)) * std::sqrt(double(m)));
}

// Rescale one realization of the extreme statistic. extreme_value is M for
// u-max and mu for u-min. Small negative results (within 1e-9 |M| of zero)
// are floating-point slack; anything beyond that indicates an inconsistent M.
inline double rescale(double h_n, double extreme_value, std::int64_t n, const LimitLaw& law) {
  if (n < law.m) throw ConfigError("sample size must satisfy n >= m");
  const double scale = std::pow(static_cast<double>(n), law.scaling_exponent());
  const double diff = (law.mode == Mode::UMax) ? (extreme_value - h_n) : (h_n - extreme_value);
  const double t = scale * diff;
  if (t < -1e-9 * std::abs(extreme_value))
    throw ConsistencyError("rescaled statistic is negative beyond slack: extreme value " +
                           std::to_string(extreme_value) + " is not the true extremum");
  return t;
}

}  // namespace umax
