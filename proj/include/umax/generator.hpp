#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "umax/angles.hpp"
#include "umax/errors.hpp"

namespace umax {

namespace detail {

// Natural cubic spline on a uniform grid over [0, 2pi]. C2, which is what
// finite-difference second derivatives of a tabulated generator rely on.
class CubicSpline {
 public:
  explicit CubicSpline(std::vector<double> values) : y_(std::move(values)) {
    const std::size_t n = y_.size();
    if (n < 4) throw ConfigError("tabulated generator needs at least 4 samples");
    h_ = kTwoPi / static_cast<double>(n - 1);
    // Knot second derivatives from the tridiagonal system
    //   m_{i-1} + 4 m_i + m_{i+1} = 6 (y_{i+1} - 2 y_i + y_{i-1}) / h^2
    // with natural boundary m_0 = m_{n-1} = 0 (Thomas algorithm).
    m_.assign(n, 0.0);
    std::vector<double> rhs(n, 0.0), c(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i)
      rhs[i] = 6.0 * (y_[i + 1] - 2.0 * y_[i] + y_[i - 1]) / (h_ * h_);
    c[1] = 0.25;
    rhs[1] *= 0.25;
    for (std::size_t i = 2; i + 1 < n; ++i) {
      const double denom = 4.0 - c[i - 1];
      c[i] = 1.0 / denom;
      rhs[i] = (rhs[i] - rhs[i - 1]) / denom;
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
      m_[i] = rhs[i] - c[i] * m_[i + 1];
      if (i == 1) break;
    }
  }

  double operator()(double x) const {
    const std::size_t n = y_.size();
    if (x <= 0.0) return y_.front();
    if (x >= kTwoPi) return y_.back();
    std::size_t i = static_cast<std::size_t>(x / h_);
    if (i >= n - 1) i = n - 2;
    const double a = (x - static_cast<double>(i) * h_) / h_;
    const double b = 1.0 - a;
    return b * y_[i] + a * y_[i + 1] +
           ((b * b * b - b) * m_[i] + (a * a * a - a) * m_[i + 1]) * h_ * h_ / 6.0;
  }

 private:
  std::vector<double> y_;
  std::vector<double> m_;  // second derivatives at knots
  double h_ = 0.0;
};

inline double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

}  // namespace detail

enum class GenFamily {
  SinHalf,             // 2 sin(x/2): chord length, perimeter summand
  HalfSin,             // sin(x)/2: inscribed triangle area summand
  SecHalf,             // 1/cos(x/2) on [0,pi), +inf beyond: circumscribed vertex distance
  PowSin,              // (2 sin(x/2))^y: generalized perimeter of order y
  CscHalf,             // 1/(2 sin(x/2)): inverse chord length
  AlexanderStolarsky,  // r(2 sin(x/2)) with r(t) = exp(-a t) t^b ln(t/2)^c
  Tabulated,
};

// A generator g: [0, 2pi] -> R (with +/-inf sentinels allowed at points where
// the geometric quantity degenerates). Gap-sum kernels apply g to consecutive
// central-angle gaps, pairwise-sum kernels to all pairwise angle differences.
class Generator {
 public:
  static Generator sin_half() { return Generator(GenFamily::SinHalf); }
  static Generator half_sin() { return Generator(GenFamily::HalfSin); }
  static Generator sec_half() { return Generator(GenFamily::SecHalf); }
  static Generator csc_half() { return Generator(GenFamily::CscHalf); }

  static Generator pow_sin(double y) {
    Generator g(GenFamily::PowSin);
    g.y_ = y;
    return g;
  }

  static Generator alexander_stolarsky(double a, double b, int c) {
    if (c < 0) throw ConfigError("alexander-stolarsky exponent c must be a nonnegative integer");
    Generator g(GenFamily::AlexanderStolarsky);
    g.a_ = a;
    g.b_ = b;
    g.c_ = c;
    return g;
  }

  // Values sampled on a uniform grid over [0, 2pi] inclusive; interpolated
  // with a natural cubic spline.
  static Generator tabulated(std::vector<double> values) {
    Generator g(GenFamily::Tabulated);
    g.table_ = std::make_shared<detail::CubicSpline>(std::move(values));
    return g;
  }

  GenFamily family() const { return family_; }
  bool negated() const { return negated_; }
  double pow_exponent() const { return y_; }

  Generator negated_copy() const {
    Generator g = *this;
    g.negated_ = !g.negated_;
    return g;
  }

  double operator()(double x) const {
    const double v = raw_value(x);
    return negated_ ? -v : v;
  }

  // g''(x). Analytic per family; central finite difference with step 1e-5
  // for tabulated generators. Throws DomainError where g is not twice
  // differentiable or infinite.
  double second_derivative(double x) const {
    const double v = raw_second_derivative(x);
    if (!std::isfinite(v))
      throw DomainError("generator second derivative not finite at x=" + std::to_string(x));
    return negated_ ? -v : v;
  }

  std::string family_name() const {
    switch (family_) {
      case GenFamily::SinHalf: return "sin-half";
      case GenFamily::HalfSin: return "half-sin";
      case GenFamily::SecHalf: return "sec-half";
      case GenFamily::PowSin: return "pow-sin";
      case GenFamily::CscHalf: return "csc-half";
      case GenFamily::AlexanderStolarsky: return "alexander-stolarsky";
      case GenFamily::Tabulated: return "tabulated";
    }
    return "?";
  }

  // Evenness probe g(x) = g(2pi - x) on a 1024-point grid; required of
  // pairwise-sum generators.
  bool is_even(double tol = 1e-12) const {
    constexpr int kProbe = 1024;
    for (int k = 1; k < kProbe; ++k) {
      const double x = kTwoPi * k / kProbe;
      const double a = (*this)(x);
      const double b = (*this)(kTwoPi - x);
      if (std::isinf(a) || std::isinf(b)) {
        if (a != b) return false;
        continue;
      }
      if (std::abs(a - b) > tol * (1.0 + std::abs(a))) return false;
    }
    return true;
  }

 private:
  explicit Generator(GenFamily f) : family_(f) {}

  double raw_value(double x) const {
    switch (family_) {
      case GenFamily::SinHalf:
        return 2.0 * std::sin(0.5 * x);
      case GenFamily::HalfSin:
        return 0.5 * std::sin(x);
      case GenFamily::SecHalf:
        if (x >= std::numbers::pi) return std::numeric_limits<double>::infinity();
        return 1.0 / std::cos(0.5 * x);
      case GenFamily::PowSin: {
        const double t = 2.0 * std::sin(0.5 * x);
        if (t <= 0.0 && y_ < 0.0) return std::numeric_limits<double>::infinity();
        return std::pow(t, y_);
      }
      case GenFamily::CscHalf: {
        const double s = std::sin(0.5 * x);
        if (s <= 0.0) return std::numeric_limits<double>::infinity();
        return 0.5 / s;
      }
      case GenFamily::AlexanderStolarsky:
        return alexander_stolarsky_value(2.0 * std::sin(0.5 * x));
      case GenFamily::Tabulated:
        return (*table_)(x);
    }
    return std::numeric_limits<double>::quiet_NaN();
  }

  double raw_second_derivative(double x) const {
    const double s = std::sin(0.5 * x);
    const double c = std::cos(0.5 * x);
    switch (family_) {
      case GenFamily::SinHalf:
        return -0.5 * s;
      case GenFamily::HalfSin:
        return -0.5 * std::sin(x);
      case GenFamily::SecHalf: {
        if (x >= std::numbers::pi)
          throw DomainError("sec-half generator is infinite for x >= pi");
        return (1.0 + s * s) / (4.0 * c * c * c);
      }
      case GenFamily::PowSin: {
        const double t = 2.0 * s;
        if (t <= 0.0) throw DomainError("pow-sin second derivative undefined at the endpoints");
        return y_ * (y_ - 1.0) * std::pow(t, y_ - 2.0) * c * c -
               0.5 * y_ * std::pow(t, y_ - 1.0) * s;
      }
      case GenFamily::CscHalf: {
        if (s <= 0.0) throw DomainError("csc-half second derivative undefined at the endpoints");
        return (2.0 - s * s) / (8.0 * s * s * s);
      }
      case GenFamily::AlexanderStolarsky: {
        const double t = 2.0 * s;
        if (t <= 0.0 || t >= 2.0)
          throw DomainError("alexander-stolarsky second derivative undefined at the endpoints");
        double r1 = 0.0, r2 = 0.0;
        alexander_stolarsky_derivs(t, r1, r2);
        return r2 * c * c - 0.5 * r1 * s;
      }
      case GenFamily::Tabulated: {
        const double h = 1e-5;
        if (x - h <= 0.0 || x + h >= kTwoPi)
          throw DomainError("tabulated second derivative undefined at the endpoints");
        return ((*table_)(x + h) - 2.0 * (*table_)(x) + (*table_)(x - h)) / (h * h);
      }
    }
    return std::numeric_limits<double>::quiet_NaN();
  }

  double alexander_stolarsky_value(double t) const {
    if (t <= 0.0) {
      // Limit for t -> 0+: t^b ln(t/2)^c with the valid parameter ranges.
      if (b_ > 0.0) return 0.0;
      const double inf = std::numeric_limits<double>::infinity();
      return (c_ % 2 == 1) ? -inf : inf;
    }
    const double L = std::log(0.5 * t);
    return std::exp(-a_ * t) * std::pow(t, b_) * detail::ipow(L, c_);
  }

  // r(t) = exp(-a t) F(t) with F = t^b L^c, L = ln(t/2). Returns r' and r''.
  void alexander_stolarsky_derivs(double t, double& r1, double& r2) const {
    const double L = std::log(0.5 * t);
    const double c = static_cast<double>(c_);
    const double F = std::pow(t, b_) * detail::ipow(L, c_);
    double F1 = b_ * std::pow(t, b_ - 1.0) * detail::ipow(L, c_);
    if (c_ >= 1) F1 += c * std::pow(t, b_ - 1.0) * detail::ipow(L, c_ - 1);
    double F2 = b_ * (b_ - 1.0) * std::pow(t, b_ - 2.0) * detail::ipow(L, c_);
    if (c_ >= 1) F2 += c * (2.0 * b_ - 1.0) * std::pow(t, b_ - 2.0) * detail::ipow(L, c_ - 1);
    if (c_ >= 2) F2 += c * (c - 1.0) * std::pow(t, b_ - 2.0) * detail::ipow(L, c_ - 2);
    const double e = std::exp(-a_ * t);
    r1 = e * (F1 - a_ * F);
    r2 = e * (F2 - 2.0 * a_ * F1 + a_ * a_ * F);
  }

  GenFamily family_;
  double y_ = 0.0;
  double a_ = 0.0, b_ = 0.0;
  int c_ = 0;
  bool negated_ = false;
  std::shared_ptr<const detail::CubicSpline> table_;
};

}  // namespace umax
