#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "umax/limit_law.hpp"

namespace umax {

// Right-continuous empirical distribution function of a sample.
class EmpiricalCDF {
 public:
  EmpiricalCDF() = default;
  explicit EmpiricalCDF(std::vector<double> values) : sorted_(std::move(values)) {
    std::sort(sorted_.begin(), sorted_.end());
  }

  double operator()(double t) const {
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), t);
    return static_cast<double>(std::distance(sorted_.begin(), it)) /
           static_cast<double>(sorted_.size());
  }

  const std::vector<double>& sorted_values() const { return sorted_; }
  std::size_t size() const { return sorted_.size(); }

 private:
  std::vector<double> sorted_;
};

// Two-sided Kolmogorov-Smirnov distance to the limit law, evaluated exactly
// at the empirical jump points (the sup over order statistics), not on a
// grid. Rescaled values may undershoot zero by floating-point slack; the law
// has no mass there, so they are clamped.
inline double ks_distance(const EmpiricalCDF& ecdf, const LimitLaw& law) {
  const auto& v = ecdf.sorted_values();
  const double n = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double f = law.cdf(std::max(v[i], 0.0));
    d = std::max(d, f - static_cast<double>(i) / n);
    d = std::max(d, static_cast<double>(i + 1) / n - f);
  }
  return d;
}

}  // namespace umax
