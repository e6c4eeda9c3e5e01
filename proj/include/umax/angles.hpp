#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "umax/errors.hpp"

namespace umax {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Whether the extreme statistic under study is the subset maximum or the
// subset minimum of the kernel. Minima are handled throughout by negating
// the kernel and reusing the maximum machinery.
enum class Mode { UMax, UMin };

// Reduce an angle into [0, 2pi).
inline double reduce_angle(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

// A point on the unit circle, identified with its polar angle in [0, 2pi).
class CirclePoint {
 public:
  CirclePoint() = default;
  explicit CirclePoint(double theta) : theta_(reduce_angle(theta)) {}
  double theta() const { return theta_; }

 private:
  double theta_ = 0.0;
};

// The vector of central angles beta_i measured counterclockwise from the
// first point of a configuration to each of the others. All components lie
// in [0, 2pi); the tuple for a degree-m kernel has m-1 components.
class AngleTuple {
 public:
  AngleTuple() = default;
  explicit AngleTuple(std::vector<double> beta) : beta_(std::move(beta)) {
    if (beta_.empty()) throw DegreeError("angle tuple must have at least one component");
    for (double& b : beta_) b = reduce_angle(b);
  }

  std::span<const double> view() const { return beta_; }
  const std::vector<double>& components() const { return beta_; }
  std::size_t size() const { return beta_.size(); }
  double operator[](std::size_t i) const { return beta_[i]; }

 private:
  std::vector<double> beta_;
};

// Central angles of a point configuration: component i is the angle from
// the first point to point i+1, taken counterclockwise mod 2pi.
inline AngleTuple central_angles(std::span<const CirclePoint> points) {
  if (points.size() < 2) throw DegreeError("central angles need at least 2 points");
  std::vector<double> beta(points.size() - 1);
  for (std::size_t i = 1; i < points.size(); ++i)
    beta[i - 1] = reduce_angle(points[i].theta() - points[0].theta());
  return AngleTuple(std::move(beta));
}

// Overload for raw polar angles.
inline AngleTuple central_angles(std::span<const double> thetas) {
  if (thetas.size() < 2) throw DegreeError("central angles need at least 2 points");
  std::vector<double> beta(thetas.size() - 1);
  for (std::size_t i = 1; i < thetas.size(); ++i)
    beta[i - 1] = reduce_angle(thetas[i] - thetas[0]);
  return AngleTuple(std::move(beta));
}

}  // namespace umax
