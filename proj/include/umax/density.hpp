#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "umax/angles.hpp"
#include "umax/errors.hpp"
#include "umax/rng.hpp"

namespace umax {

// Modified Bessel I0 by power series, accurate to ~1e-15 for kappa <= 20.
inline double bessel_i0(double kappa) {
  const double q = 0.25 * kappa * kappa;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

enum class DensityFamily { Uniform, VonMises, Tabulated, Mixture };

// A continuous probability density on the circle (condition B2: nonnegative,
// 2pi-periodic, integrating to one). Tabulated densities interpolate
// linearly between uniform grid nodes with periodic closure p(0) = p(2pi).
class Density {
 public:
  static Density uniform() { return Density(DensityFamily::Uniform); }

  static Density von_mises(double mu, double kappa) {
    if (kappa < 0.0 || kappa > 20.0)
      throw ConfigError("von Mises concentration must lie in [0, 20]");
    Density d(DensityFamily::VonMises);
    d.mu_ = reduce_angle(mu);
    d.kappa_ = kappa;
    d.norm_ = 1.0 / (kTwoPi * bessel_i0(kappa));
    return d;
  }

  // Node values on the uniform grid x_i = 2pi i / N, i = 0..N-1.
  static Density tabulated(std::vector<double> values) {
    if (values.size() < 8) throw ConfigError("tabulated density needs at least 8 grid values");
    for (double v : values)
      if (!(v >= 0.0)) throw ValidationError("tabulated density has a negative value");
    Density d(DensityFamily::Tabulated);
    d.values_ = std::make_shared<const std::vector<double>>(std::move(values));
    d.check_normalization();
    return d;
  }

  static Density mixture(std::vector<double> weights, std::vector<Density> components) {
    if (weights.size() != components.size() || weights.empty())
      throw ConfigError("mixture weights and components must match and be nonempty");
    double total = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0)) throw ValidationError("mixture weight must be nonnegative");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-8) throw ValidationError("mixture weights must sum to 1");
    Density d(DensityFamily::Mixture);
    d.weights_ = std::make_shared<const std::vector<double>>(std::move(weights));
    d.components_ = std::make_shared<const std::vector<Density>>(std::move(components));
    return d;
  }

  // CSV with rows "angle,value"; angles must be the ascending uniform grid
  // 2pi i / N. A non-numeric first line is treated as a header.
  static Density from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open density CSV: " + path);
    std::vector<double> angles, values;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream row(line);
      std::string a, b;
      if (!std::getline(row, a, ',') || !std::getline(row, b))
        throw ConfigError("density CSV rows must be 'angle,value'");
      try {
        angles.push_back(std::stod(a));
        values.push_back(std::stod(b));
      } catch (const std::exception&) {
        if (first) {
          first = false;
          continue;  // header
        }
        throw ConfigError("malformed density CSV row: " + line);
      }
      first = false;
    }
    const std::size_t n = angles.size();
    if (n < 8) throw ConfigError("density CSV needs at least 8 rows");
    for (std::size_t i = 0; i < n; ++i) {
      const double expected = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
      if (std::abs(angles[i] - expected) > 1e-9)
        throw ConfigError("density CSV grid must be the uniform grid 2pi*i/N");
    }
    return tabulated(std::move(values));
  }

  DensityFamily family() const { return family_; }
  double von_mises_mu() const { return mu_; }
  double von_mises_kappa() const { return kappa_; }
  const std::vector<double>& table_values() const { return *values_; }

  // p(x); the argument is reduced mod 2pi.
  double operator()(double x) const {
    switch (family_) {
      case DensityFamily::Uniform:
        return 1.0 / kTwoPi;
      case DensityFamily::VonMises:
        return norm_ * std::exp(kappa_ * std::cos(x - mu_));
      case DensityFamily::Tabulated: {
        const auto& v = *values_;
        const std::size_t n = v.size();
        const double u = reduce_angle(x) * static_cast<double>(n) / kTwoPi;
        std::size_t i = static_cast<std::size_t>(u);
        if (i >= n) i = n - 1;
        const double frac = u - static_cast<double>(i);
        const double right = v[(i + 1) % n];  // periodic closure
        return v[i] + frac * (right - v[i]);
      }
      case DensityFamily::Mixture: {
        double p = 0.0;
        for (std::size_t i = 0; i < weights_->size(); ++i)
          p += (*weights_)[i] * (*components_)[i](x);
        return p;
      }
    }
    return 0.0;
  }

 private:
  explicit Density(DensityFamily f) : family_(f) {}

  void check_normalization() const {
    // Trapezoid over the grid is exact for the piecewise-linear interpolant.
    const auto& v = *values_;
    double integral = 0.0;
    for (double x : v) integral += x;
    integral *= kTwoPi / static_cast<double>(v.size());
    if (std::abs(integral - 1.0) > 1e-8)
      throw ValidationError("tabulated density must integrate to 1 (got " +
                            std::to_string(integral) + ")");
  }

  DensityFamily family_;
  double mu_ = 0.0, kappa_ = 0.0, norm_ = 0.0;
  std::shared_ptr<const std::vector<double>> values_;
  std::shared_ptr<const std::vector<double>> weights_;
  std::shared_ptr<const std::vector<Density>> components_;
};

// Inversion-sampling table: cumulative trapezoid CDF over a uniform grid,
// linear interpolation within cells. Deterministic draw count (one uniform
// per sample), reproducible across platforms. Uniform densities bypass the
// table and invert exactly.
class DensityTable {
 public:
  explicit DensityTable(Density density, int grid_size = 4096)
      : density_(std::move(density)), n_(grid_size) {
    if (n_ < 16) throw ConfigError("density table grid too small");
    values_.resize(static_cast<std::size_t>(n_) + 1);
    for (int i = 0; i <= n_; ++i) values_[static_cast<std::size_t>(i)] = density_(step() * i);
    cum_.assign(static_cast<std::size_t>(n_) + 1, 0.0);
    for (int i = 0; i < n_; ++i)
      cum_[static_cast<std::size_t>(i) + 1] =
          cum_[static_cast<std::size_t>(i)] +
          0.5 * step() * (values_[static_cast<std::size_t>(i)] + values_[static_cast<std::size_t>(i) + 1]);
    const double total = cum_.back();
    if (!(total > 0.0)) throw ValidationError("density integrates to zero");
    for (double& c : cum_) c /= total;
    mp_ = 0.0;
    for (int i = 0; i < 4 * n_; ++i) mp_ = std::max(mp_, density_(kTwoPi * i / (4.0 * n_)));
  }

  const Density& density() const { return density_; }
  double sup_bound() const { return mp_; }

  double sample(Rng& rng) const {
    const double u = rng.uniform01();
    if (density_.family() == DensityFamily::Uniform) return kTwoPi * u;
    auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
    std::size_t i = static_cast<std::size_t>(std::distance(cum_.begin(), it));
    if (i > 0) --i;
    if (i >= static_cast<std::size_t>(n_)) i = static_cast<std::size_t>(n_) - 1;
    const double seg = cum_[i + 1] - cum_[i];
    if (seg <= 0.0) return reduce_angle(step() * static_cast<double>(i));
    return reduce_angle(step() * (static_cast<double>(i) + (u - cum_[i]) / seg));
  }

 private:
  double step() const { return kTwoPi / n_; }

  Density density_;
  int n_;
  std::vector<double> values_;
  std::vector<double> cum_;
  double mp_ = 0.0;
};

// Condition B3 integral for a maximizer W: the overlap of the density with
// itself rotated through the maximizer offsets,
//   int_0^{2pi} p(x) prod_l p(x + W_l) dx,
// by the periodic composite trapezoid rule (spectral accuracy for smooth
// periodic integrands).
inline double product_integral(const Density& p, std::span<const double> w, int nodes = 8192) {
  double sum = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double x = kTwoPi * i / nodes;
    double term = p(x);
    for (double offset : w) term *= p(reduce_angle(x + offset));
    sum += term;
  }
  return sum * kTwoPi / nodes;
}

inline constexpr double kB3Threshold = 1e-12;

}  // namespace umax
