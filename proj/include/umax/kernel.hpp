#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "umax/angles.hpp"
#include "umax/errors.hpp"
#include "umax/generator.hpp"
#include "umax/rng.hpp"

namespace umax {

enum class KernelFamily { GapSum, PairwiseSum, Custom };

// Evaluator on central-angle tuples for custom kernels.
using CustomEvaluator = std::function<double(std::span<const double>)>;

inline constexpr int kMaxDegree = 32;

// A rotation-invariant symmetric kernel of degree m on the unit circle,
// expressed through the central angles beta of a configuration.
//
//   GapSum:      h(beta) = sum_i g(beta_i - beta_{i-1}) over sorted angles,
//                with beta_0 = 0 and beta_m = 2pi prepended/appended.
//   PairwiseSum: h(beta) = sum_{0<=i<j<=m-1} g(|beta_j - beta_i|), beta_0 = 0;
//                requires an even generator, g(x) = g(2pi - x).
//   Custom:      arbitrary evaluator; must pass the rotation/permutation
//                invariance probe at construction.
class Kernel {
 public:
  static Kernel gap_sum(Generator g, int m) {
    check_degree(m);
    Kernel k(KernelFamily::GapSum, m);
    k.g_ = std::move(g);
    return k;
  }

  static Kernel pairwise_sum(Generator g, int m) {
    check_degree(m);
    if (!g.is_even())
      throw ValidationError("pairwise-sum generator must satisfy g(x) = g(2pi - x)");
    Kernel k(KernelFamily::PairwiseSum, m);
    k.g_ = std::move(g);
    return k;
  }

  static Kernel custom(CustomEvaluator h, int m, const std::string& label = "custom") {
    check_degree(m);
    Kernel k(KernelFamily::Custom, m);
    k.custom_ = std::move(h);
    k.label_ = label;
    k.probe_invariance();
    return k;
  }

  KernelFamily family() const { return family_; }
  int degree() const { return m_; }

  const Generator& generator() const {
    if (!g_) throw FamilyError("custom kernel has no generator");
    return *g_;
  }

  // Kernel with opposite sign; used to reduce u-min analysis to u-max.
  // Family and gap structure are preserved (the generator is negated).
  Kernel negated() const {
    Kernel k = *this;
    if (g_) k.g_ = g_->negated_copy();
    if (family_ == KernelFamily::Custom) {
      auto inner = custom_;
      k.custom_ = [inner](std::span<const double> beta) { return -inner(beta); };
    }
    return k;
  }

  double eval_angles(std::span<const double> beta) const {
    if (static_cast<int>(beta.size()) != m_ - 1)
      throw DegreeError("angle tuple size must be m - 1");
    switch (family_) {
      case KernelFamily::GapSum:
        return eval_gap_sum(beta);
      case KernelFamily::PairwiseSum:
        return eval_pairwise(beta);
      case KernelFamily::Custom:
        return custom_(beta);
    }
    return 0.0;
  }

  double eval_angles(const AngleTuple& beta) const { return eval_angles(beta.view()); }

  double eval_points(std::span<const double> thetas) const {
    if (static_cast<int>(thetas.size()) != m_)
      throw DegreeError("configuration must have exactly m points");
    double beta[kMaxDegree];
    for (int i = 1; i < m_; ++i) beta[i - 1] = reduce_angle(thetas[i] - thetas[0]);
    return eval_angles(std::span<const double>(beta, static_cast<std::size_t>(m_ - 1)));
  }

  double eval_points(std::span<const CirclePoint> points) const {
    if (static_cast<int>(points.size()) != m_)
      throw DegreeError("configuration must have exactly m points");
    double beta[kMaxDegree];
    for (int i = 1; i < m_; ++i) beta[i - 1] = reduce_angle(points[i].theta() - points[0].theta());
    return eval_angles(std::span<const double>(beta, static_cast<std::size_t>(m_ - 1)));
  }

  std::string family_name() const {
    switch (family_) {
      case KernelFamily::GapSum: return "gap-sum";
      case KernelFamily::PairwiseSum: return "pairwise-sum";
      case KernelFamily::Custom: return "custom";
    }
    return "?";
  }

 private:
  Kernel(KernelFamily f, int m) : family_(f), m_(m) {}

  static void check_degree(int m) {
    if (m < 2) throw DegreeError("kernel degree must satisfy m >= 2");
    if (m > kMaxDegree) throw ConfigError("kernel degree too large");
  }

  double eval_gap_sum(std::span<const double> beta) const {
    double b[kMaxDegree];
    const int d = m_ - 1;
    for (int i = 0; i < d; ++i) b[i] = beta[i];
    // Sorting is the canonical symmetric extension of the ordered-angle form.
    std::sort(b, b + d);
    const Generator& g = *g_;
    double h = g(b[0]);
    for (int i = 1; i < d; ++i) h += g(b[i] - b[i - 1]);
    h += g(kTwoPi - b[d - 1]);
    return h;
  }

  double eval_pairwise(std::span<const double> beta) const {
    const int d = m_ - 1;
    const Generator& g = *g_;
    double h = 0.0;
    for (int j = 0; j < d; ++j) {
      h += g(beta[j]);  // pair (beta_0 = 0, beta_{j+1})
      for (int i = 0; i < j; ++i) h += g(std::abs(beta[j] - beta[i]));
    }
    return h;
  }

  // Conditions A1/A2 probe for custom kernels: rotation and permutation of
  // the underlying points must leave the value unchanged.
  void probe_invariance() const {
    Rng rng(mix_seed(0x5EEDu, Stream::Probe, static_cast<std::uint64_t>(m_)));
    std::vector<double> thetas(m_), moved(m_);
    std::vector<int> perm(m_);
    for (int trial = 0; trial < 100; ++trial) {
      for (auto& t : thetas) t = kTwoPi * rng.uniform01();
      const double base = eval_points(std::span<const double>(thetas));
      const double rot = kTwoPi * rng.uniform01();
      for (int i = 0; i < m_; ++i) moved[i] = reduce_angle(thetas[i] + rot);
      check_probe(base, eval_points(std::span<const double>(moved)), "rotation");
      for (int i = 0; i < m_; ++i) perm[i] = i;
      for (int i = m_ - 1; i > 0; --i)
        std::swap(perm[i], perm[static_cast<int>(rng.uniform01() * (i + 1))]);
      for (int i = 0; i < m_; ++i) moved[i] = thetas[perm[i]];
      check_probe(base, eval_points(std::span<const double>(moved)), "permutation");
    }
  }

  static void check_probe(double a, double b, const char* what) {
    if (std::isinf(a) || std::isinf(b)) {
      if (a != b)
        throw ValidationError(std::string("custom kernel failed the ") + what +
                              " invariance probe");
      return;
    }
    if (std::abs(a - b) > 1e-10 * (1.0 + std::abs(a)))
      throw ValidationError(std::string("custom kernel failed the ") + what +
                            " invariance probe");
  }

  KernelFamily family_;
  int m_;
  std::optional<Generator> g_;
  CustomEvaluator custom_;
  std::string label_;
};

}  // namespace umax
