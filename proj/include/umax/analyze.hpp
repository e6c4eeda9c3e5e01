#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "umax/density.hpp"
#include "umax/errors.hpp"
#include "umax/extremum.hpp"
#include "umax/hessian.hpp"
#include "umax/kernel.hpp"
#include "umax/limit_law.hpp"

namespace umax {

struct AnalysisOptions {
  Mode mode = Mode::UMax;
  OracleOptions oracle;
  int quad_nodes = 8192;
};

struct MaximizerInfo {
  std::vector<double> angles;
  double det_fd = 0.0;                 // det(-G) of the working (maximized) kernel
  std::optional<double> det_analytic;  // closed form when the family provides one
  double product_integral = 0.0;
  bool b3_ok = false;
};

// Full extremum-to-limit-law pipeline output. Determinants and the maximal
// value refer to the working kernel (negated for u-min), so det(-G) here is
// det(G) of the original kernel at a minimum; extreme_value is reported in
// the user's convention (M for u-max, mu for u-min).
struct Analysis {
  int m = 0;
  Mode mode = Mode::UMax;
  KernelFamily family = KernelFamily::Custom;
  double extreme_value = 0.0;
  std::optional<double> extreme_closed_form;
  std::vector<MaximizerInfo> maximizers;
  std::int64_t orbit_length = 0;
  std::int64_t total_point_count = 0;
  ConditionReport conditions;
  double k_ordered = 0.0;
  double k_total = 0.0;
  double coefficient = 0.0;  // c used downstream: analytic when available, else FD
  double coefficient_fd = 0.0;
  std::optional<double> coefficient_analytic;
  LimitLaw law;

  const MaxAnalysis& working_analysis() const { return working_; }
  MaxAnalysis working_;
};

namespace detail {

inline bool near_regular_polygon(std::span<const double> w, int m, double tol = 1e-4) {
  for (int j = 1; j < m; ++j)
    if (std::abs(w[static_cast<std::size_t>(j - 1)] - kTwoPi * j / m) > tol) return false;
  return true;
}

}  // namespace detail

// Runs the maximizer oracle on the working kernel, validates conditions
// A4/A6 (B3 is checked inside the limit-constant evaluation), and assembles
// the limit law through both the finite-difference/quadrature pipeline and,
// when the maximizer is the regular polygon of a known family, the analytic
// closed form.
inline Analysis analyze(const Kernel& kernel, const Density& density,
                        const AnalysisOptions& opt = {}) {
  Analysis out;
  out.m = kernel.degree();
  out.mode = opt.mode;
  out.family = kernel.family();

  const Kernel working = (opt.mode == Mode::UMin) ? kernel.negated() : kernel;
  out.working_ = find_max_oracle(working, opt.oracle);
  out.conditions = validate_conditions(working, out.working_);
  out.extreme_value =
      (opt.mode == Mode::UMin) ? -out.working_.max_value : out.working_.max_value;
  out.orbit_length = out.working_.orbit_length;
  out.total_point_count = out.working_.total_point_count;

  const LimitConstant numeric = limit_constant_general(out.working_, density, opt.quad_nodes);
  out.coefficient_fd = numeric.coefficient;
  out.k_ordered = numeric.k_ordered;
  out.k_total = numeric.k_total;

  // Closed forms apply when the single ordered maximizer is the regular
  // polygon of a gap-sum or pairwise-sum kernel.
  std::optional<double> analytic_det;
  if (kernel.family() != KernelFamily::Custom && out.working_.maximizer_count() == 1 &&
      detail::near_regular_polygon(std::span<const double>(out.working_.ordered_maximizers[0]),
                                   out.m)) {
    const MaxAnalysis regular = regular_polygon_analysis(working);
    out.extreme_closed_form =
        (opt.mode == Mode::UMin) ? -regular.max_value : regular.max_value;
    if (regular.det_neg_hessian[0] > 0.0) {
      analytic_det = regular.det_neg_hessian[0];
      MaxAnalysis closed = regular;
      const LimitConstant analytic = limit_constant_general(closed, density, opt.quad_nodes);
      out.coefficient_analytic = analytic.coefficient;
      out.k_ordered = analytic.k_ordered;
      out.k_total = analytic.k_total;
    }
  }

  for (std::size_t i = 0; i < out.working_.ordered_maximizers.size(); ++i) {
    MaximizerInfo info;
    info.angles = out.working_.ordered_maximizers[i];
    info.det_fd = out.working_.det_neg_hessian[i];
    info.det_analytic = analytic_det;
    info.product_integral = numeric.product_integrals[i];
    info.b3_ok = numeric.b3_ok[i];
    out.maximizers.push_back(std::move(info));
  }

  out.coefficient = out.coefficient_analytic.value_or(out.coefficient_fd);
  out.law = make_limit_law(out.m, opt.mode, out.coefficient);
  return out;
}

// Built-in kernel registry. Names follow the geometric quantity the kernel
// measures on the inscribed/circumscribed polygon.
struct NamedKernel {
  Kernel kernel;
  Mode natural_mode;
};

inline NamedKernel named_kernel(const std::string& name, int m, double y = 0.0, double a = 0.0,
                                double b = 0.0, int c = 0) {
  if (name == "perimeter")
    return {Kernel::gap_sum(Generator::sin_half(), m), Mode::UMax};
  if (name == "area")
    return {Kernel::gap_sum(Generator::half_sin(), m), Mode::UMax};
  if (name == "circumscribed-distance")
    return {Kernel::gap_sum(Generator::sec_half(), m), Mode::UMin};
  if (name == "generalized-perimeter")
    return {Kernel::gap_sum(Generator::pow_sin(y), m), Mode::UMax};
  if (name == "pairwise-distance")
    return {Kernel::pairwise_sum(Generator::sin_half(), m), Mode::UMax};
  if (name == "inverse-distance")
    return {Kernel::pairwise_sum(Generator::csc_half(), m), Mode::UMin};
  if (name == "alexander-stolarsky")
    return {Kernel::gap_sum(Generator::alexander_stolarsky(a, b, c), m), Mode::UMax};
  throw ConfigError("unknown kernel name: " + name);
}

}  // namespace umax
