#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "umax/angles.hpp"
#include "umax/errors.hpp"
#include "umax/hessian.hpp"
#include "umax/kernel.hpp"

namespace umax {

// Maximum structure of a kernel over the ordered simplex
// 0 <= beta_1 <= ... <= beta_{m-1} <= 2pi: the maximal value, the ordered
// representatives W_1..W_r of the permutation orbits of maximizers, and the
// curvature factor det(-G) at each. The full maximizer count is r * (m-1)!.
struct MaxAnalysis {
  int m = 0;
  double max_value = 0.0;
  std::vector<std::vector<double>> ordered_maximizers;
  std::vector<double> det_neg_hessian;
  std::int64_t orbit_length = 0;
  std::int64_t total_point_count = 0;

  int maximizer_count() const { return static_cast<int>(ordered_maximizers.size()); }
};

struct OracleOptions {
  int grid_n = 0;  // 0: auto (120 per dimension for m <= 4, 40 for larger m)
  int refine_iters = 200;
  int threads = 1;
  double value_cluster_tol = 1e-6;
  double position_cluster_tol = 1e-3;
  double boundary_tol = 1e-6;
  bool compute_hessians = true;
};

inline std::int64_t factorial(int n) {
  std::int64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

namespace detail {

struct GridCandidate {
  double value;
  std::array<int, kMaxDegree> idx;

  bool better_than(const GridCandidate& o, int d) const {
    if (value != o.value) return value > o.value;
    for (int j = 0; j < d; ++j)
      if (idx[j] != o.idx[j]) return idx[j] < o.idx[j];
    return false;
  }
};

// Enumerates ordered index tuples i0 <= i1 <= ... <= i_{d-1} in [0, grid_n]
// with the first coordinate restricted to [first_lo, first_hi], keeping the
// best `cap` values. Deterministic for any slab partition: the kept set per
// slab depends only on the slab, and the merge orders by (value, lex index).
inline void scan_slab(const Kernel& kernel, int grid_n, int first_lo, int first_hi, int cap,
                      std::vector<GridCandidate>& out) {
  const int d = kernel.degree() - 1;
  if (first_lo > first_hi) return;
  const double h = kTwoPi / grid_n;
  std::array<int, kMaxDegree> idx{};
  std::vector<double> beta(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) idx[j] = first_lo;
  const auto by_rank = [d](const GridCandidate& a, const GridCandidate& b) {
    return a.better_than(b, d);
  };
  double threshold = -std::numeric_limits<double>::infinity();
  while (true) {
    for (int j = 0; j < d; ++j) beta[static_cast<std::size_t>(j)] = idx[j] * h;
    const double v = kernel.eval_angles(std::span<const double>(beta));
    if (v > threshold && !std::isnan(v)) {
      out.push_back(GridCandidate{v, idx});
      if (static_cast<int>(out.size()) >= 2 * cap) {
        // Compact: later equal-valued candidates are lexicographically worse,
        // so a strict threshold keeps exactly the top `cap` by rank.
        std::sort(out.begin(), out.end(), by_rank);
        out.resize(static_cast<std::size_t>(cap));
        threshold = out.back().value;
      }
    }
    // Odometer increment preserving the ordering constraint.
    int j = d - 1;
    while (j >= 0) {
      ++idx[j];
      const int limit = (j == 0) ? first_hi : grid_n;
      if (idx[j] <= limit) {
        for (int t = j + 1; t < d; ++t) idx[t] = idx[j];
        break;
      }
      --j;
    }
    if (j < 0) break;
  }
  std::sort(out.begin(), out.end(), by_rank);
  if (static_cast<int>(out.size()) > cap) out.resize(static_cast<std::size_t>(cap));
}

inline double eval_clamped(const Kernel& kernel, const std::vector<double>& beta) {
  return kernel.eval_angles(std::span<const double>(beta));
}

// Cyclic coordinate descent within the ordered simplex, halving the step
// whenever a full sweep makes no progress.
inline std::pair<std::vector<double>, double> refine(const Kernel& kernel,
                                                     std::vector<double> beta, double step0,
                                                     int max_rounds) {
  const int d = static_cast<int>(beta.size());
  double best = eval_clamped(kernel, beta);
  double step = step0;
  for (int round = 0; round < max_rounds && step > 1e-9; ++round) {
    bool improved = false;
    for (int j = 0; j < d; ++j) {
      const double lo = (j > 0) ? beta[static_cast<std::size_t>(j - 1)] : 0.0;
      const double hi = (j + 1 < d) ? beta[static_cast<std::size_t>(j + 1)] : kTwoPi;
      const double old = beta[static_cast<std::size_t>(j)];
      for (const double cand : {old + step, old - step}) {
        const double c = std::clamp(cand, lo, hi);
        if (c == beta[static_cast<std::size_t>(j)]) continue;
        const double saved = beta[static_cast<std::size_t>(j)];
        beta[static_cast<std::size_t>(j)] = c;
        const double v = eval_clamped(kernel, beta);
        if (v > best) {
          best = v;
          improved = true;
        } else {
          beta[static_cast<std::size_t>(j)] = saved;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return {std::move(beta), best};
}

inline double min_gap(const std::vector<double>& w) {
  double g = w.front();
  for (std::size_t i = 1; i < w.size(); ++i) g = std::min(g, w[i] - w[i - 1]);
  g = std::min(g, kTwoPi - w.back());
  return g;
}

}  // namespace detail

// Brute-force maximizer oracle: grid search over the ordered simplex at
// resolution 2pi/grid_n followed by coordinate-descent refinement. Clusters
// of near-equal refined maxima (within value_cluster_tol) are merged into
// distinct ordered maximizers when separated by more than
// position_cluster_tol in sup-norm. Independent of the analytic
// regular-polygon path; used to certify it.
inline MaxAnalysis find_max_oracle(const Kernel& kernel, const OracleOptions& opt = {}) {
  const int m = kernel.degree();
  const int d = m - 1;
  int grid_n = opt.grid_n;
  if (grid_n == 0) grid_n = (m <= 4) ? 120 : 40;
  if (grid_n < 8 * d) throw ConfigError("oracle grid too coarse: need grid_n >= 8 (m-1)");
  if (m - 1 > 20) throw ConfigError("orbit counting overflows past m = 21");

  constexpr int kCap = 256;
  std::vector<detail::GridCandidate> candidates;
  const int threads = std::max(1, opt.threads);
  if (threads == 1) {
    detail::scan_slab(kernel, grid_n, 0, grid_n, kCap, candidates);
  } else {
    std::vector<std::vector<detail::GridCandidate>> per_thread(
        static_cast<std::size_t>(threads));
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      const int lo = static_cast<int>(static_cast<std::int64_t>(grid_n + 1) * t / threads);
      const int hi =
          static_cast<int>(static_cast<std::int64_t>(grid_n + 1) * (t + 1) / threads) - 1;
      pool.emplace_back([&, t, lo, hi] {
        detail::scan_slab(kernel, grid_n, lo, hi, kCap, per_thread[static_cast<std::size_t>(t)]);
      });
    }
    for (auto& th : pool) th.join();
    for (auto& part : per_thread)
      candidates.insert(candidates.end(), part.begin(), part.end());
  }
  if (candidates.empty()) throw UnboundedKernel("kernel has no finite values on the grid");
  std::sort(candidates.begin(), candidates.end(),
            [&](const detail::GridCandidate& a, const detail::GridCandidate& b) {
              return a.better_than(b, d);
            });
  if (candidates.front().value == std::numeric_limits<double>::infinity())
    throw UnboundedKernel("kernel attains +infinity; no finite maximum exists");
  if (candidates.front().value == -std::numeric_limits<double>::infinity())
    throw UnboundedKernel("kernel has no finite values on the grid");

  // Drop near-duplicates on the grid (within two grid steps of a better
  // candidate), then refine the survivors.
  const double h = kTwoPi / grid_n;
  std::vector<detail::GridCandidate> seeds;
  for (const auto& c : candidates) {
    bool dominated = false;
    for (const auto& s : seeds) {
      int dist = 0;
      for (int j = 0; j < d; ++j) dist = std::max(dist, std::abs(c.idx[j] - s.idx[j]));
      if (dist <= 2) {
        dominated = true;
        break;
      }
    }
    if (!dominated) seeds.push_back(c);
    if (static_cast<int>(seeds.size()) >= 40) break;
  }

  std::vector<std::pair<std::vector<double>, double>> refined;
  for (const auto& s : seeds) {
    std::vector<double> beta(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) beta[static_cast<std::size_t>(j)] = s.idx[j] * h;
    refined.push_back(detail::refine(kernel, std::move(beta), h, opt.refine_iters));
  }
  std::sort(refined.begin(), refined.end(),
            [](const auto& a, const auto& b) { return a.second > b.second; });

  const double best = refined.front().second;
  if (std::isinf(best)) throw UnboundedKernel("kernel attains +infinity; no finite maximum exists");
  std::vector<std::vector<double>> maximizers;
  for (const auto& [w, v] : refined) {
    if (v < best - opt.value_cluster_tol) break;
    bool duplicate = false;
    for (const auto& kept : maximizers) {
      double dist = 0.0;
      for (int j = 0; j < d; ++j)
        dist = std::max(dist, std::abs(w[static_cast<std::size_t>(j)] -
                                       kept[static_cast<std::size_t>(j)]));
      if (dist <= opt.position_cluster_tol) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) maximizers.push_back(w);
  }
  std::sort(maximizers.begin(), maximizers.end());

  for (const auto& w : maximizers) {
    if (detail::min_gap(w) < opt.boundary_tol)
      throw BoundaryMaximum(
          "maximum attained on the simplex boundary: extremal points coincide "
          "(minimal gap " +
          std::to_string(detail::min_gap(w)) + ")");
  }

  MaxAnalysis analysis;
  analysis.m = m;
  analysis.max_value = best;
  analysis.ordered_maximizers = std::move(maximizers);
  analysis.orbit_length = factorial(m - 1);
  analysis.total_point_count =
      analysis.orbit_length * static_cast<std::int64_t>(analysis.ordered_maximizers.size());
  if (opt.compute_hessians) {
    for (const auto& w : analysis.ordered_maximizers) {
      const HessianReport rep = hessian_fd_richardson(kernel, std::span<const double>(w));
      analysis.det_neg_hessian.push_back(rep.det_neg_g);
    }
  }
  return analysis;
}

// Regular-polygon candidate analysis with analytic maximal value and
// Hessian determinant. Certifies nothing about global optimality; the grid
// oracle is the independent check for that.
inline MaxAnalysis regular_polygon_analysis(const Kernel& kernel) {
  const int m = kernel.degree();
  if (kernel.family() == KernelFamily::Custom)
    throw FamilyError("regular-polygon analysis needs a gap-sum or pairwise-sum kernel");
  const Generator& g = kernel.generator();

  MaxAnalysis analysis;
  analysis.m = m;
  std::vector<double> w(static_cast<std::size_t>(m - 1));
  for (int j = 1; j < m; ++j) w[static_cast<std::size_t>(j - 1)] = kTwoPi * j / m;
  analysis.ordered_maximizers.push_back(w);
  analysis.orbit_length = factorial(m - 1);
  analysis.total_point_count = analysis.orbit_length;

  if (kernel.family() == KernelFamily::GapSum) {
    analysis.max_value = m * g(kTwoPi / m);
    double det = 0.0;
    try {
      det = det_neg_hessian_gapsum(g, m);
    } catch (const DegenerateHessian&) {
      det = 0.0;  // flagged later by validate_conditions (A6)
    }
    analysis.det_neg_hessian.push_back(det);
  } else {
    double sum = 0.0;
    for (int s = 1; s < m; ++s) sum += g(kTwoPi * s / m);
    analysis.max_value = 0.5 * m * sum;
    double det = 0.0;
    try {
      det = pairwise_hessian(g, m).det_neg_g;
    } catch (const DegenerateHessian&) {
      det = 0.0;
    }
    analysis.det_neg_hessian.push_back(det);
  }
  return analysis;
}

// Runtime validation of the extremum conditions: interior maximizers with
// distinct components (A4), nondegenerate Hessians (A6), negative
// definiteness via leading principal minors, and the diagonal-dominance
// shortcut for pairwise kernels.
struct ConditionReport {
  bool a4_interior = false;
  bool a6_nondegenerate = false;
  bool negative_definite = false;
  std::optional<bool> diagonally_dominant;
  std::vector<double> min_gaps;
  std::vector<std::string> notes;

  bool ok() const { return a4_interior && a6_nondegenerate && negative_definite; }
};

inline ConditionReport validate_conditions(const Kernel& kernel, const MaxAnalysis& analysis,
                                           double boundary_tol = 1e-6) {
  ConditionReport rep;
  rep.a4_interior = !analysis.ordered_maximizers.empty();
  for (const auto& w : analysis.ordered_maximizers) {
    const double gap = detail::min_gap(w);
    rep.min_gaps.push_back(gap);
    if (gap < boundary_tol) rep.a4_interior = false;
  }

  rep.a6_nondegenerate = !analysis.det_neg_hessian.empty();
  for (double det : analysis.det_neg_hessian)
    if (!std::isfinite(det) || std::abs(det) < 1e-12) rep.a6_nondegenerate = false;

  rep.negative_definite = true;
  for (const auto& w : analysis.ordered_maximizers) {
    try {
      const HessianReport h = hessian_fd_richardson(kernel, std::span<const double>(w));
      if (!h.negative_definite()) rep.negative_definite = false;
    } catch (const Error& e) {
      rep.negative_definite = false;
      rep.notes.emplace_back(e.what());
    }
  }

  if (kernel.family() == KernelFamily::PairwiseSum) {
    const int m = kernel.degree();
    bool all_neg = true, all_pos = true;
    try {
      for (int s = 1; s < m; ++s) {
        const double gpp = kernel.generator().second_derivative(kTwoPi * s / m);
        all_neg = all_neg && gpp < 0.0;
        all_pos = all_pos && gpp > 0.0;
      }
      rep.diagonally_dominant = all_neg || all_pos;
    } catch (const Error& e) {
      rep.notes.emplace_back(e.what());
    }
  }
  return rep;
}

}  // namespace umax
