#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "umax/angles.hpp"
#include "umax/errors.hpp"
#include "umax/kernel.hpp"

namespace umax {

enum class SubsetEvaluator { BruteForce, GapDp, Auto };

// C(n, m) with an overflow guard; enumeration loops rely on this fitting a
// signed 64-bit counter.
inline std::int64_t subset_count_guarded(std::int64_t n, int m) {
  if (m < 0 || m > n) return 0;
  unsigned __int128 r = 1;
  const std::int64_t k = std::min<std::int64_t>(m, n - m);
  for (std::int64_t i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned __int128>(n - k + i);
    r /= static_cast<unsigned __int128>(i);
    if (r > static_cast<unsigned __int128>(std::numeric_limits<std::int64_t>::max()))
      throw ConfigError("C(n, m) exceeds the 63-bit subset counter");
  }
  return static_cast<std::int64_t>(r);
}

namespace detail {

// Precomputed generator values over point pairs of the sorted sample. Both
// the brute-force and DP paths read these same tables (and sum gap terms in
// the same left-to-right order), so their results agree bitwise.
struct GapTables {
  int n = 0;
  std::vector<double> sorted;
  std::vector<double> gap;   // [i*n + j] = g(theta_j - theta_i), j > i
  std::vector<double> wrap;  // [i*n + j] = g(2pi - (theta_j - theta_i)), j > i

  GapTables(const Kernel& kernel, std::span<const double> thetas)
      : n(static_cast<int>(thetas.size())), sorted(thetas.begin(), thetas.end()) {
    for (double& t : sorted) t = reduce_angle(t);
    std::sort(sorted.begin(), sorted.end());
    const Generator& g = kernel.generator();
    gap.assign(static_cast<std::size_t>(n) * n, 0.0);
    wrap.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double d = sorted[static_cast<std::size_t>(j)] - sorted[static_cast<std::size_t>(i)];
        gap[static_cast<std::size_t>(i) * n + j] = g(d);
        wrap[static_cast<std::size_t>(i) * n + j] = g(kTwoPi - d);
      }
  }
};

// Pairwise generator values; direction does not matter (even generator).
struct PairTables {
  int n = 0;
  std::vector<double> sorted;
  std::vector<double> pair;  // [i*n + j] = g(theta_j - theta_i), j > i

  PairTables(const Kernel& kernel, std::span<const double> thetas)
      : n(static_cast<int>(thetas.size())), sorted(thetas.begin(), thetas.end()) {
    for (double& t : sorted) t = reduce_angle(t);
    std::sort(sorted.begin(), sorted.end());
    const Generator& g = kernel.generator();
    pair.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        pair[static_cast<std::size_t>(i) * n + j] =
            g(sorted[static_cast<std::size_t>(j)] - sorted[static_cast<std::size_t>(i)]);
  }
};

// Lexicographic combination odometer; returns false when exhausted.
inline bool next_combination(std::vector<int>& idx, int n) {
  const int m = static_cast<int>(idx.size());
  int k = m - 1;
  while (k >= 0 && idx[static_cast<std::size_t>(k)] == n - m + k) --k;
  if (k < 0) return false;
  ++idx[static_cast<std::size_t>(k)];
  for (int t = k + 1; t < m; ++t)
    idx[static_cast<std::size_t>(t)] = idx[static_cast<std::size_t>(t - 1)] + 1;
  return true;
}

inline double brute_gapsum(const Kernel& kernel, std::span<const double> thetas) {
  const int n = static_cast<int>(thetas.size());
  const int m = kernel.degree();
  const GapTables tab(kernel, thetas);
  std::vector<int> idx(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) idx[static_cast<std::size_t>(i)] = i;
  std::vector<double> ps(static_cast<std::size_t>(m), 0.0);  // ps[k]: gap sum up to point k
  double best = -std::numeric_limits<double>::infinity();
  int dirty = 1;  // recompute partial sums from this position
  while (true) {
    for (int k = std::max(dirty, 1); k < m; ++k)
      ps[static_cast<std::size_t>(k)] =
          ps[static_cast<std::size_t>(k - 1)] +
          tab.gap[static_cast<std::size_t>(idx[static_cast<std::size_t>(k - 1)]) * n +
                  idx[static_cast<std::size_t>(k)]];
    const double value =
        ps[static_cast<std::size_t>(m - 1)] +
        tab.wrap[static_cast<std::size_t>(idx[0]) * n + idx[static_cast<std::size_t>(m - 1)]];
    if (value > best) best = value;
    // Find the bump position before mutating so partial sums can be reused.
    int k = m - 1;
    while (k >= 0 && idx[static_cast<std::size_t>(k)] == n - m + k) --k;
    if (k < 0) break;
    ++idx[static_cast<std::size_t>(k)];
    for (int t = k + 1; t < m; ++t)
      idx[static_cast<std::size_t>(t)] = idx[static_cast<std::size_t>(t - 1)] + 1;
    dirty = std::max(k, 1);
  }
  return best;
}

inline double brute_pairwise(const Kernel& kernel, std::span<const double> thetas) {
  const int n = static_cast<int>(thetas.size());
  const int m = kernel.degree();
  const PairTables tab(kernel, thetas);
  std::vector<int> idx(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) idx[static_cast<std::size_t>(i)] = i;
  std::vector<double> ps(static_cast<std::size_t>(m), 0.0);  // ps[k]: pairs within idx[0..k]
  double best = -std::numeric_limits<double>::infinity();
  int dirty = 1;
  while (true) {
    for (int k = std::max(dirty, 1); k < m; ++k) {
      double s = ps[static_cast<std::size_t>(k - 1)];
      for (int a = 0; a < k; ++a)
        s += tab.pair[static_cast<std::size_t>(idx[static_cast<std::size_t>(a)]) * n +
                      idx[static_cast<std::size_t>(k)]];
      ps[static_cast<std::size_t>(k)] = s;
    }
    const double value = ps[static_cast<std::size_t>(m - 1)];
    if (value > best) best = value;
    int k = m - 1;
    while (k >= 0 && idx[static_cast<std::size_t>(k)] == n - m + k) --k;
    if (k < 0) break;
    ++idx[static_cast<std::size_t>(k)];
    for (int t = k + 1; t < m; ++t)
      idx[static_cast<std::size_t>(t)] = idx[static_cast<std::size_t>(t - 1)] + 1;
    dirty = std::max(k, 1);
  }
  return best;
}

inline double brute_custom(const Kernel& kernel, std::span<const double> thetas) {
  const int n = static_cast<int>(thetas.size());
  const int m = kernel.degree();
  std::vector<double> sorted(thetas.begin(), thetas.end());
  for (double& t : sorted) t = reduce_angle(t);
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> idx(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) idx[static_cast<std::size_t>(i)] = i;
  std::vector<double> subset(static_cast<std::size_t>(m));
  double best = -std::numeric_limits<double>::infinity();
  do {
    for (int i = 0; i < m; ++i)
      subset[static_cast<std::size_t>(i)] = sorted[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
    const double value = kernel.eval_points(std::span<const double>(subset));
    if (value > best) best = value;
  } while (next_combination(idx, n));
  return best;
}

}  // namespace detail

// Exact maximum of the kernel over all C(n, m) point subsets, enumerated in
// lexicographic index order over the sorted sample (the kernel is symmetric,
// so sorting does not change the subset values).
inline double umax_bruteforce(const Kernel& kernel, std::span<const double> thetas) {
  const int m = kernel.degree();
  if (static_cast<int>(thetas.size()) < m) throw DegreeError("need at least m sample points");
  subset_count_guarded(static_cast<std::int64_t>(thetas.size()), m);
  switch (kernel.family()) {
    case KernelFamily::GapSum:
      return detail::brute_gapsum(kernel, thetas);
    case KernelFamily::PairwiseSum:
      return detail::brute_pairwise(kernel, thetas);
    case KernelFamily::Custom:
      return detail::brute_custom(kernel, thetas);
  }
  return 0.0;
}

// Fast path for gap-sum kernels. On the sorted sample, any m-subset's value
// is the cyclic sum of g over consecutive gaps, so the maximum decomposes
// into chains: fix the anchor (lowest selected index), run a DP over
// (count, last selected), close with the wrap term. O(n^2 m) per anchor,
// O(n^3 m) in total, which beats C(n, m) enumeration once m grows. Partial
// sums associate exactly as the brute-force loop's, so results match it
// bitwise, not merely within tolerance.
inline double umax_gapsum_dp(const Kernel& kernel, std::span<const double> thetas) {
  if (kernel.family() != KernelFamily::GapSum)
    throw FamilyError("the gap DP evaluator requires a gap-sum kernel");
  const int n = static_cast<int>(thetas.size());
  const int m = kernel.degree();
  if (n < m) throw DegreeError("need at least m sample points");
  const detail::GapTables tab(kernel, thetas);
  const double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<double> prev(static_cast<std::size_t>(n)), cur(static_cast<std::size_t>(n));
  double best = neg_inf;
  for (int a = 0; a + m <= n; ++a) {
    // prev[j]: best (k+1)-point chain a = j_0 < ... < j_k = j, k edges so far.
    for (int j = 0; j < n; ++j)
      prev[static_cast<std::size_t>(j)] =
          (j > a) ? tab.gap[static_cast<std::size_t>(a) * n + j] : neg_inf;
    for (int k = 2; k <= m - 1; ++k) {
      for (int j = 0; j < n; ++j) cur[static_cast<std::size_t>(j)] = neg_inf;
      for (int j = a + k; j < n; ++j) {
        double v = neg_inf;
        for (int i = a + k - 1; i < j; ++i) {
          const double c = prev[static_cast<std::size_t>(i)] +
                           tab.gap[static_cast<std::size_t>(i) * n + j];
          if (c > v) v = c;
        }
        cur[static_cast<std::size_t>(j)] = v;
      }
      std::swap(prev, cur);
    }
    for (int j = a + m - 1; j < n; ++j) {
      const double v =
          prev[static_cast<std::size_t>(j)] + tab.wrap[static_cast<std::size_t>(a) * n + j];
      if (v > best) best = v;
    }
  }
  return best;
}

// Evaluator dispatch: the DP takes over for gap-sum kernels once the subset
// count passes 10^6 (m = 3 stays brute-force up to n ~ 180; larger degrees
// switch early).
inline double umax_eval(const Kernel& kernel, std::span<const double> thetas,
                        SubsetEvaluator evaluator) {
  switch (evaluator) {
    case SubsetEvaluator::BruteForce:
      return umax_bruteforce(kernel, thetas);
    case SubsetEvaluator::GapDp:
      return umax_gapsum_dp(kernel, thetas);
    case SubsetEvaluator::Auto: {
      if (kernel.family() == KernelFamily::GapSum &&
          subset_count_guarded(static_cast<std::int64_t>(thetas.size()), kernel.degree()) >
              1'000'000)
        return umax_gapsum_dp(kernel, thetas);
      return umax_bruteforce(kernel, thetas);
    }
  }
  return 0.0;
}

}  // namespace umax
