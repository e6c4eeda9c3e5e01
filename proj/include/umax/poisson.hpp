#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "umax/density.hpp"
#include "umax/errors.hpp"
#include "umax/kernel.hpp"
#include "umax/limit_law.hpp"
#include "umax/rng.hpp"
#include "umax/simulate.hpp"
#include "umax/subset_max.hpp"

namespace umax {

struct UndefinedTau : Error {
  explicit UndefinedTau(const std::string& what) : Error(ErrorKind::Numeric, "undefined-tau", what) {}
};

namespace detail {

// Binomial coefficient in 128-bit integer arithmetic; exact at every step
// (the running product after multiplying by n-k+i is divisible by i).
// Returns false on 128-bit overflow.
inline bool binomial_u128(std::int64_t n, std::int64_t k, unsigned __int128& out) {
  if (k < 0 || k > n) {
    out = 0;
    return true;
  }
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  constexpr unsigned __int128 kMax = ~static_cast<unsigned __int128>(0);
  for (std::int64_t i = 1; i <= k; ++i) {
    const auto f = static_cast<unsigned __int128>(n - k + i);
    if (r > kMax / f) return false;
    r = r * f / static_cast<unsigned __int128>(i);
  }
  out = r;
  return true;
}

inline double binomial_lgamma(std::int64_t n, std::int64_t k) {
  return std::exp(std::lgamma(static_cast<double>(n) + 1.0) -
                  std::lgamma(static_cast<double>(k) + 1.0) -
                  std::lgamma(static_cast<double>(n - k) + 1.0));
}

// C(n1, k) - C(n2, k), subtracted in integer arithmetic before converting so
// the huge-minus-huge difference is exact.
inline double binomial_difference(std::int64_t n1, std::int64_t n2, std::int64_t k) {
  unsigned __int128 a = 0, b = 0;
  if (binomial_u128(n1, k, a) && binomial_u128(n2, k, b)) return static_cast<double>(a - b);
  return binomial_lgamma(n1, k) - (k <= n2 ? binomial_lgamma(n2, k) : 0.0);
}

}  // namespace detail

// Exact binomial coefficient as a double; falls back to an lgamma evaluation
// when the value overflows 128-bit integers (documented; unreachable for any
// n this library simulates).
inline double binomial(std::int64_t n, std::int64_t k) {
  unsigned __int128 r = 0;
  if (detail::binomial_u128(n, k, r)) return static_cast<double>(r);
  return detail::binomial_lgamma(n, k);
}

struct TauEstimate {
  double tau = 0.0;
  double std_err = 0.0;
  double joint_freq = 0.0;
  double marginal_freq = 0.0;  // the p estimate the ratio is normalized by
  std::int64_t joint_hits = 0;
  std::int64_t marginal_hits = 0;
  std::int64_t samples = 0;
};

// Dependence ratio tau_z(r) = P{ f(xi_1..xi_m) > z, f(xi_{1+m-r}..xi_{2m-r}) > z } / p_z
// by direct joint sampling: each trial draws 2m - r fresh points, the two
// kernel arguments share exactly r of them. The ratio is normalized by the
// marginal frequency of the first event from the same trials.
inline TauEstimate estimate_tau(const Kernel& kernel, const Density& density, double z, int r,
                                std::int64_t samples, std::uint64_t seed, int threads = 1) {
  const int m = kernel.degree();
  if (r < 1 || r > m - 1) throw ConfigError("tau overlap r must lie in [1, m-1]");
  if (samples < 10'000) throw ConfigError("tau estimation needs at least 1e4 samples");
  const DensityTable table(density);
  constexpr std::int64_t kBlock = 65536;
  const std::int64_t blocks = (samples + kBlock - 1) / kBlock;
  std::vector<std::int64_t> joint(static_cast<std::size_t>(blocks), 0);
  std::vector<std::int64_t> marginal(static_cast<std::size_t>(blocks), 0);

  detail::parallel_indexed(blocks, threads, [&](std::int64_t b) {
    Rng rng(mix_seed(seed, Stream::Tau, static_cast<std::uint64_t>(b)));
    const std::int64_t lo = b * kBlock;
    const std::int64_t hi = std::min(samples, lo + kBlock);
    const int total = 2 * m - r;
    std::vector<double> pts(static_cast<std::size_t>(total));
    std::int64_t j = 0, a = 0;
    for (std::int64_t i = lo; i < hi; ++i) {
      for (auto& p : pts) p = table.sample(rng);
      const bool first =
          kernel.eval_points(std::span<const double>(pts.data(), static_cast<std::size_t>(m))) > z;
      if (first) {
        ++a;
        const bool second =
            kernel.eval_points(std::span<const double>(pts.data() + (m - r),
                                                       static_cast<std::size_t>(m))) > z;
        if (second) ++j;
      }
    }
    joint[static_cast<std::size_t>(b)] = j;
    marginal[static_cast<std::size_t>(b)] = a;
  });

  TauEstimate est;
  est.samples = samples;
  for (std::size_t b = 0; b < joint.size(); ++b) {
    est.joint_hits += joint[b];
    est.marginal_hits += marginal[b];
  }
  if (est.marginal_hits == 0)
    throw UndefinedTau("tau undefined: the marginal exceedance estimate is zero");
  est.joint_freq = static_cast<double>(est.joint_hits) / static_cast<double>(samples);
  est.marginal_freq = static_cast<double>(est.marginal_hits) / static_cast<double>(samples);
  est.tau = static_cast<double>(est.joint_hits) / static_cast<double>(est.marginal_hits);
  est.std_err = std::sqrt(static_cast<double>(std::max<std::int64_t>(est.joint_hits, 1))) /
                static_cast<double>(est.marginal_hits);
  return est;
}

// Right-hand side of the Poisson approximation bound
//   (1 - e^{-lambda}) [ p (C(n,m) - C(n-m,m)) + sum_r C(m,r) C(n-m,m-r) tau(r) ]
// with lambda = C(n,m) p. Binomials are exact; the big-binomial difference is
// formed in integer arithmetic before multiplying by the tiny p, avoiding
// catastrophic cancellation.
inline double bound_rhs(std::int64_t n, int m, double p_hat, std::span<const double> taus) {
  if (m < 1 || n < m) throw ConfigError("bound requires n >= m >= 1");
  if (static_cast<int>(taus.size()) != m - 1)
    throw ConfigError("bound needs tau estimates for r = 1..m-1");
  if (!(p_hat >= 0.0)) throw ConfigError("p estimate must be nonnegative");
  const double lambda = binomial(n, m) * p_hat;
  double bracket = p_hat * detail::binomial_difference(n, n - m, m);
  for (int r = 1; r <= m - 1; ++r) {
    const double tau = taus[static_cast<std::size_t>(r - 1)];
    if (!(tau >= 0.0)) throw ConfigError("tau estimates must be nonnegative");
    bracket += binomial(m, r) * binomial(n - m, m - r) * tau;
  }
  return -std::expm1(-lambda) * bracket;
}

struct BoundReport {
  std::int64_t n = 0;
  int m = 0;
  double z = 0.0;
  TailEstimate p;
  std::vector<TauEstimate> taus;  // r = 1..m-1
  double lambda = 0.0;
  double lambda_se = 0.0;
  double rhs = 0.0;
};

inline BoundReport poisson_bound_report(const Kernel& kernel, const Density& density, double z,
                                        std::int64_t n, std::int64_t p_samples,
                                        std::int64_t tau_samples, std::uint64_t seed,
                                        int threads = 1) {
  const int m = kernel.degree();
  if (n < m) throw ConfigError("bound requires n >= m");
  BoundReport rep;
  rep.n = n;
  rep.m = m;
  rep.z = z;
  rep.p = tail_probability(kernel, density, z, p_samples, seed, threads);
  std::vector<double> tau_values;
  for (int r = 1; r <= m - 1; ++r) {
    TauEstimate tau;
    if (rep.p.hits == 0) {
      // No exceedances at all: report tau = 0 with an undefined-ratio note
      // kept implicit; the bound is then driven by the p term alone.
      tau.samples = tau_samples;
    } else {
      tau = estimate_tau(kernel, density, z, r,
                         tau_samples, mix_seed(seed, Stream::Tau, static_cast<std::uint64_t>(r)),
                         threads);
    }
    if (tau.tau < 0.0 || (rep.p.p_hat > 0.0 && tau.tau > 1.0 / rep.p.p_hat + 1e-9))
      throw ConsistencyError("tau estimate escaped its [0, 1/p] range");
    tau_values.push_back(tau.tau);
    rep.taus.push_back(tau);
  }
  const double c_nm = binomial(n, m);
  rep.lambda = c_nm * rep.p.p_hat;
  rep.lambda_se = c_nm * rep.p.std_err;
  rep.rhs = bound_rhs(n, m, rep.p.p_hat, std::span<const double>(tau_values));
  return rep;
}

// One row per n of the Silverman-Brown condition diagnostics at the scaling
// z_n(t) = M -+ t n^{-2m/(m-1)}: lambda_hat should settle near
// c t^{(m-1)/2}, and the scaled products n^{2m-r} p tau(r) should decrease.
struct SilvermanBrownRow {
  std::int64_t n = 0;
  double z = 0.0;
  TailEstimate p;
  double lambda_hat = 0.0;
  double lambda_se = 0.0;
  std::vector<double> tau;       // r = 1..m-1 (0 when no exceedance was seen)
  std::vector<double> tau_se;
  std::vector<double> scaled;    // n^{2m-r} p tau(r)
};

inline std::vector<SilvermanBrownRow> silverman_brown_check(
    const Kernel& kernel, const Density& density, Mode mode, double extreme_value, double t,
    std::span<const std::int64_t> n_grid, std::int64_t samples, std::uint64_t seed,
    int threads = 1) {
  if (t < 0.0) throw ConfigError("silverman-brown scale t must be nonnegative");
  const int m = kernel.degree();
  const Kernel working = (mode == Mode::UMin) ? kernel.negated() : kernel;
  const double working_max = (mode == Mode::UMin) ? -extreme_value : extreme_value;
  std::vector<SilvermanBrownRow> rows;
  for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
    const std::int64_t n = n_grid[gi];
    if (n < m) throw ConfigError("every n in the grid must be >= m");
    const double eps = t * std::pow(static_cast<double>(n), -2.0 * m / (m - 1.0));
    const double z_working = working_max - eps;
    SilvermanBrownRow row;
    row.n = n;
    row.z = (mode == Mode::UMin) ? -z_working : z_working;
    row.p = tail_probability(working, density, z_working, samples,
                             mix_seed(seed, Stream::BoundTrial, static_cast<std::uint64_t>(gi)),
                             threads);
    const double c_nm = binomial(n, m);
    row.lambda_hat = c_nm * row.p.p_hat;
    row.lambda_se = c_nm * row.p.std_err;
    for (int r = 1; r <= m - 1; ++r) {
      double tau = 0.0, se = 0.0;
      if (row.p.hits > 0) {
        const TauEstimate est = estimate_tau(
            working, density, z_working, r, samples,
            mix_seed(seed, Stream::Tau, gi * 64 + static_cast<std::uint64_t>(r)), threads);
        tau = est.tau;
        se = est.std_err;
      }
      row.tau.push_back(tau);
      row.tau_se.push_back(se);
      row.scaled.push_back(std::pow(static_cast<double>(n), 2.0 * m - r) * row.p.p_hat * tau);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace umax
