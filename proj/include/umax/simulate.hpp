#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

#include "umax/density.hpp"
#include "umax/empirical.hpp"
#include "umax/errors.hpp"
#include "umax/kernel.hpp"
#include "umax/limit_law.hpp"
#include "umax/rng.hpp"
#include "umax/subset_max.hpp"

namespace umax {

struct SimulationConfig {
  Kernel kernel;
  Density density;
  std::int64_t n = 0;
  int replicates = 0;
  std::uint64_t master_seed = 0;
  Mode mode = Mode::UMax;
  SubsetEvaluator evaluator = SubsetEvaluator::Auto;
  int threads = 1;
};

struct HnSummary {
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;
};

struct SimulationResult {
  std::vector<double> rescaled;  // by replicate index
  EmpiricalCDF ecdf;
  double ks_distance = 0.0;
  HnSummary hn;
  double elapsed_seconds = 0.0;  // wall time; never serialized (not deterministic)
};

namespace detail {

// Runs indices [0, count) across workers with per-index seeding, so results
// are identical for any thread count. The first exception wins.
template <typename Fn>
void parallel_indexed(std::int64_t count, int threads, Fn&& fn) {
  threads = std::max(1, threads);
  if (threads == 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (int t = 0; t < threads; ++t) {
    const std::int64_t lo = count * t / threads;
    const std::int64_t hi = count * (t + 1) / threads;
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::int64_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

// Monte Carlo distribution of the rescaled extreme statistic. Replicate j is
// seeded from (master_seed, j), so any scheduling of the replicates produces
// bitwise-identical output.
inline SimulationResult run_replicates(const SimulationConfig& cfg, const LimitLaw& law,
                                       double extreme_value) {
  const int m = cfg.kernel.degree();
  if (cfg.n < m) throw ConfigError("sample size n must be at least the kernel degree m");
  if (cfg.replicates < 1) throw ConfigError("replicates must be >= 1");
  if (law.mode != cfg.mode) throw ConfigError("law mode does not match simulation mode");
  const auto start = std::chrono::steady_clock::now();

  const Kernel working = (cfg.mode == Mode::UMin) ? cfg.kernel.negated() : cfg.kernel;
  const DensityTable table(cfg.density);
  std::vector<double> rescaled(static_cast<std::size_t>(cfg.replicates));
  std::vector<double> hn(static_cast<std::size_t>(cfg.replicates));

  detail::parallel_indexed(cfg.replicates, cfg.threads, [&](std::int64_t j) {
    Rng rng(mix_seed(cfg.master_seed, Stream::Replicate, static_cast<std::uint64_t>(j)));
    std::vector<double> thetas(static_cast<std::size_t>(cfg.n));
    for (auto& t : thetas) t = table.sample(rng);
    const double working_max = umax_eval(working, std::span<const double>(thetas), cfg.evaluator);
    const double h = (cfg.mode == Mode::UMin) ? -working_max : working_max;
    hn[static_cast<std::size_t>(j)] = h;
    rescaled[static_cast<std::size_t>(j)] = rescale(h, extreme_value, cfg.n, law);
  });

  SimulationResult result;
  result.rescaled = rescaled;
  result.ecdf = EmpiricalCDF(std::move(rescaled));
  result.ks_distance = ks_distance(result.ecdf, law);
  std::vector<double> sorted_hn(hn);
  std::sort(sorted_hn.begin(), sorted_hn.end());
  result.hn.min = sorted_hn.front();
  result.hn.max = sorted_hn.back();
  const std::size_t half = sorted_hn.size() / 2;
  result.hn.median = (sorted_hn.size() % 2 == 1)
                         ? sorted_hn[half]
                         : 0.5 * (sorted_hn[half - 1] + sorted_hn[half]);
  result.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

struct TailEstimate {
  double p_hat = 0.0;
  double std_err = 0.0;
  std::int64_t hits = 0;
  std::int64_t samples = 0;
};

// Monte Carlo estimate of p_z = P{ f(xi_1, ..., xi_m) > z } with its
// binomial standard error. Trials are grouped into fixed blocks seeded by
// block index, keeping the count independent of the thread schedule.
inline TailEstimate tail_probability(const Kernel& kernel, const Density& density, double z,
                                     std::int64_t samples, std::uint64_t seed, int threads = 1) {
  if (samples < 10'000) throw ConfigError("tail probability needs at least 1e4 samples");
  const int m = kernel.degree();
  const DensityTable table(density);
  constexpr std::int64_t kBlock = 65536;
  const std::int64_t blocks = (samples + kBlock - 1) / kBlock;
  std::vector<std::int64_t> hits(static_cast<std::size_t>(blocks), 0);

  detail::parallel_indexed(blocks, threads, [&](std::int64_t b) {
    Rng rng(mix_seed(seed, Stream::Tail, static_cast<std::uint64_t>(b)));
    const std::int64_t lo = b * kBlock;
    const std::int64_t hi = std::min(samples, lo + kBlock);
    std::vector<double> pts(static_cast<std::size_t>(m));
    std::int64_t count = 0;
    for (std::int64_t i = lo; i < hi; ++i) {
      for (auto& p : pts) p = table.sample(rng);
      if (kernel.eval_points(std::span<const double>(pts)) > z) ++count;
    }
    hits[static_cast<std::size_t>(b)] = count;
  });

  TailEstimate est;
  est.samples = samples;
  for (std::int64_t h : hits) est.hits += h;
  est.p_hat = static_cast<double>(est.hits) / static_cast<double>(samples);
  est.std_err = std::sqrt(std::max(est.p_hat * (1.0 - est.p_hat), 0.0) /
                          static_cast<double>(samples));
  return est;
}

}  // namespace umax
