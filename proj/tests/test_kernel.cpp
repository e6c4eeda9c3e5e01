#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "umax/kernel.hpp"
#include "umax/rng.hpp"

using namespace umax;
using std::numbers::pi;

namespace {

std::vector<double> random_thetas(Rng& rng, int m) {
  std::vector<double> t(static_cast<std::size_t>(m));
  for (auto& x : t) x = kTwoPi * rng.uniform01();
  return t;
}

}  // namespace

TEST_CASE("gap-sum perimeter kernel hits the regular-triangle value") {
  const Kernel k = Kernel::gap_sum(Generator::sin_half(), 3);
  const std::vector<double> beta{2 * pi / 3, 4 * pi / 3};
  CHECK(k.eval_angles(std::span<const double>(beta)) ==
        Catch::Approx(3 * std::sqrt(3.0)).epsilon(1e-14));
}

TEST_CASE("gap-sum on a degenerate pair") {
  const Kernel k = Kernel::gap_sum(Generator::sin_half(), 3);
  const std::vector<double> beta{pi, pi};
  // gaps (pi, 0, pi): 2 + 0 + 2
  CHECK(k.eval_angles(std::span<const double>(beta)) == Catch::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("pairwise distances equal the perimeter for m = 3") {
  const Kernel gap = Kernel::gap_sum(Generator::sin_half(), 3);
  const Kernel pair = Kernel::pairwise_sum(Generator::sin_half(), 3);
  const std::vector<double> regular{2 * pi / 3, 4 * pi / 3};
  CHECK(pair.eval_angles(std::span<const double>(regular)) ==
        Catch::Approx(3 * std::sqrt(3.0)).epsilon(1e-13));
  Rng rng(mix_seed(7, Stream::Probe, 0));
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<double> beta{kTwoPi * rng.uniform01(), kTwoPi * rng.uniform01()};
    const double a = gap.eval_angles(std::span<const double>(beta));
    const double b = pair.eval_angles(std::span<const double>(beta));
    CHECK(std::abs(a - b) <= 1e-10 * (1.0 + std::abs(a)));
  }
}

TEST_CASE("point evaluation matches the framed regular triangle") {
  const Kernel k = Kernel::gap_sum(Generator::sin_half(), 3);
  const std::vector<double> pts{0.3, 0.3 + 2 * pi / 3, 0.3 + 4 * pi / 3};
  CHECK(k.eval_points(std::span<const double>(pts)) ==
        Catch::Approx(3 * std::sqrt(3.0)).epsilon(1e-13));
  const std::vector<double> permuted{pts[2], pts[0], pts[1]};
  CHECK(k.eval_points(std::span<const double>(permuted)) ==
        Catch::Approx(k.eval_points(std::span<const double>(pts))).epsilon(1e-13));
}

TEST_CASE("inverse-distance kernel at the regular triangle") {
  const Kernel k = Kernel::pairwise_sum(Generator::csc_half(), 3);
  const std::vector<double> pts{0.0, 2 * pi / 3, 4 * pi / 3};
  CHECK(k.eval_points(std::span<const double>(pts)) ==
        Catch::Approx(std::sqrt(3.0)).epsilon(1e-13));
}

TEST_CASE("rotation and permutation invariance across families") {
  Rng rng(mix_seed(99, Stream::Probe, 1));
  const std::vector<Kernel> kernels{
      Kernel::gap_sum(Generator::sin_half(), 4),
      Kernel::gap_sum(Generator::sec_half(), 3),
      Kernel::pairwise_sum(Generator::csc_half(), 5),
      Kernel::pairwise_sum(Generator::pow_sin(0.5), 4),
  };
  for (const Kernel& k : kernels) {
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> pts = random_thetas(rng, k.degree());
      const double base = k.eval_points(std::span<const double>(pts));
      std::vector<double> rotated(pts);
      const double phi = kTwoPi * rng.uniform01();
      for (auto& x : rotated) x = reduce_angle(x + phi);
      const double rot = k.eval_points(std::span<const double>(rotated));
      std::vector<double> shuffled(pts);
      for (int i = k.degree() - 1; i > 0; --i)
        std::swap(shuffled[static_cast<std::size_t>(i)],
                  shuffled[static_cast<std::size_t>(rng.uniform01() * (i + 1))]);
      const double perm = k.eval_points(std::span<const double>(shuffled));
      if (std::isinf(base)) {
        CHECK(rot == base);
        CHECK(perm == base);
      } else {
        CHECK(std::abs(rot - base) <= 1e-10 * (1.0 + std::abs(base)));
        CHECK(std::abs(perm - base) <= 1e-10 * (1.0 + std::abs(base)));
      }
    }
  }
}

TEST_CASE("Jensen bound for strictly concave gap-sum generators") {
  Rng rng(mix_seed(123, Stream::Probe, 2));
  for (const auto& [gen, m] : std::vector<std::pair<Generator, int>>{
           {Generator::sin_half(), 3},
           {Generator::sin_half(), 5},
           {Generator::pow_sin(0.5), 4}}) {
    const Kernel k = Kernel::gap_sum(gen, m);
    const double bound = m * gen(kTwoPi / m);
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<double> beta(static_cast<std::size_t>(m - 1));
      for (auto& b : beta) b = kTwoPi * rng.uniform01();
      const double v = k.eval_angles(std::span<const double>(beta));
      REQUIRE(v <= bound + 1e-12);
      if (v >= bound - 1e-6) {
        // Near-equality forces the configuration to be near-regular.
        std::sort(beta.begin(), beta.end());
        for (int j = 1; j < m; ++j)
          CHECK(std::abs(beta[static_cast<std::size_t>(j - 1)] - kTwoPi * j / m) < 1e-2);
      }
    }
  }
}

TEST_CASE("custom kernels must pass the invariance probe") {
  // A legitimate rotation-invariant symmetric kernel: the gap-sum area.
  auto area = [](std::span<const double> beta) {
    std::vector<double> b(beta.begin(), beta.end());
    std::sort(b.begin(), b.end());
    double h = 0.5 * std::sin(b[0]);
    for (std::size_t i = 1; i < b.size(); ++i) h += 0.5 * std::sin(b[i] - b[i - 1]);
    h += 0.5 * std::sin(kTwoPi - b.back());
    return h;
  };
  CHECK_NOTHROW(Kernel::custom(area, 3));

  // Not symmetric in the points: weights the first central angle only.
  auto lopsided = [](std::span<const double> beta) { return beta[0]; };
  CHECK_THROWS_AS(Kernel::custom(lopsided, 3), ValidationError);
}

TEST_CASE("pairwise construction rejects uneven generators") {
  CHECK_THROWS_AS(Kernel::pairwise_sum(Generator::half_sin(), 3), ValidationError);
  CHECK_THROWS_AS(Kernel::pairwise_sum(Generator::sec_half(), 3), ValidationError);
}

TEST_CASE("degree validation") {
  CHECK_THROWS_AS(Kernel::gap_sum(Generator::sin_half(), 1), DegreeError);
  const Kernel k = Kernel::gap_sum(Generator::sin_half(), 3);
  const std::vector<double> wrong{1.0};
  CHECK_THROWS_AS(k.eval_angles(std::span<const double>(wrong)), DegreeError);
}

TEST_CASE("negated kernel flips every value") {
  const Kernel k = Kernel::pairwise_sum(Generator::csc_half(), 4);
  const Kernel neg = k.negated();
  Rng rng(mix_seed(5, Stream::Probe, 3));
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<double> pts = random_thetas(rng, 4);
    const double a = k.eval_points(std::span<const double>(pts));
    const double b = neg.eval_points(std::span<const double>(pts));
    if (std::isinf(a))
      CHECK(b == -a);
    else
      CHECK(b == Catch::Approx(-a).margin(1e-12));
  }
}
