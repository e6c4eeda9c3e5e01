#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "umax/generator.hpp"

using namespace umax;
using std::numbers::pi;

namespace {

// Independent second-derivative oracle: fourth-order central differences on
// the generator values themselves.
double fd_second(const Generator& g, double x, double h = 1e-4) {
  return (-g(x + 2 * h) + 16 * g(x + h) - 30 * g(x) + 16 * g(x - h) - g(x - 2 * h)) /
         (12 * h * h);
}

}  // namespace

TEST_CASE("sin-half values and curvature") {
  const Generator g = Generator::sin_half();
  CHECK(g(pi) == Catch::Approx(2.0));
  CHECK(g(2 * pi / 3) == Catch::Approx(std::sqrt(3.0)));
  // g''(x) = -sin(x/2)/2 analytically
  CHECK(g.second_derivative(2 * pi / 3) == Catch::Approx(-std::sqrt(3.0) / 4).epsilon(1e-14));
  CHECK(g.second_derivative(2 * pi / 3) == Catch::Approx(fd_second(g, 2 * pi / 3)).epsilon(1e-7));
}

TEST_CASE("half-sin curvature") {
  const Generator g = Generator::half_sin();
  CHECK(g.second_derivative(pi / 2) == Catch::Approx(-0.5).epsilon(1e-14));
  CHECK(g.second_derivative(pi / 2) == Catch::Approx(fd_second(g, pi / 2)).epsilon(1e-7));
}

TEST_CASE("sec-half infinity sentinel and curvature") {
  const Generator g = Generator::sec_half();
  CHECK(g(0.0) == Catch::Approx(1.0));
  CHECK(std::isinf(g(pi)));
  CHECK(std::isinf(g(4.0)));
  // g''(x) = (1 + sin^2(x/2)) / (4 cos^3(x/2))
  const double x = 2 * pi / 3;
  const double expected = (1.0 + 0.75) / (4.0 * std::pow(0.5, 3));
  CHECK(g.second_derivative(x) == Catch::Approx(expected).epsilon(1e-13));
  CHECK(g.second_derivative(x) == Catch::Approx(fd_second(g, x)).epsilon(1e-7));
  CHECK_THROWS_AS(g.second_derivative(pi), DomainError);
}

TEST_CASE("csc-half curvature matches the closed form") {
  const Generator g = Generator::csc_half();
  CHECK(g.second_derivative(pi) == Catch::Approx(0.125).epsilon(1e-14));
  const double x = 2 * pi / 3;
  const double s = std::sin(x / 2);
  CHECK(g.second_derivative(x) ==
        Catch::Approx((2 - s * s) / (8 * s * s * s)).epsilon(1e-14));
  CHECK(g.second_derivative(x) == Catch::Approx(fd_second(g, x)).margin(1e-6));
  CHECK(std::isinf(g(0.0)));
}

TEST_CASE("pow-sin reduces to sin-half at y = 1 and matches FD elsewhere") {
  const Generator base = Generator::sin_half();
  const Generator y1 = Generator::pow_sin(1.0);
  for (double x : {0.3, 1.0, 2.0, pi, 5.0}) {
    CHECK(y1(x) == Catch::Approx(base(x)).epsilon(1e-14));
    CHECK(y1.second_derivative(x) == Catch::Approx(base.second_derivative(x)).margin(1e-12));
  }
  for (double y : {0.5, 1.5, 2.0}) {
    const Generator g = Generator::pow_sin(y);
    for (double x : {0.5, 1.5, 2.5, 4.0})
      CHECK(g.second_derivative(x) == Catch::Approx(fd_second(g, x)).margin(1e-6));
  }
}

TEST_CASE("alexander-stolarsky generator, exponential chord weight") {
  // r(t) = exp(-t): a = 1, b = 0, c = 0, so g(x) = exp(-2 sin(x/2)).
  const Generator g = Generator::alexander_stolarsky(1.0, 0.0, 0);
  for (double x : {0.4, 1.2, 2.0, 3.0, 5.0}) {
    CHECK(g(x) == Catch::Approx(std::exp(-2.0 * std::sin(x / 2))).epsilon(1e-14));
    CHECK(g.second_derivative(x) == Catch::Approx(fd_second(g, x)).margin(1e-6));
  }
  CHECK(g.is_even());
}

TEST_CASE("alexander-stolarsky generator with a log factor") {
  const Generator g = Generator::alexander_stolarsky(0.5, -1.0, 2);
  for (double x : {0.8, 1.5, 2.5, 4.0})
    CHECK(g.second_derivative(x) == Catch::Approx(fd_second(g, x)).epsilon(1e-5));
  CHECK_THROWS_AS(Generator::alexander_stolarsky(1.0, 0.0, -1), ConfigError);
}

TEST_CASE("tabulated generator approximates the tabulated function") {
  std::vector<double> values(513);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double x = kTwoPi * static_cast<double>(i) / (values.size() - 1);
    values[i] = 2.0 * std::sin(0.5 * x);
  }
  const Generator g = Generator::tabulated(values);
  const Generator exact = Generator::sin_half();
  for (double x : {0.7, 1.9, pi, 4.4})
    CHECK(g(x) == Catch::Approx(exact(x)).margin(1e-8));
  CHECK(g.second_derivative(2 * pi / 3) ==
        Catch::Approx(-std::sqrt(3.0) / 4).margin(2e-3));
}

TEST_CASE("negated generator flips value and curvature") {
  const Generator g = Generator::sec_half().negated_copy();
  CHECK(g(0.0) == Catch::Approx(-1.0));
  CHECK(g(5.0) == -std::numeric_limits<double>::infinity());
  CHECK(g.second_derivative(1.0) < 0.0);
}

TEST_CASE("evenness probe accepts even families and rejects half-sin") {
  CHECK(Generator::sin_half().is_even());
  CHECK(Generator::csc_half().is_even());
  CHECK(Generator::pow_sin(1.5).is_even());
  CHECK_FALSE(Generator::half_sin().is_even());
  CHECK_FALSE(Generator::sec_half().is_even());
}
