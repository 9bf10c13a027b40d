#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qsense/errors.hpp"
#include "qsense/quadrature.hpp"

using namespace qsense;

TEST_CASE("small gauss-hermite rules match closed forms") {
  // n = 1: node 0, weight sqrt(pi)
  auto r1 = gauss_hermite(1);
  CHECK(r1.nodes(0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(r1.weights(0) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-14));

  // n = 2: nodes +-1/sqrt(2), weights sqrt(pi)/2
  auto r2 = gauss_hermite(2);
  CHECK(r2.nodes(0) == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-13));
  CHECK(r2.nodes(1) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-13));
  CHECK(r2.weights(0) == doctest::Approx(std::sqrt(M_PI) / 2.0).epsilon(1e-13));

  // n = 3: nodes 0, +-sqrt(3/2); weights 2sqrt(pi)/3, sqrt(pi)/6
  auto r3 = gauss_hermite(3);
  CHECK(r3.nodes(1) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(r3.nodes(2) == doctest::Approx(std::sqrt(1.5)).epsilon(1e-13));
  CHECK(r3.weights(1) == doctest::Approx(2.0 * std::sqrt(M_PI) / 3.0).epsilon(1e-13));
  CHECK(r3.weights(2) == doctest::Approx(std::sqrt(M_PI) / 6.0).epsilon(1e-13));
}

TEST_CASE("gauss-hermite integrates monomials exactly up to degree 2n-1") {
  // Gaussian moments: int x^{2k} e^{-x^2} dx = sqrt(pi) (2k-1)!! / 2^k
  for (int n : {4, 7, 12, 40}) {
    auto rule = gauss_hermite(n);
    double moment = std::sqrt(M_PI);
    for (int k = 0; 2 * k + 1 < 2 * n && k <= 8; ++k) {
      if (k > 0) moment *= (2.0 * k - 1.0) / 2.0;
      double acc = 0.0;
      for (int i = 0; i < n; ++i)
        acc += rule.weights(i) * std::pow(rule.nodes(i), 2 * k);
      CHECK(acc == doctest::Approx(moment).epsilon(1e-11));
    }
  }
}

TEST_CASE("uniform simpson integrates cubics exactly") {
  const auto f = [](double x) { return 1.0 + x - 2.0 * x * x + 0.5 * x * x * x; };
  const int n = 11;
  Eigen::VectorXd grid = linspace(-1.0, 2.0, n);
  Eigen::VectorXd values(n);
  for (int i = 0; i < n; ++i) values(i) = f(grid(i));
  // exact: x + x^2/2 - 2x^3/3 + x^4/8 over [-1, 2]
  const auto F = [](double x) {
    return x + x * x / 2.0 - 2.0 * x * x * x / 3.0 + std::pow(x, 4) / 8.0;
  };
  CHECK(simpson_uniform(values, grid(1) - grid(0)) ==
        doctest::Approx(F(2.0) - F(-1.0)).epsilon(1e-13));
}

TEST_CASE("non-uniform simpson weights handle irregular grids") {
  Eigen::VectorXd grid(7);
  grid << -2.0, -1.2, -0.9, 0.0, 0.4, 1.5, 2.1;
  Eigen::VectorXd w = simpson_weights(grid);
  const auto f = [](double x) { return 0.3 - x + 2.0 * x * x; };
  const auto F = [](double x) { return 0.3 * x - x * x / 2.0 + 2.0 * x * x * x / 3.0; };
  double acc = 0.0;
  for (int i = 0; i < grid.size(); ++i) acc += w(i) * f(grid(i));
  // quadratics are integrated exactly by every pairwise panel
  CHECK(acc == doctest::Approx(F(2.1) - F(-2.0)).epsilon(1e-12));

  CHECK_THROWS_AS(simpson_weights(linspace(0.0, 1.0, 2)), InsufficientDataError);
}

TEST_CASE("odd interval counts close with a trapezoid") {
  Eigen::VectorXd grid = linspace(0.0, 1.0, 4);
  Eigen::VectorXd w = simpson_weights(grid);
  double acc = 0.0;
  for (int i = 0; i < 4; ++i) acc += w(i) * grid(i) * grid(i);
  CHECK(acc == doctest::Approx(1.0 / 3.0).epsilon(0.02));
}
