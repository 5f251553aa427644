#include "etwist/bessel.hpp"
#include "etwist/errors.hpp"
#include "etwist/quadrature.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace etwist;

TEST_CASE("Gauss-Legendre rules integrate polynomials of degree 2n-1 exactly") {
  for (int n : {2, 3, 8, 16, 33}) {
    const auto rule = gauss_legendre(n);
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    for (int d = 0; d <= 2 * n - 1; ++d) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += rule.weights[i] * std::pow(rule.nodes[i], d);
      const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
      CHECK(std::abs(s - exact) < 1e-13);
    }
  }
  CHECK_THROWS_AS(gauss_legendre(1), DomainError);
}

TEST_CASE("radial grids") {
  const auto g = RadialGrid::uniform_panels(0.0, 2.0, 4, 8);
  CHECK(g.size() == 32);
  CHECK(g.lower() == 0.0);
  CHECK(g.upper() == 2.0);
  CHECK(g.max_spacing() == doctest::Approx(0.5 / 8));
  CHECK(g.integrate([](double k) { return k * k; }) == doctest::Approx(8.0 / 3.0).epsilon(1e-14));
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g.nodes()[i] > g.nodes()[i - 1]);

  const auto r = g.refined();
  CHECK(r.size() == 64);
  CHECK(r.integrate([](double k) { return std::exp(-k); }) ==
        doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-14));

  // a kink at 1 is integrated exactly when it is a breakpoint
  const auto kinked = RadialGrid::segmented({0.0, 1.0, 3.0}, 1, 4);
  CHECK(kinked.integrate([](double k) { return std::abs(k - 1.0); }) ==
        doctest::Approx(0.5 + 2.0).epsilon(1e-14));
  const auto widths = RadialGrid::with_breakpoints({0.0, 0.1, 1.0}, 0.25, 4);
  CHECK(widths.size() == (1 + 4) * 4);

  CHECK_THROWS_AS(RadialGrid::uniform_panels(1.0, 1.0, 4, 8), DomainError);
  CHECK_THROWS_AS(RadialGrid::uniform_panels(-1.0, 1.0, 4, 8), DomainError);
  CHECK_THROWS_AS(RadialGrid::segmented({0.5}, 2, 8), DomainError);
  CHECK_THROWS_AS(RadialGrid::explicit_nodes({1.0, 0.5}, {1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(RadialGrid::explicit_nodes({1.0}, {0.0}), DomainError);
  const auto single = RadialGrid::explicit_nodes({2.0}, {0.5});
  CHECK(single.max_spacing() == 0.0);
  CHECK(single.integrate([](double k) { return k; }) == 1.0);
}

TEST_CASE("Bessel J against the reference implementation") {
  double worst = 0.0;
  for (int n = 0; n <= 64; ++n)
    for (double x : {1e-6, 1e-3, 0.1, 0.5, 1.0, 2.4048, 3.0, 7.5, 17.3, 40.0, 63.9, 64.0, 99.5,
                     250.0, 333.3, 640.0, 999.0, 1000.0}) {
      const double e = std::abs(bessel_j(n, x) - oracle::bessel_j(n, x));
      worst = std::max(worst, e);
    }
  CHECK(worst < 1e-12);
}

TEST_CASE("Bessel J sequence, symmetries and edge cases") {
  std::vector<double> seq(40);
  bessel_j_sequence(12.5, seq);
  for (int n = 0; n < 40; ++n) CHECK(std::abs(seq[n] - oracle::bessel_j(n, 12.5)) < 1e-13);
  CHECK(bessel_j(0, 0.0) == 1.0);
  CHECK(bessel_j(3, 0.0) == 0.0);
  for (int n = 0; n < 7; ++n) {
    const double sign = n % 2 ? -1.0 : 1.0;
    CHECK(bessel_j(-n, 4.2) == doctest::Approx(sign * bessel_j(n, 4.2)).epsilon(1e-15));
    CHECK(bessel_j(n, -4.2) == doctest::Approx(sign * bessel_j(n, 4.2)).epsilon(1e-15));
  }
}
