#include "doctest.h"

#include "gaussbell/numerics.hpp"
#include "gaussbell/symbol_expectation.hpp"

#include <cmath>
#include <numbers>

using namespace gaussbell;
using namespace gaussbell::numerics;

TEST_CASE("Gauss-Legendre rule integrates polynomials exactly") {
  const GaussRule& g = gauss_legendre_unit(8);
  double sum_w = 0.0;
  double moment = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    sum_w += g.weights[i];
    moment += g.weights[i] * std::pow(g.nodes[i], 15);
  }
  CHECK(sum_w == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(moment == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
}

TEST_CASE("graded breakpoints cover the unit interval") {
  const auto br = graded_breakpoints(1e-3);
  CHECK(br.front() == 0.0);
  CHECK(br.back() == 1.0);
  CHECK(br[1] == doctest::Approx(1e-3));
  for (std::size_t i = 1; i < br.size(); ++i) CHECK(br[i] > br[i - 1]);
  const double v = composite_gauss([](double x) { return std::exp(-400.0 * x * x); }, br, 16);
  CHECK(v == doctest::Approx(0.5 * std::sqrt(std::numbers::pi / 400.0) * std::erf(20.0)).epsilon(1e-13));
}

TEST_CASE("periodic Gaussian agrees across both branches") {
  for (double b : {0.05, 0.5, 3.0}) {
    for (double x : {0.0, 0.3, 1.7}) {
      double direct = 0.0;
      for (int k = -400; k <= 400; ++k) direct += std::exp(-b * (x + 2.0 * k) * (x + 2.0 * k));
      CHECK(periodic_gaussian(x, b, 2.0) == doctest::Approx(direct).epsilon(1e-13));
      CHECK(periodic_gaussian(x, b, 2.0) <= periodic_gaussian_bound(b, 2.0));
    }
  }
}

TEST_CASE("erf pair keeps precision for large shifts") {
  CHECK(erf_pair(1.0, 0.3, 0) == doctest::Approx(2.0 * std::erf(0.3)));
  const double a = 4.0;
  const double z = 0.5;
  const long d = 3;
  const double expected = std::erfc(a * (d - z)) - std::erfc(a * (z + d));
  CHECK(erf_pair(a, z, d) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(erf_pair(a, z, -d) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("erfc tail bound dominates the tail sum") {
  for (double a : {0.2, 1.0, 3.0}) {
    for (long e0 : {1L, 4L}) {
      double tail = 0.0;
      for (long e = e0; e < e0 + 5000; ++e) tail += std::erfc(a * e);
      CHECK(erfc_tail_bound(a, e0) >= tail);
    }
  }
}

TEST_CASE("pseudospin symbols") {
  CHECK(square_wave(0.5, 1.0) == 1.0);
  CHECK(square_wave(1.5, 1.0) == -1.0);
  CHECK(square_wave(-0.5, 1.0) == -1.0);
  CHECK(square_wave(-1.5, 1.0) == 1.0);
  CHECK(symbol_value(kSymbolZ, 1.0, 2.2, 7.0) == 1.0);
  CHECK(symbol_value(kSymbolX, 1.0, 0.7, 0.3) == doctest::Approx(2.0 * std::cos(0.3)));
  CHECK(symbol_value(kSymbolX, 1.0, 0.2, 0.3) == 0.0);
  CHECK(symbol_value(kSymbolY, 2.0, 1.5, 0.3) == doctest::Approx(2.0 * std::sin(0.6)));
}

TEST_CASE("harmonic expectation of the vacuum") {
  GaussianState vac;
  const HarmonicResult zz = harmonic_expectation(vac, 1.0, kSymbolZ, kSymbolZ, 1e-12, 4096);
  double single = 0.0;
  for (int k = -60; k < 60; ++k) {
    const double lo = k;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    single += sign * 0.5 * (std::erf(lo + 1.0) - std::erf(lo));
  }
  CHECK(zz.value == doctest::Approx(single * single).epsilon(1e-11));
  CHECK(zz.error <= 1e-12);
}
