#include "doctest.h"

#include "gaussbell/bell.hpp"
#include "gaussbell/errors.hpp"

#include <cmath>
#include <numbers>

using namespace gaussbell;

namespace {

TmstParams point(double r, double t) {
  TmstParams p;
  p.r = r;
  p.temperature = t;
  return p;
}

}  // namespace

TEST_CASE("CHSH value from correlators") {
  const BellAngles a = bell_value(0.6, 0.8);
  CHECK(a.b == doctest::Approx(2.0));
  CHECK(a.theta2 == doctest::Approx(std::atan2(0.8, 0.6)));
  CHECK(bell_value(1.0, 1.0).b == doctest::Approx(kTsirelson).epsilon(1e-15));
  const BellAngles zero = bell_value(0.0, 0.0);
  CHECK(zero.b == 0.0);
  CHECK(zero.theta2 == 0.0);
  CHECK_NOTHROW(bell_value(1.0 + 5e-7, 0.0));
  CHECK_THROWS_AS(bell_value(1.1, 0.0), InvalidInput);
}

TEST_CASE("binned Bell value and its limits") {
  SUBCASE("frozen reference") {
    const BellResult b = bell_binned(point(1.0, 0.0), 1.0);
    CHECK(b.b_value == doctest::Approx(2.0 * std::hypot(0.4158877662163092, 0.6791091391025504))
                           .epsilon(1e-12));
    CHECK_FALSE(b.violated);
    CHECK(b.tsirelson_gap == doctest::Approx(kTsirelson - b.b_value));
  }
  SUBCASE("large l") {
    for (double r : {2.0, 3.0}) {
      const TmstParams p = point(r, 0.0);
      CHECK(std::abs(bell_binned(p, 100.0).b_value - binned_limits(p).b_large_l) < 2e-3);
    }
  }
  SUBCASE("small l") {
    for (const auto& p : {point(1.0, 0.0), point(2.0, 0.2)}) {
      const double b = bell_binned(p, 0.01).b_value;
      CHECK(b >= 1.99);
      CHECK(b <= 2.01);
      CHECK(std::abs(szz_small_l_approx(p, 0.01)) < 1e-12);
    }
  }
}

TEST_CASE("unbinned closed form") {
  for (double r : {0.2, 1.0, 3.0}) {
    for (double t : {0.0, 0.4, 2.0}) {
      const double nu = thermal_nu(1.0, t);
      const double f = 2.0 / std::numbers::pi * std::atan(std::sinh(2.0 * r));
      CHECK(bell_unbinned(point(r, t)).b_value ==
            doctest::Approx(2.0 * std::sqrt(std::pow(nu, -4) + f * f)).epsilon(1e-13));
    }
  }
  CHECK_FALSE(bell_unbinned(point(0.0, 0.0)).l_opt.has_value());
}

TEST_CASE("optimized bin size") {
  const BellResult best = bell_optimize_l(point(3.0, 0.0));
  REQUIRE(best.l_opt.has_value());
  CHECK(best.b_value == doctest::Approx(2.759358).epsilon(1e-6));
  CHECK(*best.l_opt == doctest::Approx(3.66766).epsilon(1e-3));
  for (double l : LGrid{}.values()) CHECK(bell_binned(point(3.0, 0.0), l).b_value <= best.b_value + 1e-12);
  CHECK(best.violated);

  LGrid coarse;
  coarse.points = 5;
  coarse.refine = false;
  CHECK(bell_optimize_l(point(3.0, 0.0), coarse).l_opt.value() == doctest::Approx(1.0));
  LGrid bad;
  bad.points = 1;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
}

TEST_CASE("Fock operators") {
  for (double r : {0.3, 0.8, 1.2}) {
    const FockBound fb = fock_bound_check(r);
    CHECK(fb.pair_b == doctest::Approx(fb.bound).epsilon(1e-14));
    CHECK(fb.grouped(1) == doctest::Approx(fb.pair_b).epsilon(1e-14));
    CHECK(fb.grouped(2) <= fb.grouped(1) + 1e-14);
  }
  const BellResult pair_op = bell_for_operator(point(1.0, 0.0), FockPair{});
  CHECK(pair_op.b_value == doctest::Approx(2.0 * std::sqrt(1.0 + std::pow(std::tanh(2.0), 2))));
  CHECK_THROWS_AS(bell_for_operator(point(1.0, 0.5), FockPair{}), InvalidInput);
  CHECK(bell_for_operator(point(1.0, 0.0), Binned{1.0}).b_value ==
        doctest::Approx(bell_binned(point(1.0, 0.0), 1.0).b_value));
}

TEST_CASE("binned values never exceed the Fock bound at zero temperature") {
  for (double r : {1.0, 2.0, 3.0, 4.0}) {
    const double bound = fock_bound_check(r).bound;
    for (double l : {0.1, 0.5, 1.0, 2.0, 5.0, 20.0}) {
      const BellResult b = bell_binned(point(r, 0.0), l);
      CHECK(b.b_value <= bound + b.correlators.est_error + 1e-12);
    }
  }
}
