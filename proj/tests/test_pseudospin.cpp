#include "doctest.h"

#include "gaussbell/errors.hpp"
#include "gaussbell/pseudospin.hpp"

#include <cmath>
#include <numbers>
#include <tuple>

using namespace gaussbell;

namespace {

TmstParams point(double r, double t) {
  TmstParams p;
  p.r = r;
  p.temperature = t;
  return p;
}

SeriesControl with_route(SeriesControl::Route route) {
  SeriesControl c;
  c.route = route;
  return c;
}

}  // namespace

TEST_CASE("frozen reference correlators at r = 1, T = 0, l = 1") {
  const TmstParams p = point(1.0, 0.0);
  CHECK(szz_correlator(p, 1.0).value == doctest::Approx(0.4158877662163092).epsilon(1e-12));
  CHECK(sxx_correlator(p, 1.0).value == doctest::Approx(0.6791091391025504).epsilon(1e-12));
  CHECK(syy_correlator(p, 1.0).value == doctest::Approx(-0.643917213332).epsilon(1e-10));
}

TEST_CASE("bin-sum and harmonic routes agree") {
  const auto bin = with_route(SeriesControl::Route::BinSum);
  const auto har = with_route(SeriesControl::Route::Harmonic);
  struct Case {
    double r, t, l;
  };
  for (const Case c : {Case{1.0, 0.0, 1.0}, Case{1.5, 0.4, 0.7}, Case{0.8, 0.4, 2.0}, Case{2.0, 1.0, 0.5}}) {
    const TmstParams p = point(c.r, c.t);
    CAPTURE(c.r);
    CAPTURE(c.l);
    CHECK(std::abs(szz_correlator(p, c.l, bin).value - szz_correlator(p, c.l, har).value) < 1e-10);
    CHECK(std::abs(sxx_correlator(p, c.l, bin).value - sxx_correlator(p, c.l, har).value) < 1e-10);
    CHECK(std::abs(syy_correlator(p, c.l, bin).value - syy_correlator(p, c.l, har).value) < 1e-10);
  }
}

TEST_CASE("bin-pair terms") {
  const TmstParams p = point(1.0, 0.3);
  const SeriesControl ctrl;
  SUBCASE("reflection relates the two halves") {
    CHECK(z_term_parts(2, -1, p, 0.9, ctrl).second ==
          doctest::Approx(z_term_parts(-3, 0, p, 0.9, ctrl).first).epsilon(1e-12));
  }
  SUBCASE("terms are scaled bin-pair probabilities") {
    double total = 0.0;
    double alternating = 0.0;
    for (long n = -40; n <= 40; ++n) {
      for (long m = -40; m <= 40; ++m) {
        const double z = z_term(n, m, p, 0.9, ctrl);
        CHECK(z >= 0.0);
        total += z;
        alternating += ((n + m) % 2 == 0 ? 1.0 : -1.0) * z;
      }
    }
    CHECK(total == doctest::Approx(std::numbers::pi).epsilon(1e-10));
    CHECK(alternating / std::numbers::pi ==
          doctest::Approx(szz_correlator(p, 0.9).value).epsilon(1e-10));
  }
  SUBCASE("symmetry in the bin indices") {
    CHECK(z_term(1, 2, p, 0.9, ctrl) == doctest::Approx(z_term(2, 1, p, 0.9, ctrl)).epsilon(1e-12));
    CHECK(x_term(0, 1, p, 0.9, ctrl) == doctest::Approx(x_term(1, 0, p, 0.9, ctrl)).epsilon(1e-12));
  }
}

TEST_CASE("J and K sums reconstruct sxx and syy") {
  const TmstParams p = point(1.2, 0.2);
  const JkSums jk = jk_sums(p, 1.3);
  CHECK(sxx_correlator(p, 1.3).value ==
        doctest::Approx(2.0 / std::numbers::pi * (jk.j.value + jk.k.value)).epsilon(1e-12));
  CHECK(syy_correlator(p, 1.3).value ==
        doctest::Approx(2.0 / std::numbers::pi * (jk.k.value - jk.j.value)).epsilon(1e-12));
}

TEST_CASE("correlators are bounded by one and carry small errors") {
  for (double r : {0.0, 0.5, 2.0, 4.0}) {
    for (double t : {0.0, 0.5, 2.0}) {
      for (double l : {0.01, 0.3, 1.0, 5.0, 100.0}) {
        const CorrelatorSet c = binned_correlators(point(r, t), l);
        CHECK(std::abs(c.szz) <= 1.0 + 1e-9);
        CHECK(std::abs(c.sxx) <= 1.0 + 1e-9);
        CHECK(c.est_error <= 1e-8);
      }
    }
  }
}

TEST_CASE("product state has vanishing szz") {
  const CorrelatorSet c = binned_correlators(point(0.0, 0.0), 1.0);
  CHECK(std::abs(c.szz) < 1e-12);
}

TEST_CASE("large-l limit is the sign correlation") {
  for (double t : {0.0, 1.0}) {
    const TmstParams p = point(2.0, t);
    const double expected = 2.0 / std::numbers::pi * std::atan(std::sinh(4.0));
    CHECK(szz_correlator(p, 100.0).value == doctest::Approx(expected).epsilon(1e-4));
  }
}

TEST_CASE("cross correlators vanish") {
  for (const auto& [r, t, l] : {std::tuple{1.0, 0.0, 1.0}, std::tuple{2.0, 0.5, 0.8}}) {
    const CrossCorrelators cc = cross_correlators(point(r, t), l);
    CHECK(std::abs(cc.zx.value) < 1e-12);
    CHECK(std::abs(cc.yz.value) < 1e-12);
    CHECK(std::abs(cc.xy.value) < 1e-12);
  }
}

TEST_CASE("unbinned correlators") {
  const UnbinnedCorrelators u = unbinned_correlators(point(1.0, 0.5));
  CHECK(u.szz == doctest::Approx(std::pow(std::tanh(1.0), 2)).epsilon(1e-14));
  CHECK(u.sxx == doctest::Approx(2.0 / std::numbers::pi * std::atan(std::sinh(2.0))).epsilon(1e-14));
}

TEST_CASE("series preconditions") {
  TmstParams p = point(1.0, 0.0);
  p.phi = 0.3;
  CHECK_THROWS_AS(szz_correlator(p, 1.0), InvalidInput);
  p.phi = 0.0;
  p.omega_b = 2.0;
  CHECK_THROWS_AS(sxx_correlator(p, 1.0), InvalidInput);
  CHECK_THROWS_AS(szz_correlator(point(1.0, 0.0), 0.0), InvalidInput);
  SeriesControl bad;
  bad.z_quad_order = 4;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
}

TEST_CASE("accuracy failures are reported") {
  SeriesControl tight;
  tight.route = SeriesControl::Route::Harmonic;
  tight.sum_radius = 2;
  tight.tail_tol = 1e-14;
  CHECK_THROWS_AS(szz_correlator(point(3.0, 0.0), 5.0, tight), AccuracyError);
}

TEST_CASE("operator names") {
  CHECK(operator_name(Binned{1.0}) == "binned");
  CHECK(operator_name(Unbinned{}) == "unbinned");
  CHECK(operator_name(FockPair{}) == "fock-pair");
  CHECK(operator_name(FockGrouped{2}) == "fock-grouped");
  CHECK_THROWS_AS(validate_operator(FockGrouped{0}), InvalidInput);
  CHECK_THROWS_AS(validate_operator(Binned{-1.0}), InvalidInput);
}
