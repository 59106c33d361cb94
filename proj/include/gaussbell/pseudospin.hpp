#pragma once

// Pseudospin correlation functions of two-mode squeezed thermal states.
//
// For the binned operators with bin size l the correlators are
//   <Sz Sz> = (1/pi) sum_{n,m} (-1)^{n+m} Z_{n,m},
//   <Sx Sx> = (2/pi) sum_{n,m} X_{n,m},
// where Z_{n,m} and X_{n,m} are Gaussian integrals over bin pairs. With
//   gamma1 = (2/nu) e^{-2r},  gamma2 = (2/nu) e^{2r},
//   a = (l/2) sqrt(gamma2),   b = gamma1 l^2 / 4,
// each term reduces to a one-dimensional integral over z in [0, 1]. The
// double sum is reorganized over s = n + m and d = n - m; the s-sum is a
// periodic Gaussian evaluated in closed form, the d-sum converges like
// erfc(a d). For small a the equivalent Fourier (harmonic) expansion of the
// bin-parity function converges faster and is used instead.

#include "gaussbell/gaussian_core.hpp"

#include <optional>
#include <string>
#include <variant>

namespace gaussbell {

struct SeriesControl {
  enum class Route { Auto, BinSum, Harmonic };

  int z_quad_order = 32;
  int sum_radius = 512;
  double tail_tol = 1e-9;
  bool adaptive = true;
  Route route = Route::Auto;

  /// Throws InvalidInput unless z_quad_order >= 8, sum_radius >= 1, tail_tol > 0.
  void validate() const;
};

struct Binned {
  double l = 1.0;
};
struct Unbinned {};
struct FockPair {};
struct FockGrouped {
  int d = 1;
};

using OperatorChoice = std::variant<Binned, Unbinned, FockPair, FockGrouped>;

void validate_operator(const OperatorChoice& op);
std::string operator_name(const OperatorChoice& op);

struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

struct CorrelatorSet {
  double szz = 0.0;
  double sxx = 0.0;
  std::optional<double> syy;
  std::optional<double> cross_zx;
  std::optional<double> cross_yz;
  std::optional<double> cross_xy;
  double est_error = 0.0;
};

/// Two halves of a bin-pair term, each evaluated from its own z-integral.
struct TermParts {
  double first = 0.0;
  double second = 0.0;
  double total() const { return first + second; }
};

/// Z_{n,m}: integral of the position marginal over bins n (mode 1) and m (mode 2).
TermParts z_term_parts(long n, long m, const TmstParams& p, double l, const SeriesControl& ctrl);
double z_term(long n, long m, const TmstParams& p, double l, const SeriesControl& ctrl);

/// X_{n,m} = J_{n,m} + K_{n,m} for the even-bin pair (2n, 2m).
TermParts x_term_parts(long n, long m, const TmstParams& p, double l, const SeriesControl& ctrl);
double x_term(long n, long m, const TmstParams& p, double l, const SeriesControl& ctrl);

/// Route Auto resolves to BinSum or Harmonic depending on the expected work.
SeriesControl::Route resolve_route(const TmstParams& p, double l, const SeriesControl& ctrl);

Estimate szz_correlator(const TmstParams& p, double l, const SeriesControl& ctrl = {});
Estimate sxx_correlator(const TmstParams& p, double l, const SeriesControl& ctrl = {});
Estimate syy_correlator(const TmstParams& p, double l, const SeriesControl& ctrl = {});

/// The J- and K-sums with sxx = 2 (J + K) / pi and syy = 2 (K - J) / pi.
struct JkSums {
  Estimate j;
  Estimate k;
};
JkSums jk_sums(const TmstParams& p, double l, const SeriesControl& ctrl = {});

struct CrossCorrelators {
  Estimate zx;
  Estimate yz;
  Estimate xy;
};
CrossCorrelators cross_correlators(const TmstParams& p, double l, const SeriesControl& ctrl = {});

/// szz and sxx together, est_error = sum of both error estimates.
CorrelatorSet binned_correlators(const TmstParams& p, double l, const SeriesControl& ctrl = {});

struct UnbinnedCorrelators {
  double szz = 0.0;
  double sxx = 0.0;
};
/// tanh^2(omega / 2T) and (2/pi) arctan(sinh 2r).
UnbinnedCorrelators unbinned_correlators(const TmstParams& p);

}  // namespace gaussbell
