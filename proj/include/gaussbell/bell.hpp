#pragma once

// CHSH values from pseudospin correlators.
//
// With all azimuthal angles zero and the optimal polar angles
// theta1 = 0, theta1' = pi/2, theta2' = -theta2, the Bell expectation is
//   <B> = 2 sqrt(<Sz Sz>^2 + <Sx Sx>^2),  tan theta2 = <Sx Sx> / <Sz Sz>.

#include "gaussbell/gaussian_core.hpp"
#include "gaussbell/pseudospin.hpp"

#include <optional>
#include <vector>

namespace gaussbell {

inline constexpr double kTsirelson = 2.8284271247461903;

struct BellResult {
  double b_value = 0.0;
  double theta2_opt = 0.0;
  std::optional<double> l_opt;
  bool violated = false;
  double tsirelson_gap = kTsirelson;
  CorrelatorSet correlators;
};

struct LGrid {
  double log10_l_min = -2.0;
  double log10_l_max = 2.0;
  int points = 81;
  bool refine = true;
  /// Golden-section stops once the bracket is this small relative to l.
  double rel_tol = 1e-4;

  void validate() const;
  /// Log-spaced bin sizes, ascending.
  std::vector<double> values() const;
};

struct BellAngles {
  double b = 0.0;
  double theta2 = 0.0;
};

/// Throws InvalidInput if |szz| or |sxx| exceeds 1 + 1e-6.
BellAngles bell_value(double szz, double sxx);

BellResult bell_from_correlators(const CorrelatorSet& c);
BellResult bell_binned(const TmstParams& p, double l, const SeriesControl& ctrl = {});
BellResult bell_unbinned(const TmstParams& p);
BellResult bell_optimize_l(const TmstParams& p, const LGrid& grid = {},
                           const SeriesControl& ctrl = {});

/// Bell value of an arbitrary operator choice; Fock choices use the closed
/// forms and require T = 0.
BellResult bell_for_operator(const TmstParams& p, const OperatorChoice& op,
                             const SeriesControl& ctrl = {});

/// Closed form 2 sqrt(t^{4d} + 6 t^{2d} + 1) / (1 + t^{2d}), t = tanh r.
double grouped_bell_closed_form(double r, int d);

struct FockBound {
  double r = 0.0;
  double bound = 2.0;   // 2 sqrt(1 + tanh^2 2r)
  double pair_b = 2.0;  // 2 sqrt(1 + F^2), F = tanh 2r
  double grouped(int d) const { return grouped_bell_closed_form(r, d); }
};
FockBound fock_bound_check(double r);

/// Limits of the binned correlators for l -> infinity and l -> 0.
struct AsymptoticLimits {
  double szz_large_l = 0.0;
  double b_large_l = 0.0;
  double b_small_l = 2.0;
};
AsymptoticLimits binned_limits(const TmstParams& p);

/// Small-l approximation (8 / pi^2) exp(-pi^2 nu e^{-2r} / (2 l^2)) of <Sz Sz>.
double szz_small_l_approx(const TmstParams& p, double l);

}  // namespace gaussbell
