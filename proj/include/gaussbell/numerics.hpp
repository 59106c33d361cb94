#pragma once

// Small numerical building blocks shared by the series and harmonic routes.

#include <functional>
#include <vector>

namespace gaussbell::numerics {

/// Gauss-Legendre rule mapped to [0, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached n-point rule; thread-safe. n >= 1.
const GaussRule& gauss_legendre_unit(int n);

/// Panel breakpoints on [0, 1] whose widths start at `edge_width` next to
/// both endpoints and double towards the middle. edge_width is clamped to
/// [1e-12, 0.25].
std::vector<double> graded_breakpoints(double edge_width);

/// Integral of f over [0, 1] using an n-point rule on each panel.
double composite_gauss(const std::function<double(double)>& f,
                       const std::vector<double>& breakpoints, int n);

/// sum_k exp(-b (x + P k)^2) for b > 0, P > 0. Switches to the Poisson-dual
/// series when b P^2 < pi so both branches need only a handful of terms.
double periodic_gaussian(double x, double b, double period);

/// Upper bound on periodic_gaussian over all x.
double periodic_gaussian_bound(double b, double period);

/// erf(a (z + d)) + erf(a (z - d)) for z in [0, 1]; the erfc form is used
/// for |d| >= 1.
double erf_pair(double a, double z, long d);

/// Upper bound on sum_{e >= e0} erfc(a e) for e0 >= 1, a > 0.
double erfc_tail_bound(double a, long e0);

}  // namespace gaussbell::numerics
