#include "gaussbell/pseudospin.hpp"

#include "gaussbell/errors.hpp"
#include "gaussbell/numerics.hpp"
#include "gaussbell/symbol_expectation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace gaussbell {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxQuadOrder = 1024;

struct SeriesParams {
  double l;
  double nu;
  double gamma1;
  double gamma2;
  double a;  // erf scale
  double b;  // Gaussian scale in z
  double root;  // l sqrt(pi / gamma2) / nu
  double gt_j;  // exp(-l^2 nu e^{-2r} / 2)
  double gt_k;  // exp(-l^2 nu e^{2r} / 2)
};

void check_bin_size(double l) {
  if (!std::isfinite(l) || !(l > 0.0)) throw InvalidInput("bin size l must be finite and > 0");
}

void check_series_preconditions(const TmstParams& p) {
  p.validate();
  if (p.phi != 0.0) throw InvalidInput("binned correlators require squeezing angle phi = 0");
  if (!p.equal_frequencies()) throw InvalidInput("binned correlators require omega_a = omega_b");
}

SeriesParams series_params(const TmstParams& p, double l) {
  check_series_preconditions(p);
  check_bin_size(l);
  SeriesParams s{};
  s.l = l;
  s.nu = thermal_nu(p.omega_a, p.temperature);
  s.gamma1 = 2.0 / s.nu * std::exp(-2.0 * p.r);
  s.gamma2 = 2.0 / s.nu * std::exp(2.0 * p.r);
  s.a = 0.5 * l * std::sqrt(s.gamma2);
  s.b = 0.25 * s.gamma1 * l * l;
  s.root = l * std::sqrt(kPi / s.gamma2) / s.nu;
  s.gt_j = std::exp(-0.5 * l * l * s.nu * std::exp(-2.0 * p.r));
  s.gt_k = std::exp(-0.5 * l * l * s.nu * std::exp(2.0 * p.r));
  return s;
}

double edge_width(const SeriesParams& s) {
  double w = 0.25;
  if (s.a > 0.0) w = std::min(w, 8.0 / s.a);
  if (s.b > 0.0) w = std::min({w, 8.0 / std::sqrt(s.b), 4.0 / s.b});
  return w;
}

struct QuadOut {
  double value;
  double error;
};

// Integral over [0, 1] of f, comparing the n-point composite rule with the
// n/2-point one and doubling n while adaptive and above tol.
template <class F>
QuadOut integrate_unit(const F& f, const std::vector<double>& bp, const SeriesControl& ctrl,
                       double tol) {
  int n = ctrl.z_quad_order;
  for (;;) {
    auto rule_sum = [&](int order) {
      const auto& rule = numerics::gauss_legendre_unit(order);
      double total = 0.0;
      for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
        const double lo = bp[k];
        const double h = bp[k + 1] - lo;
        double panel = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
          panel += rule.weights[i] * f(lo + h * rule.nodes[i]);
        }
        total += h * panel;
      }
      return total;
    };
    const double fine = rule_sum(n);
    const double coarse = rule_sum(std::max(4, n / 2));
    const double err = std::abs(fine - coarse);
    if (err <= tol || !ctrl.adaptive || 2 * n > kMaxQuadOrder) return {fine, err};
    n *= 2;
  }
}

void require(double err, double tol, const char* what) {
  if (!(err <= tol)) {
    std::ostringstream os;
    os << what << ": tolerance " << tol;
    throw AccuracyError(os.str(), err);
  }
}

// Resummed d-series. For the z-correlator the integrand is
//   sum_d (-1)^d g_d(z) G(z + (d mod 2); b, 2),
// for the x-correlator
//   sum_d g_{2d}(z) G(z + 1 + 2 (d mod 2); b, 4),
// with g_d(z) = erf(a (z + d)) + erf(a (z - d)) and G the periodic Gaussian.
Estimate resummed_integral(const SeriesParams& s, bool x_kind, double prefactor,
                           const SeriesControl& ctrl) {
  const double period = x_kind ? 4.0 : 2.0;
  const double theta_max = s.b > 0.0 ? numerics::periodic_gaussian_bound(s.b, period) : 0.0;
  const double budget = 0.5 * ctrl.tail_tol;

  // smallest D whose d-tail is within budget
  long dmax = 1;
  double tail = 0.0;
  for (;; ++dmax) {
    const long e0 = x_kind ? 2 * dmax + 1 : dmax;
    tail = std::abs(prefactor) * 2.0 * theta_max * numerics::erfc_tail_bound(s.a, e0);
    if (tail <= budget || dmax >= ctrl.sum_radius) break;
  }
  require(tail, budget, "d-series truncation radius exhausted");

  const double off_step = x_kind ? 2.0 : 1.0;
  const double off0 = x_kind ? 1.0 : 0.0;
  const long dscale = x_kind ? 2 : 1;
  auto integrand = [&](double z) {
    const double th0 = numerics::periodic_gaussian(z + off0, s.b, period);
    const double th1 = numerics::periodic_gaussian(z + off0 + off_step, s.b, period);
    double acc = numerics::erf_pair(s.a, z, 0) * th0;
    for (long d = 1; d <= dmax; ++d) {
      const double th = (d % 2 == 0) ? th0 : th1;
      const double sign = (!x_kind && d % 2 == 1) ? -1.0 : 1.0;
      acc += 2.0 * sign * numerics::erf_pair(s.a, z, dscale * d) * th;
    }
    return acc;
  };
  const auto bp = numerics::graded_breakpoints(edge_width(s));
  const double qtol = budget / std::max(std::abs(prefactor), 1e-300);
  const QuadOut q = integrate_unit(integrand, bp, ctrl, qtol);
  const double qerr = std::abs(prefactor) * q.error;
  require(qerr, budget, "z-quadrature did not converge");
  return {prefactor * q.value, qerr + tail};
}

GaussianState state_for(const TmstParams& p) { return tmst_state(p); }

int harmonic_cap(const SeriesControl& ctrl) { return std::max(64, 4 * ctrl.sum_radius); }

Estimate harmonic_correlator(const TmstParams& p, double l, const ModeSymbol& s1,
                             const ModeSymbol& s2, const SeriesControl& ctrl) {
  const HarmonicResult h =
      harmonic_expectation(state_for(p), l, s1, s2, ctrl.tail_tol, harmonic_cap(ctrl));
  return {h.value, h.error};
}

double z_prefactor(const SeriesParams& s) { return s.root / kPi; }
double x_prefactor(const SeriesParams& s) { return 2.0 / kPi * s.root * (s.gt_j + s.gt_k); }

// One z-integral of a single bin-pair half. `center` is the point where the
// z-Gaussian peaks, `shift` the constant added to the exponent.
double half_term(const SeriesParams& s, double center, long d, double scale,
                 const SeriesControl& ctrl, const char* what) {
  auto f = [&](double z) {
    const double y = z - center;
    return std::exp(-s.b * y * y) * numerics::erf_pair(s.a, z, d);
  };
  std::vector<double> bp = numerics::graded_breakpoints(edge_width(s));
  const double tol = ctrl.tail_tol / std::max(scale, 1e-300);
  const QuadOut q = integrate_unit(f, bp, ctrl, tol);
  require(scale * q.error, ctrl.tail_tol, what);
  return scale * q.value;
}

}  // namespace

void SeriesControl::validate() const {
  if (z_quad_order < 8) throw InvalidInput("z_quad_order must be >= 8");
  if (z_quad_order > kMaxQuadOrder) throw InvalidInput("z_quad_order must be <= 1024");
  if (sum_radius < 1) throw InvalidInput("sum_radius must be >= 1");
  if (!(tail_tol > 0.0) || !std::isfinite(tail_tol)) throw InvalidInput("tail_tol must be > 0");
}

void validate_operator(const OperatorChoice& op) {
  if (const auto* b = std::get_if<Binned>(&op)) check_bin_size(b->l);
  if (const auto* g = std::get_if<FockGrouped>(&op)) {
    if (g->d < 1) throw InvalidInput("grouping size d must be >= 1");
  }
}

std::string operator_name(const OperatorChoice& op) {
  struct Visitor {
    std::string operator()(const Binned&) const { return "binned"; }
    std::string operator()(const Unbinned&) const { return "unbinned"; }
    std::string operator()(const FockPair&) const { return "fock-pair"; }
    std::string operator()(const FockGrouped&) const { return "fock-grouped"; }
  };
  return std::visit(Visitor{}, op);
}

TermParts z_term_parts(long n, long m, const TmstParams& p, double l, const SeriesControl& ctrl) {
  ctrl.validate();
  const SeriesParams s = series_params(p, l);
  const double scale = 0.5 * s.root;
  const long sum = n + m;
  const long d = n - m;
  TermParts out;
  out.first = half_term(s, -static_cast<double>(sum), d, scale, ctrl, "Z term quadrature");
  out.second = half_term(s, static_cast<double>(sum + 2), d, scale, ctrl, "Z term quadrature");
  return out;
}

double z_term(long n, long m, const TmstParams& p, double l, const SeriesControl& ctrl) {
  return z_term_parts(n, m, p, l, ctrl).total();
}

TermParts x_term_parts(long n, long m, const TmstParams& p, double l, const SeriesControl& ctrl) {
  ctrl.validate();
  const SeriesParams s = series_params(p, l);
  const double scale = 0.5 * s.root * (s.gt_j + s.gt_k);
  const long sum = n + m;
  const long d = 2 * (n - m);
  TermParts out;
  out.first = half_term(s, -static_cast<double>(2 * sum + 1), d, scale, ctrl, "X term quadrature");
  out.second = half_term(s, static_cast<double>(2 * sum + 3), d, scale, ctrl, "X term quadrature");
  return out;
}

double x_term(long n, long m, const TmstParams& p, double l, const SeriesControl& ctrl) {
  return x_term_parts(n, m, p, l, ctrl).total();
}

SeriesControl::Route resolve_route(const TmstParams& p, double l, const SeriesControl& ctrl) {
  if (ctrl.route != SeriesControl::Route::Auto) return ctrl.route;
  const SeriesParams s = series_params(p, l);
  if (s.a >= 4.0) return SeriesControl::Route::BinSum;
  long dmax = 1;
  while (dmax < ctrl.sum_radius && 4.0 * numerics::erfc_tail_bound(s.a, dmax) > 0.5 * ctrl.tail_tol) {
    ++dmax;
  }
  const int j = harmonic_order_needed(state_for(p), l, ctrl.tail_tol, harmonic_cap(ctrl));
  return (j + 1) / 2 < dmax ? SeriesControl::Route::Harmonic : SeriesControl::Route::BinSum;
}

Estimate szz_correlator(const TmstParams& p, double l, const SeriesControl& ctrl) {
  ctrl.validate();
  const SeriesParams s = series_params(p, l);
  if (resolve_route(p, l, ctrl) == SeriesControl::Route::Harmonic) {
    return harmonic_correlator(p, l, kSymbolZ, kSymbolZ, ctrl);
  }
  return resummed_integral(s, false, z_prefactor(s), ctrl);
}

Estimate sxx_correlator(const TmstParams& p, double l, const SeriesControl& ctrl) {
  ctrl.validate();
  const SeriesParams s = series_params(p, l);
  if (resolve_route(p, l, ctrl) == SeriesControl::Route::Harmonic) {
    return harmonic_correlator(p, l, kSymbolX, kSymbolX, ctrl);
  }
  return resummed_integral(s, true, x_prefactor(s), ctrl);
}

JkSums jk_sums(const TmstParams& p, double l, const SeriesControl& ctrl) {
  ctrl.validate();
  const SeriesParams s = series_params(p, l);
  JkSums out;
  if (resolve_route(p, l, ctrl) == SeriesControl::Route::Harmonic) {
    const Estimate xx = harmonic_correlator(p, l, kSymbolX, kSymbolX, ctrl);
    const Estimate yy = harmonic_correlator(p, l, kSymbolY, kSymbolY, ctrl);
    const double err = 0.25 * kPi * (xx.error + yy.error);
    out.j = {0.25 * kPi * (xx.value - yy.value), err};
    out.k = {0.25 * kPi * (xx.value + yy.value), err};
    return out;
  }
  // The J and K parts share the same bin integral and differ only in the
  // momentum factor, so the resummed x-series splits proportionally.
  const Estimate xx = resummed_integral(s, true, x_prefactor(s), ctrl);
  const double total = s.gt_j + s.gt_k;
  const double fj = total > 0.0 ? s.gt_j / total : 0.5;
  const double fk = total > 0.0 ? s.gt_k / total : 0.5;
  out.j = {0.5 * kPi * xx.value * fj, 0.5 * kPi * xx.error * fj};
  out.k = {0.5 * kPi * xx.value * fk, 0.5 * kPi * xx.error * fk};
  return out;
}

Estimate syy_correlator(const TmstParams& p, double l, const SeriesControl& ctrl) {
  const JkSums jk = jk_sums(p, l, ctrl);
  return {2.0 / kPi * (jk.k.value - jk.j.value), 2.0 / kPi * (jk.k.error + jk.j.error)};
}

CrossCorrelators cross_correlators(const TmstParams& p, double l, const SeriesControl& ctrl) {
  ctrl.validate();
  check_series_preconditions(p);
  check_bin_size(l);
  CrossCorrelators out;
  out.zx = harmonic_correlator(p, l, kSymbolZ, kSymbolX, ctrl);
  out.yz = harmonic_correlator(p, l, kSymbolY, kSymbolZ, ctrl);
  out.xy = harmonic_correlator(p, l, kSymbolX, kSymbolY, ctrl);
  return out;
}

CorrelatorSet binned_correlators(const TmstParams& p, double l, const SeriesControl& ctrl) {
  const Estimate zz = szz_correlator(p, l, ctrl);
  const Estimate xx = sxx_correlator(p, l, ctrl);
  CorrelatorSet out;
  out.szz = zz.value;
  out.sxx = xx.value;
  out.est_error = zz.error + xx.error;
  return out;
}

UnbinnedCorrelators unbinned_correlators(const TmstParams& p) {
  p.validate();
  if (!p.equal_frequencies()) throw InvalidInput("unbinned correlators require omega_a = omega_b");
  const double nu = thermal_nu(p.omega_a, p.temperature);
  return {1.0 / (nu * nu), 2.0 / kPi * std::atan(std::sinh(2.0 * p.r))};
}

}  // namespace gaussbell
