#include "gaussbell/bell.hpp"

#include "gaussbell/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gaussbell {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTieTol = 1e-12;

BellResult evaluate_at(const TmstParams& p, double l, const SeriesControl& ctrl) {
  BellResult res = bell_binned(p, l, ctrl);
  res.l_opt = l;
  return res;
}

// true when candidate should replace incumbent (ties go to smaller l)
bool better(const BellResult& cand, const BellResult& inc) {
  if (cand.b_value > inc.b_value + kTieTol) return true;
  if (cand.b_value < inc.b_value - kTieTol) return false;
  return *cand.l_opt < *inc.l_opt;
}

}  // namespace

void LGrid::validate() const {
  if (!std::isfinite(log10_l_min) || !std::isfinite(log10_l_max) || !(log10_l_min < log10_l_max)) {
    throw InvalidInput("l grid requires finite log10_l_min < log10_l_max");
  }
  if (points < 2) throw InvalidInput("l grid requires at least 2 points");
  if (!(rel_tol > 0.0)) throw InvalidInput("l grid rel_tol must be > 0");
}

std::vector<double> LGrid::values() const {
  validate();
  std::vector<double> out(static_cast<std::size_t>(points));
  const double step = (log10_l_max - log10_l_min) / (points - 1);
  for (int i = 0; i < points; ++i) {
    out[static_cast<std::size_t>(i)] = std::pow(10.0, log10_l_min + step * i);
  }
  return out;
}

BellAngles bell_value(double szz, double sxx) {
  constexpr double lim = 1.0 + 1e-6;
  if (!(std::abs(szz) <= lim) || !(std::abs(sxx) <= lim)) {
    throw InvalidInput("correlators must lie in [-1, 1]");
  }
  if (szz == 0.0 && sxx == 0.0) return {0.0, 0.0};
  return {2.0 * std::hypot(szz, sxx), std::atan2(sxx, szz)};
}

BellResult bell_from_correlators(const CorrelatorSet& c) {
  const BellAngles ang = bell_value(c.szz, c.sxx);
  BellResult res;
  res.b_value = ang.b;
  res.theta2_opt = ang.theta2;
  res.violated = ang.b > 2.0;
  res.tsirelson_gap = kTsirelson - ang.b;
  res.correlators = c;
  return res;
}

BellResult bell_binned(const TmstParams& p, double l, const SeriesControl& ctrl) {
  return bell_from_correlators(binned_correlators(p, l, ctrl));
}

BellResult bell_unbinned(const TmstParams& p) {
  const UnbinnedCorrelators u = unbinned_correlators(p);
  CorrelatorSet c;
  c.szz = u.szz;
  c.sxx = u.sxx;
  return bell_from_correlators(c);
}

BellResult bell_optimize_l(const TmstParams& p, const LGrid& grid, const SeriesControl& ctrl) {
  grid.validate();
  ctrl.validate();
  const std::vector<double> ls = grid.values();
  std::vector<double> bs(ls.size());
  BellResult best;
  std::size_t ibest = 0;
  for (std::size_t i = 0; i < ls.size(); ++i) {
    BellResult r = evaluate_at(p, ls[i], ctrl);
    bs[i] = r.b_value;
    if (i == 0 || better(r, best)) {
      best = r;
      ibest = i;
    }
  }
  if (!grid.refine) return best;

  // golden-section search in log10 l over the bracket around the grid maximum
  const double step = (grid.log10_l_max - grid.log10_l_min) / (grid.points - 1);
  double lo = grid.log10_l_min + step * static_cast<double>(ibest == 0 ? 0 : ibest - 1);
  double hi = grid.log10_l_min + step * static_cast<double>(std::min(ibest + 1, ls.size() - 1));
  const double stop = std::log10(1.0 + grid.rel_tol);
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - invphi * (hi - lo);
  double x2 = lo + invphi * (hi - lo);
  BellResult f1 = evaluate_at(p, std::pow(10.0, x1), ctrl);
  BellResult f2 = evaluate_at(p, std::pow(10.0, x2), ctrl);
  while (hi - lo > stop) {
    if (f1.b_value >= f2.b_value) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = evaluate_at(p, std::pow(10.0, x1), ctrl);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = evaluate_at(p, std::pow(10.0, x2), ctrl);
    }
  }
  if (better(f1, best)) best = f1;
  if (better(f2, best)) best = f2;
  return best;
}

BellResult bell_for_operator(const TmstParams& p, const OperatorChoice& op,
                             const SeriesControl& ctrl) {
  validate_operator(op);
  if (const auto* b = std::get_if<Binned>(&op)) {
    BellResult res = bell_binned(p, b->l, ctrl);
    res.l_opt = b->l;
    return res;
  }
  if (std::holds_alternative<Unbinned>(op)) return bell_unbinned(p);
  p.validate();
  if (p.temperature != 0.0) throw InvalidInput("Fock-basis operators are defined for T = 0 only");
  const int d = std::holds_alternative<FockPair>(op) ? 1 : std::get<FockGrouped>(op).d;
  const double t = std::pow(std::tanh(p.r), d);
  CorrelatorSet c;
  c.szz = 1.0;
  c.sxx = 2.0 * t / (1.0 + t * t);
  return bell_from_correlators(c);
}

double grouped_bell_closed_form(double r, int d) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidInput("r must be finite and >= 0");
  if (d < 1) throw InvalidInput("grouping size d must be >= 1");
  const double t2 = std::pow(std::tanh(r), 2 * d);
  return 2.0 * std::sqrt(t2 * t2 + 6.0 * t2 + 1.0) / (1.0 + t2);
}

FockBound fock_bound_check(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidInput("r must be finite and >= 0");
  FockBound out;
  out.r = r;
  const double f = std::tanh(2.0 * r);
  out.bound = 2.0 * std::sqrt(1.0 + f * f);
  out.pair_b = bell_value(1.0, f).b;
  return out;
}

AsymptoticLimits binned_limits(const TmstParams& p) {
  p.validate();
  AsymptoticLimits out;
  out.szz_large_l = 2.0 / kPi * std::atan(std::sinh(2.0 * p.r));
  out.b_large_l = 2.0 * out.szz_large_l;
  out.b_small_l = 2.0;
  return out;
}

double szz_small_l_approx(const TmstParams& p, double l) {
  p.validate();
  const double nu = thermal_nu(p.omega_a, p.temperature);
  return 8.0 / (kPi * kPi) * std::exp(-kPi * kPi * nu * std::exp(-2.0 * p.r) / (2.0 * l * l));
}

}  // namespace gaussbell
