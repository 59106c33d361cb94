// Acceptance checks. Prints one line per criterion; the exit status is the
// number of failing criteria. `--criterion N` runs a single criterion.

#include "gaussbell/bell.hpp"
#include "gaussbell/csv.hpp"
#include "gaussbell/gaussian_core.hpp"
#include "gaussbell/oracles.hpp"
#include "gaussbell/pseudospin.hpp"
#include "gaussbell/scan.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <tuple>
#include <string>
#include <vector>

using namespace gaussbell;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

TmstParams point(double r, double t) {
  TmstParams p;
  p.r = r;
  p.temperature = t;
  return p;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome large_l_asymptote() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o{true, ""};
  for (const auto& [r, t] : std::vector<std::pair<double, double>>{{2, 0}, {3, 0}, {3, 1}, {1.5, 0.5}}) {
    const double nu = thermal_nu(1.0, t);
    const double expected = 4.0 / (std::numbers::pi * std::sqrt(nu)) * std::atan(std::sinh(2.0 * r));
    const double b = bell_binned(point(r, t), 100.0).b_value;
    const double dev = std::abs(b - expected);
    const bool ok = dev <= 2e-3;
    o.pass = o.pass && ok;
    o.detail += "(" + num(r) + "," + num(t) + "): b=" + num(b) + " closed=" + num(expected) +
                (ok ? " ok; " : " MISS; ");
  }
  const double secs = seconds_since(t0);
  o.pass = o.pass && secs < 1.0;
  o.detail += "time=" + num(secs) + "s";
  return o;
}

Outcome small_l_limit() {
  Outcome o{true, ""};
  for (const auto& [r, t] : std::vector<std::pair<double, double>>{{1, 0}, {2, 0.2}}) {
    const double b = bell_binned(point(r, t), 0.01).b_value;
    o.pass = o.pass && b >= 1.99 && b <= 2.01;
    o.detail += "(" + num(r) + "," + num(t) + "): b=" + num(b) + "; ";
  }
  return o;
}

Outcome violation_cutoff() {
  const auto t0 = std::chrono::steady_clock::now();
  auto violates = [](double r) { return bell_optimize_l(point(r, 0.0)).b_value > 2.0; };
  double lo = 1.0;
  double hi = 1.3;
  bool bracket = !violates(lo) && violates(hi);
  while (bracket && hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    (violates(mid) ? hi : lo) = mid;
  }
  const double rstar = 0.5 * (lo + hi);
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = bracket && rstar >= 1.10 && rstar <= 1.14 && secs < 120.0;
  o.detail = "r*=" + num(rstar) + " window=[1.10,1.14] time=" + num(secs) + "s";
  return o;
}

Outcome unbinned_closed_form() {
  double worst = 0.0;
  for (double r : {0.1, 0.5, 1.0, 2.0, 4.0}) {
    for (double t : {0.0, 0.3, 1.0, 2.5}) {
      const double th = t == 0.0 ? 1.0 : std::tanh(1.0 / (2.0 * t));
      const double f = 2.0 / std::numbers::pi * std::atan(std::sinh(2.0 * r));
      const double expected = 2.0 * std::sqrt(std::pow(th, 4) + f * f);
      worst = std::max(worst, std::abs(bell_unbinned(point(r, t)).b_value - expected));
    }
  }
  return {worst <= 1e-12, "20 points, max deviation=" + num(worst)};
}

Outcome fock_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (double r : {0.3, 0.8, 1.2}) {
    for (int d : {1, 2, 3}) {
      worst = std::max(worst, std::abs(fock_bell_grouped(r, d, FockTruncation{160}) -
                                       grouped_bell_closed_form(r, d)));
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-6 && secs < 30.0, "max deviation=" + num(worst) + " time=" + num(secs) + "s"};
}

Outcome bound_saturation() {
  double pair_dev = 0.0;
  for (double r : {0.3, 0.8, 1.2, 2.0}) {
    pair_dev = std::max(pair_dev, std::abs(fock_bell_pair(r, FockTruncation::for_squeezing(r)) -
                                           fock_bound_check(r).bound));
  }
  double worst_excess = -1e300;
  for (double r : {1.0, 2.0, 3.0, 4.0}) {
    const double bound = fock_bound_check(r).bound;
    for (double l : LGrid{}.values()) {
      const BellResult b = bell_binned(point(r, 0.0), l);
      worst_excess = std::max(worst_excess, b.b_value - bound - b.correlators.est_error);
    }
  }
  return {pair_dev <= 1e-8 && worst_excess <= 0.0,
          "pair deviation=" + num(pair_dev) + " max(b - bound - est_error)=" + num(worst_excess)};
}

Outcome route_agreement() {
  const auto t0 = std::chrono::steady_clock::now();
  struct Case {
    double r, t, l;
  };
  const std::vector<Case> cases{{1.0, 0.0, 1.0}, {1.5, 0.4, 0.7}, {1.0, 0.3, 1.5}, {0.8, 0.4, 2.0}, {0.3, 1.0, 0.3}};
  double quad_dev = 0.0;
  double mc_z = 0.0;
  McControl mc;
  mc.samples = 1'000'000;
  for (const Case& c : cases) {
    const TmstParams p = point(c.r, c.t);
    const CorrelatorSet s = binned_correlators(p, c.l);
    const QuadratureResult q = quadrature_correlators(p, c.l);
    const McResult m = mc_correlators(p, c.l, mc);
    quad_dev = std::max({quad_dev, std::abs(s.szz - q.szz), std::abs(s.sxx - q.sxx)});
    mc_z = std::max({mc_z, std::abs(m.szz - s.szz) / m.stderr_szz, std::abs(m.sxx - s.sxx) / m.stderr_sxx,
                     std::abs(m.szz - q.szz) / m.stderr_szz, std::abs(m.sxx - q.sxx) / m.stderr_sxx});
  }
  const double secs = seconds_since(t0);
  return {quad_dev <= 1e-5 && mc_z <= 3.0 && secs < 300.0,
          "series-quadrature max=" + num(quad_dev) + " MC max z=" + num(mc_z) + " time=" + num(secs) + "s"};
}

Outcome cross_vanish() {
  double worst = 0.0;
  for (const auto& [r, t, l] : std::vector<std::tuple<double, double, double>>{{1, 0, 1}, {2, 0.5, 0.8}}) {
    const CrossCorrelators cc = cross_correlators(point(r, t), l);
    worst = std::max({worst, std::abs(cc.zx.value), std::abs(cc.yz.value), std::abs(cc.xy.value)});
  }
  return {worst < 1e-6, "max |cross|=" + num(worst)};
}

Outcome entanglement_structure() {
  Outcome o{true, ""};
  double en_dev = 0.0;
  for (double r : {0.5, 1.0, 2.0}) {
    en_dev = std::max(en_dev, std::abs(log_negativity(tmst_state(point(r, 0.0))) - 2.0 * r / std::numbers::ln2));
  }
  const bool closed = en_dev <= 1e-9;

  bool decreasing = true;
  for (double r : linear_range(0.5, 5.0, 0.5)) {
    double prev = tmst_log_negativity(r, 0.0);
    for (double t : linear_range(0.1, 0.9, 0.1)) {
      const double e = tmst_log_negativity(r, t);
      decreasing = decreasing && e < prev;
      prev = e;
    }
  }

  GridSpec g;
  g.r_values = {0.0, 5.0};
  g.t_values = {0.0};
  ContourSpec cs;
  cs.en_levels = {1.5, 2.0};
  const Table c = en_map_and_contours(g, cs).contours;
  bool claim = true;
  std::string contour_detail;
  for (double level : cs.en_levels) {
    bool seen_violation = false;
    bool later_classical = false;
    double b_first = 0.0;
    double b_max = 0.0;
    bool first = true;
    for (std::size_t i = 0; i < c.rows.size(); ++i) {
      if (c.number(i, "level") != level || !std::get<bool>(c.rows[i][c.column_index("reached")])) continue;
      const double b = c.number(i, "b_opt");
      if (first) b_first = b;
      first = false;
      b_max = std::max(b_max, b);
      if (b > 2.0) seen_violation = true;
      if (seen_violation && b <= 2.0) later_classical = true;
    }
    claim = claim && seen_violation && later_classical;
    contour_detail += " E_N=" + num(level) + ": b_opt(T=0)=" + num(b_first) + " max=" + num(b_max) +
                      (seen_violation && later_classical ? " ok;" : " MISS;");
  }
  o.pass = closed && decreasing && claim;
  o.detail = "E_N(r,0) deviation=" + num(en_dev) + " decreasing_in_T=" + (decreasing ? "yes" : "no") +
             " contours:" + contour_detail;
  return o;
}

Outcome monotonicity() {
  bool in_t = true;
  std::string detail;
  for (double r : {2.0, 3.0, 4.0}) {
    double prev = 1e300;
    for (double t : linear_range(0.0, 3.0, 0.25)) {
      const double b = bell_optimize_l(point(r, t)).b_value;
      in_t = in_t && b < prev;
      prev = b;
    }
  }
  bool in_r = true;
  double prev = -1e300;
  for (double r : linear_range(1.2, 4.0, 0.1)) {
    const double b = bell_optimize_l(point(r, 0.0)).b_value;
    in_r = in_r && b >= prev - 1e-12;
    prev = b;
  }
  return {in_t && in_r, std::string("decreasing in T: ") + (in_t ? "yes" : "no") +
                            ", nondecreasing in r at T=0: " + (in_r ? "yes" : "no")};
}

Outcome hierarchy_flip() {
  GridSpec g;
  g.r_values = linear_range(0.0, 5.0, 0.25);
  g.t_values = linear_range(0.0, 3.0, 0.1);
  const Table binned = violation_map(g, 1e-2).map;
  g.op = Unbinned{};
  const Table unbinned = violation_map(g, 1e-2).map;
  const std::size_t vcol = binned.column_index("violated");
  int flips = 0;
  int reverse_small = 0;
  std::string example;
  for (std::size_t i = 0; i < binned.rows.size(); ++i) {
    const bool vb = std::get<bool>(binned.rows[i][vcol]);
    const bool vu = std::get<bool>(unbinned.rows[i][vcol]);
    const double r = binned.number(i, "r");
    const double t = binned.number(i, "T");
    if (vb && !vu) {
      if (flips == 0) example = "(" + num(r) + "," + num(t) + ")";
      ++flips;
    }
    if (!vb && vu && r <= 1.0 && t <= 0.5) ++reverse_small;
  }
  return {flips > 0 && reverse_small > 0, "binned-only points=" + std::to_string(flips) + " first=" + example +
                                              ", unbinned-only points with r<=1, T<=0.5: " +
                                              std::to_string(reverse_small) + " (21x31 grid)"};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "Run a single criterion (1-11)");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "large-l asymptote", large_l_asymptote},
      {2, "small-l limit", small_l_limit},
      {3, "violation cutoff at T=0", violation_cutoff},
      {4, "unbinned closed form", unbinned_closed_form},
      {5, "Fock oracle vs closed forms", fock_oracle},
      {6, "bound saturation", bound_saturation},
      {7, "route agreement", route_agreement},
      {8, "cross-correlators vanish", cross_vanish},
      {9, "entanglement structure", entanglement_structure},
      {10, "monotonicity", monotonicity},
      {11, "operator-hierarchy flip", hierarchy_flip},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    if (only != 0 && c.id != only) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("criterion %2d %-30s %s  %s\n", c.id, c.name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
