#include "gaussbell/scan.hpp"

#include "gaussbell/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace gaussbell {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

TmstParams params_at(double r, double t, double omega) {
  TmstParams p;
  p.r = r;
  p.temperature = t;
  p.omega_a = omega;
  p.omega_b = omega;
  return p;
}

Table::Cell optional_cell(const std::optional<double>& v) {
  if (v) return *v;
  return std::monostate{};
}

struct MapPoint {
  BellResult res;
  bool ok = true;
};

MapPoint evaluate_map_point(const TmstParams& p, const GridSpec& grid) {
  MapPoint mp;
  try {
    mp.res = optimized_bell(p, grid);
  } catch (const AccuracyError&) {
    mp.ok = false;
  }
  return mp;
}

}  // namespace

void GridSpec::validate() const {
  if (r_values.empty() || t_values.empty()) throw InvalidInput("r and T lists must be nonempty");
  for (double r : r_values) {
    if (!std::isfinite(r) || r < 0.0) throw InvalidInput("all r values must be finite and >= 0");
  }
  for (double t : t_values) {
    if (!std::isfinite(t) || t < 0.0) throw InvalidInput("all T values must be finite and >= 0");
  }
  if (!std::isfinite(omega) || !(omega > 0.0)) throw InvalidInput("omega must be > 0");
  if (threads < 1) throw InvalidInput("thread count must be >= 1");
  l_grid.validate();
  ctrl.validate();
  validate_operator(op);
}

void ContourSpec::validate() const {
  if (en_levels.empty()) throw InvalidInput("at least one E_N level is required");
  for (std::size_t i = 0; i < en_levels.size(); ++i) {
    if (!(en_levels[i] > 0.0) || !std::isfinite(en_levels[i])) {
      throw InvalidInput("E_N levels must be finite and > 0");
    }
    if (i > 0 && !(en_levels[i] > en_levels[i - 1])) {
      throw InvalidInput("E_N levels must be sorted ascending");
    }
  }
  if (t_samples < 1) throw InvalidInput("t_samples must be >= 1");
  if (!(t_max >= 0.0) || !std::isfinite(t_max)) throw InvalidInput("t_max must be >= 0");
  if (!(en_tol > 0.0)) throw InvalidInput("en_tol must be > 0");
}

std::vector<double> ContourSpec::t_values() const {
  if (t_samples == 1) return {0.0};
  std::vector<double> out(static_cast<std::size_t>(t_samples));
  for (int i = 0; i < t_samples; ++i) out[static_cast<std::size_t>(i)] = t_max * i / (t_samples - 1);
  return out;
}

std::vector<double> linear_range(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw InvalidInput("range requires step > 0 and hi >= lo");
  std::vector<double> out;
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-6));
  for (long i = 0; i <= n; ++i) out.push_back(lo + step * static_cast<double>(i));
  return out;
}

GridSpec default_grid() {
  GridSpec g;
  g.r_values = linear_range(0.0, 5.0, 0.05);
  g.t_values = linear_range(0.0, 3.0, 0.05);
  return g;
}

void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& fn) {
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first;
  std::mutex mu;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first) first = std::current_exception();
        next.store(n);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned k = 0; k < workers; ++k) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

BellResult optimized_bell(const TmstParams& p, const GridSpec& grid) {
  if (std::holds_alternative<Binned>(grid.op)) return bell_optimize_l(p, grid.l_grid, grid.ctrl);
  return bell_for_operator(p, grid.op, grid.ctrl);
}

Table sweep_b_vs_l(const GridSpec& grid) {
  grid.validate();
  if (!std::holds_alternative<Binned>(grid.op)) {
    throw InvalidInput("b-vs-l sweeps require the binned operator");
  }
  const std::vector<double> ls = grid.l_grid.values();
  const std::size_t nr = grid.r_values.size(), nt = grid.t_values.size(), nl = ls.size();
  Table t;
  t.columns = {"r", "T", "l", "szz", "sxx", "b", "est_error", "status"};
  t.rows.resize(nr * nt * nl);
  parallel_for(nr * nt * nl, grid.threads, [&](std::size_t idx) {
    const std::size_t ir = idx / (nt * nl);
    const std::size_t it = (idx / nl) % nt;
    const std::size_t il = idx % nl;
    const double r = grid.r_values[ir], temp = grid.t_values[it], l = ls[il];
    const TmstParams p = params_at(r, temp, grid.omega);
    try {
      const BellResult b = bell_binned(p, l, grid.ctrl);
      t.rows[idx] = {r, temp, l, b.correlators.szz, b.correlators.sxx, b.b_value,
                     b.correlators.est_error, std::string("ok")};
    } catch (const AccuracyError& e) {
      t.rows[idx] = {r, temp, l, kNaN, kNaN, kNaN, e.estimate(), std::string("accuracy_error")};
    }
  });
  return t;
}

ViolationMap violation_map(const GridSpec& grid, double r_tol) {
  grid.validate();
  if (!(std::holds_alternative<Binned>(grid.op) || std::holds_alternative<Unbinned>(grid.op))) {
    throw InvalidInput("violation maps support the binned and unbinned operators");
  }
  if (!(r_tol > 0.0)) throw InvalidInput("r tolerance must be > 0");
  const std::size_t nr = grid.r_values.size(), nt = grid.t_values.size();
  std::vector<MapPoint> pts(nr * nt);
  parallel_for(nr * nt, grid.threads, [&](std::size_t idx) {
    const double r = grid.r_values[idx / nt], temp = grid.t_values[idx % nt];
    pts[idx] = evaluate_map_point(params_at(r, temp, grid.omega), grid);
  });

  ViolationMap out;
  out.map.columns = {"r", "T", "b_opt", "l_opt", "violated", "est_error", "status"};
  for (std::size_t idx = 0; idx < pts.size(); ++idx) {
    const double r = grid.r_values[idx / nt], temp = grid.t_values[idx % nt];
    const MapPoint& mp = pts[idx];
    if (mp.ok) {
      out.map.rows.push_back({r, temp, mp.res.b_value, optional_cell(mp.res.l_opt), mp.res.violated,
                              mp.res.correlators.est_error, std::string("ok")});
    } else {
      out.map.rows.push_back({r, temp, kNaN, std::monostate{}, false, kNaN,
                              std::string("accuracy_error")});
    }
  }

  // boundary refinement per temperature, in r order
  std::vector<std::size_t> order(nr);
  for (std::size_t i = 0; i < nr; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return grid.r_values[a] < grid.r_values[b]; });
  std::vector<double> boundary(nt, kNaN);
  parallel_for(nt, grid.threads, [&](std::size_t it) {
    const double temp = grid.t_values[it];
    for (std::size_t k = 0; k + 1 < nr; ++k) {
      const MapPoint& a = pts[order[k] * nt + it];
      const MapPoint& b = pts[order[k + 1] * nt + it];
      if (!(a.ok && b.ok) || a.res.violated || !b.res.violated) continue;
      double lo = grid.r_values[order[k]], hi = grid.r_values[order[k + 1]];
      while (hi - lo > r_tol) {
        const double mid = 0.5 * (lo + hi);
        const MapPoint m = evaluate_map_point(params_at(mid, temp, grid.omega), grid);
        if (m.ok && m.res.violated) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      boundary[it] = 0.5 * (lo + hi);
      return;
    }
  });
  out.boundary.columns = {"T", "r_boundary", "found"};
  for (std::size_t it = 0; it < nt; ++it) {
    const bool found = !std::isnan(boundary[it]);
    out.boundary.rows.push_back(
        {grid.t_values[it], found ? Table::Cell{boundary[it]} : Table::Cell{std::monostate{}}, found});
  }
  return out;
}

double tmst_log_negativity(double r, double temperature, double omega) {
  return log_negativity(tmst_state(params_at(r, temperature, omega)));
}

double solve_contour_r(double level, double temperature, double omega, double r_max,
                       double en_tol) {
  if (!(level > 0.0)) throw InvalidInput("E_N level must be > 0");
  if (tmst_log_negativity(r_max, temperature, omega) < level) return -1.0;
  double lo = 0.0, hi = r_max;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double en = tmst_log_negativity(mid, temperature, omega);
    if (std::abs(en - level) <= en_tol) return mid;
    if (en < level) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-15) break;
  }
  return 0.5 * (lo + hi);
}

EntanglementTables en_map_and_contours(const GridSpec& grid, const ContourSpec& spec) {
  grid.validate();
  spec.validate();
  const std::size_t nr = grid.r_values.size(), nt = grid.t_values.size();
  EntanglementTables out;
  out.en_map.columns = {"r", "T", "en"};
  std::vector<double> en(nr * nt);
  for (std::size_t idx = 0; idx < nr * nt; ++idx) {
    const double r = grid.r_values[idx / nt], temp = grid.t_values[idx % nt];
    en[idx] = tmst_log_negativity(r, temp, grid.omega);
    out.en_map.rows.push_back({r, temp, en[idx]});
  }

  // precondition of the bisection: E_N increases with r, strictly once positive
  std::vector<std::size_t> order(nr);
  for (std::size_t i = 0; i < nr; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return grid.r_values[a] < grid.r_values[b]; });
  for (std::size_t it = 0; it < nt; ++it) {
    for (std::size_t k = 0; k + 1 < nr; ++k) {
      if (grid.r_values[order[k]] == grid.r_values[order[k + 1]]) continue;
      const double a = en[order[k] * nt + it], b = en[order[k + 1] * nt + it];
      if (b < a || (a > 0.0 && !(b > a))) {
        throw NumericalDomainError("E_N is not increasing in r on the grid");
      }
    }
  }

  const double r_max = *std::max_element(grid.r_values.begin(), grid.r_values.end());
  const std::vector<double> ts = spec.t_values();
  const std::size_t nl = spec.en_levels.size(), ns = ts.size();
  out.contours.columns = {"level", "T", "r", "b_opt", "l_opt", "violated", "reached", "status"};
  out.contours.rows.resize(nl * ns);
  parallel_for(nl * ns, grid.threads, [&](std::size_t idx) {
    const double level = spec.en_levels[idx / ns], temp = ts[idx % ns];
    const double r = solve_contour_r(level, temp, grid.omega, r_max, spec.en_tol);
    if (r < 0.0) {
      out.contours.rows[idx] = {level, temp, std::monostate{}, std::monostate{}, std::monostate{},
                                false, false, std::string("unreached")};
      return;
    }
    const MapPoint mp = evaluate_map_point(params_at(r, temp, grid.omega), grid);
    if (mp.ok) {
      out.contours.rows[idx] = {level, temp, r, mp.res.b_value, optional_cell(mp.res.l_opt),
                                mp.res.violated, true, std::string("ok")};
    } else {
      out.contours.rows[idx] = {level, temp, r, kNaN, std::monostate{}, false, true,
                                std::string("accuracy_error")};
    }
  });
  return out;
}

}  // namespace gaussbell
