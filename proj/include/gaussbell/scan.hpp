#pragma once

// Parameter sweeps over (r, T, l) producing CSV-ready tables. Grid points are
// evaluated on a worker pool; rows are always emitted in canonical order
// (r, then T, then l) whatever the completion order.

#include "gaussbell/bell.hpp"
#include "gaussbell/csv.hpp"
#include "gaussbell/pseudospin.hpp"

#include <functional>
#include <vector>

namespace gaussbell {

struct GridSpec {
  std::vector<double> r_values;
  std::vector<double> t_values;
  LGrid l_grid;
  /// Binned means "optimized over l" for maps and "swept over l" for b-vs-l.
  OperatorChoice op = Binned{};
  SeriesControl ctrl;
  double omega = 1.0;
  unsigned threads = 1;

  void validate() const;
};

struct ContourSpec {
  std::vector<double> en_levels{0.5, 1.0, 1.5, 2.0};
  int t_samples = 31;
  double t_max = 3.0;
  /// Bisection stops once |E_N - level| <= en_tol.
  double en_tol = 1e-6;

  void validate() const;
  std::vector<double> t_values() const;
};

/// Inclusive arithmetic range lo, lo + step, ..., hi (within step/1e6).
std::vector<double> linear_range(double lo, double hi, double step);
/// Figure-scale defaults: r in [0, 5] step 0.05, T in [0, 3] step 0.05.
GridSpec default_grid();

/// Calls fn(i) for i in [0, n) on up to `threads` workers. The first
/// exception thrown by any call is rethrown after all workers finish.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

/// Rows (r, T, l, szz, sxx, b, est_error, status) over r_values x t_values x l-grid.
Table sweep_b_vs_l(const GridSpec& grid);

struct ViolationMap {
  Table map;       // r, T, b_opt, l_opt, violated, est_error, status
  Table boundary;  // T, r_boundary, found
};
/// The first non-violating -> violating transition in r at each T is refined
/// by bisection to r_tol.
ViolationMap violation_map(const GridSpec& grid, double r_tol = 1e-3);

/// b_opt for the grid's operator: optimized over l when binned.
BellResult optimized_bell(const TmstParams& p, const GridSpec& grid);

/// E_N of the two-mode squeezed thermal state.
double tmst_log_negativity(double r, double temperature, double omega = 1.0);

/// Smallest r in [0, r_max] with E_N(r, T) = level, or a negative value when
/// the level is not reached below r_max.
double solve_contour_r(double level, double temperature, double omega, double r_max, double en_tol);

struct EntanglementTables {
  Table en_map;    // r, T, en
  Table contours;  // level, T, r, b_opt, l_opt, violated, reached, status
};
EntanglementTables en_map_and_contours(const GridSpec& grid, const ContourSpec& spec);

}  // namespace gaussbell
