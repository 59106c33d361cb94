#pragma once

// Independent reference engines: truncated Fock-space matrices, Monte Carlo
// sampling of the Wigner function, and brute-force bin quadrature.

#include "gaussbell/gaussian_core.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <random>

namespace gaussbell {

struct FockTruncation {
  int n_max = 160;

  /// Throws AccuracyError unless tanh(r)^{2 (n_max + 1)} <= 1e-10.
  void check(double r) const;
  /// Smallest cutoff that satisfies check(r).
  static FockTruncation for_squeezing(double r);
};

/// Grouped pseudospin matrices on span{|0>, ..., |n_max>}; d = 1 gives the
/// unit-grouping operators.
Eigen::MatrixXcd fock_sz(int n_max, int d = 1);
Eigen::MatrixXcd fock_sx(int n_max, int d = 1);
Eigen::MatrixXcd fock_sy(int n_max, int d = 1);

/// <psi| A (x) B |psi> for the truncated two-mode squeezed vacuum
/// psi = sum_n tanh^n(r) / cosh(r) |n, n>.
double tmsv_correlation(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double r);

double fock_bell_pair(double r, const FockTruncation& trunc = {});
double fock_bell_grouped(double r, int d, const FockTruncation& trunc = {});

struct McControl {
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 42;
  int batch = 100;  // number of independent batches

  void validate() const;
};

struct McResult {
  double szz = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  double stderr_szz = 0.0;
  double stderr_sxx = 0.0;
  double stderr_syy = 0.0;
};

/// Draws xi ~ N(disp, sigma / 2) through the Cholesky factor of sigma / 2.
/// Each stream index gives an independent mt19937_64 sequence for the seed.
class GaussianSampler {
 public:
  GaussianSampler(const GaussianState& state, std::uint64_t seed, std::uint64_t stream);
  Vec4 operator()();

 private:
  Mat4 chol_;
  Vec4 mean_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

/// Sample means of the pointwise symbol products
///   zz: S(q1) S(q2)
///   xx: cos(l p1) cos(l p2) (1 + S(q1 - l/2)) (1 + S(q2 - l/2))
///   yy: sin(l p1) sin(l p2) (1 + S(q1 - l/2)) (1 + S(q2 - l/2))
/// with batch-mean standard errors.
McResult mc_correlators(const TmstParams& p, double l, const McControl& mc = {});
McResult mc_correlators(const GaussianState& state, double l, const McControl& mc = {});

struct QuadratureResult {
  double szz = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  double error = 0.0;
  long rectangles = 0;  // bin pairs actually integrated
};

/// Bin-by-bin adaptive quadrature of the position marginal, with the momentum
/// integrals done in closed form through the conditional Gaussian p | q.
/// `bins` caps the number of bins per axis; exceeding it throws AccuracyError.
QuadratureResult quadrature_correlators(const TmstParams& p, double l, int bins = 4000);

}  // namespace gaussbell
