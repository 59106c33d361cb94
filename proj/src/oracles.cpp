#include "gaussbell/oracles.hpp"

#include "gaussbell/bell.hpp"
#include "gaussbell/errors.hpp"
#include "gaussbell/symbol_expectation.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace gaussbell {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::MatrixXcd zero_matrix(int n_max) {
  if (n_max < 1) throw InvalidInput("Fock cutoff n_max must be >= 1");
  return Eigen::MatrixXcd::Zero(n_max + 1, n_max + 1);
}

void check_group(int d) {
  if (d < 1) throw InvalidInput("grouping size d must be >= 1");
}

struct Stats {
  double sum = 0.0;
  double sumsq = 0.0;
  long count = 0;

  void add(double v) {
    sum += v;
    sumsq += v * v;
    ++count;
  }
};

// mean of batch means and its standard error
std::pair<double, double> batch_summary(const std::vector<double>& means) {
  const double n = static_cast<double>(means.size());
  double mean = 0.0;
  for (double m : means) mean += m;
  mean /= n;
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  var /= (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

}  // namespace

void FockTruncation::check(double r) const {
  if (n_max < 1) throw InvalidInput("Fock cutoff n_max must be >= 1");
  const double t = std::tanh(std::abs(r));
  const double deficit = std::pow(t, 2.0 * (n_max + 1));
  if (deficit > 1e-10) {
    throw AccuracyError("Fock truncation too small for this squeezing", deficit);
  }
}

FockTruncation FockTruncation::for_squeezing(double r) {
  const double t = std::tanh(std::abs(r));
  if (t == 0.0) return FockTruncation{1};
  const double n = std::log(1e-10) / (2.0 * std::log(t)) - 1.0;
  FockTruncation out{std::max(1, static_cast<int>(std::ceil(n)))};
  while (true) {
    try {
      out.check(r);
      return out;
    } catch (const AccuracyError&) {
      ++out.n_max;
    }
  }
}

Eigen::MatrixXcd fock_sz(int n_max, int d) {
  check_group(d);
  Eigen::MatrixXcd m = zero_matrix(n_max);
  for (int k = 0; k <= n_max; ++k) m(k, k) = ((k / d) % 2 == 0) ? 1.0 : -1.0;
  return m;
}

Eigen::MatrixXcd fock_sx(int n_max, int d) {
  check_group(d);
  Eigen::MatrixXcd m = zero_matrix(n_max);
  for (int base = 0; base + d <= n_max; base += 2 * d) {
    for (int k = 0; k < d && base + k + d <= n_max; ++k) {
      m(base + k, base + k + d) = 1.0;
      m(base + k + d, base + k) = 1.0;
    }
  }
  return m;
}

Eigen::MatrixXcd fock_sy(int n_max, int d) {
  check_group(d);
  const std::complex<double> i(0.0, 1.0);
  Eigen::MatrixXcd m = zero_matrix(n_max);
  for (int base = 0; base + d <= n_max; base += 2 * d) {
    for (int k = 0; k < d && base + k + d <= n_max; ++k) {
      m(base + k, base + k + d) = -i;
      m(base + k + d, base + k) = i;
    }
  }
  return m;
}

double tmsv_correlation(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double r) {
  if (a.rows() != a.cols() || b.rows() != a.rows() || b.cols() != a.cols()) {
    throw InvalidInput("Fock matrices must be square and of equal size");
  }
  const Eigen::Index dim = a.rows();
  const double t = std::tanh(r);
  Eigen::VectorXd c(dim);
  double cn = 1.0 / std::cosh(r);
  for (Eigen::Index n = 0; n < dim; ++n) {
    c(n) = cn;
    cn *= t;
  }
  return c.dot(a.cwiseProduct(b) * c);
}

double fock_bell_grouped(double r, int d, const FockTruncation& trunc) {
  check_group(d);
  trunc.check(r);
  const Eigen::MatrixXd sz = fock_sz(trunc.n_max, d).real();
  const Eigen::MatrixXd sx = fock_sx(trunc.n_max, d).real();
  const double zz = tmsv_correlation(sz, sz, r);
  const double xx = tmsv_correlation(sx, sx, r);
  return bell_value(zz, xx).b;
}

double fock_bell_pair(double r, const FockTruncation& trunc) {
  return fock_bell_grouped(r, 1, trunc);
}

void McControl::validate() const {
  if (samples < 10'000) throw InvalidInput("Monte Carlo needs at least 1e4 samples");
  if (batch < 2) throw InvalidInput("Monte Carlo needs at least 2 batches");
  if (samples / batch < 1) throw InvalidInput("more batches than samples");
}

GaussianSampler::GaussianSampler(const GaussianState& state, std::uint64_t seed,
                                 std::uint64_t stream)
    : mean_(state.disp) {
  Eigen::LLT<Mat4> llt(state.sampling_covariance());
  if (llt.info() != Eigen::Success) {
    throw InvalidInput("covariance matrix is not positive definite");
  }
  chol_ = llt.matrixL();
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

Vec4 GaussianSampler::operator()() {
  Vec4 z;
  for (int k = 0; k < 4; ++k) z(k) = normal_(engine_);
  return mean_ + chol_ * z;
}

McResult mc_correlators(const GaussianState& state, double l, const McControl& mc) {
  mc.validate();
  if (!(l > 0.0) || !std::isfinite(l)) throw InvalidInput("bin size l must be finite and > 0");
  const std::int64_t per_batch = mc.samples / mc.batch;
  std::vector<double> mzz, mxx, myy;
  for (int b = 0; b < mc.batch; ++b) {
    GaussianSampler draw(state, mc.seed, static_cast<std::uint64_t>(b));
    Stats zz, xx, yy;
    for (std::int64_t k = 0; k < per_batch; ++k) {
      const Vec4 xi = draw();
      const double q1 = xi(0), q2 = xi(1), p1 = xi(2), p2 = xi(3);
      zz.add(square_wave(q1, l) * square_wave(q2, l));
      const double shifted = (1.0 + square_wave(q1 - 0.5 * l, l)) * (1.0 + square_wave(q2 - 0.5 * l, l));
      if (shifted != 0.0) {
        xx.add(std::cos(l * p1) * std::cos(l * p2) * shifted);
        yy.add(std::sin(l * p1) * std::sin(l * p2) * shifted);
      } else {
        xx.add(0.0);
        yy.add(0.0);
      }
    }
    mzz.push_back(zz.sum / static_cast<double>(zz.count));
    mxx.push_back(xx.sum / static_cast<double>(xx.count));
    myy.push_back(yy.sum / static_cast<double>(yy.count));
  }
  McResult out;
  std::tie(out.szz, out.stderr_szz) = batch_summary(mzz);
  std::tie(out.sxx, out.stderr_sxx) = batch_summary(mxx);
  std::tie(out.syy, out.stderr_syy) = batch_summary(myy);
  return out;
}

McResult mc_correlators(const TmstParams& p, double l, const McControl& mc) {
  p.validate();
  if (p.phi != 0.0) throw InvalidInput("Monte Carlo correlators require phi = 0");
  return mc_correlators(tmst_state(p), l, mc);
}

QuadratureResult quadrature_correlators(const TmstParams& p, double l, int bins) {
  p.validate();
  if (p.phi != 0.0) throw InvalidInput("quadrature correlators require phi = 0");
  if (!(l > 0.0) || !std::isfinite(l)) throw InvalidInput("bin size l must be finite and > 0");
  if (bins < 1) throw InvalidInput("bin budget must be >= 1");

  const GaussianState state = tmst_state(p);
  const Mat4 sig = state.sampling_covariance();
  const Mat2 sqq = sig.block<2, 2>(0, 0);
  const Mat2 spq = sig.block<2, 2>(2, 0);
  const Mat2 spp = sig.block<2, 2>(2, 2);
  const Mat2 sqq_inv = sqq.inverse();
  const Mat2 gain = spq * sqq_inv;
  const Mat2 cond = spp - gain * spq.transpose();
  const double v_plus = cond(0, 0) + cond(1, 1) + 2.0 * cond(0, 1);
  const double v_minus = cond(0, 0) + cond(1, 1) - 2.0 * cond(0, 1);
  const double damp_plus = std::exp(-0.5 * l * l * v_plus);
  const double damp_minus = std::exp(-0.5 * l * l * v_minus);
  const double norm = 1.0 / (2.0 * kPi * std::sqrt(sqq.determinant()));

  auto density = [&](double q1, double q2) {
    const double e = sqq_inv(0, 0) * q1 * q1 + 2.0 * sqq_inv(0, 1) * q1 * q2 + sqq_inv(1, 1) * q2 * q2;
    return norm * std::exp(-0.5 * e);
  };
  auto cond_means = [&](double q1, double q2) {
    return Eigen::Vector2d(gain(0, 0) * q1 + gain(0, 1) * q2, gain(1, 0) * q1 + gain(1, 1) * q2);
  };
  auto xx_weight = [&](double q1, double q2) {
    const Eigen::Vector2d m = cond_means(q1, q2);
    return 0.5 * (std::cos(l * (m(0) + m(1))) * damp_plus + std::cos(l * (m(0) - m(1))) * damp_minus);
  };
  auto yy_weight = [&](double q1, double q2) {
    const Eigen::Vector2d m = cond_means(q1, q2);
    return 0.5 * (std::cos(l * (m(0) - m(1))) * damp_minus - std::cos(l * (m(0) + m(1))) * damp_plus);
  };

  Eigen::SelfAdjointEigenSolver<Mat2> es(sqq);
  const Eigen::Vector2d lam = es.eigenvalues();
  const Mat2 vec = es.eigenvectors();
  const double peak = norm;
  // upper bound of the density over a rectangle via the principal axes
  auto box_max = [&](double x0, double x1, double y0, double y1) {
    double expo = 0.0;
    for (int k = 0; k < 2; ++k) {
      const double c0 = vec(0, k), c1 = vec(1, k);
      const double v[4] = {c0 * x0 + c1 * y0, c0 * x0 + c1 * y1, c0 * x1 + c1 * y0, c0 * x1 + c1 * y1};
      const double lo = *std::min_element(v, v + 4);
      const double hi = *std::max_element(v, v + 4);
      const double dmin = (lo <= 0.0 && hi >= 0.0) ? 0.0 : std::min(std::abs(lo), std::abs(hi));
      expo += dmin * dmin / (2.0 * lam(k));
    }
    return peak * std::exp(-expo);
  };

  const double extent = 9.0 * std::sqrt(lam(1));
  const long kmax = static_cast<long>(std::ceil(extent / l)) + 1;
  if (2 * kmax + 2 > bins) {
    throw AccuracyError("bin budget exhausted for quadrature oracle", extent / l);
  }

  using boost::math::quadrature::gauss_kronrod;
  constexpr unsigned depth = 10;
  // relative tolerances; the inner one is tighter so the outer integrand is smooth
  auto integrate2d = [&](auto&& f, double x0, double x1, double y0, double y1, double tol,
                         double* err_out) {
    double outer_err = 0.0;
    double inner_err_sum = 0.0;
    auto outer = [&](double q1) {
      double e = 0.0;
      const double v = gauss_kronrod<double, 15>::integrate(
          [&](double q2) { return f(q1, q2); }, y0, y1, depth, 1e-3 * tol, &e);
      inner_err_sum = std::max(inner_err_sum, e);
      return v;
    };
    const double v = gauss_kronrod<double, 15>::integrate(outer, x0, x1, depth, tol, &outer_err);
    *err_out = outer_err + inner_err_sum * (x1 - x0);
    return v;
  };

  const double candidates = static_cast<double>((2 * kmax + 2) * (2 * kmax + 2));
  const double skip = 1e-9 / candidates;
  const double rel_tol = 1e-9;

  QuadratureResult out;
  double err = 0.0;
  // z-correlator: bins [k l, (k+1) l) with sign (-1)^k
  for (long i = -kmax - 1; i <= kmax; ++i) {
    for (long j = -kmax - 1; j <= kmax; ++j) {
      const double x0 = i * l, x1 = (i + 1) * l, y0 = j * l, y1 = (j + 1) * l;
      const double mass_bound = box_max(x0, x1, y0, y1) * l * l;
      if (mass_bound < skip) {
        err += mass_bound;
        continue;
      }
      double e = 0.0;
      const double v = integrate2d(density, x0, x1, y0, y1, rel_tol, &e);
      out.szz += ((i + j) % 2 == 0 ? 1.0 : -1.0) * v;
      err += e;
      ++out.rectangles;
    }
  }
  // x and y correlators: shifted even bins [2k l + l/2, (2k+1) l + l/2), weight 2 each mode
  const long kh = kmax / 2 + 1;
  for (long i = -kh - 1; i <= kh; ++i) {
    for (long j = -kh - 1; j <= kh; ++j) {
      const double x0 = 2 * i * l + 0.5 * l, x1 = x0 + l;
      const double y0 = 2 * j * l + 0.5 * l, y1 = y0 + l;
      const double mass_bound = 4.0 * box_max(x0, x1, y0, y1) * l * l;
      if (mass_bound < skip) {
        err += 2.0 * mass_bound;
        continue;
      }
      double ex = 0.0, ey = 0.0;
      const double vx = integrate2d(
          [&](double a, double b) { return density(a, b) * xx_weight(a, b); }, x0, x1, y0, y1,
          rel_tol, &ex);
      const double vy = integrate2d(
          [&](double a, double b) { return density(a, b) * yy_weight(a, b); }, x0, x1, y0, y1,
          rel_tol, &ey);
      out.sxx += 4.0 * vx;
      out.syy += 4.0 * vy;
      err += 4.0 * (ex + ey);
      out.rectangles += 2;
    }
  }
  // probability outside the scanned window (Chebyshev-free Gaussian tail, per axis)
  err += 4.0 * std::erfc(extent / std::sqrt(2.0 * lam(1)));
  out.error = err;
  return out;
}

}  // namespace gaussbell
