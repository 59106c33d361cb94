#include "gaussbell/symbol_expectation.hpp"

#include "gaussbell/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

namespace gaussbell {

namespace {

using cplx = std::complex<double>;

struct PlaneWave {
  double kq;
  double kp;
  cplx c;
};

std::vector<PlaneWave> expand(const ModeSymbol& s, double l, int jmax) {
  const double alpha = std::numbers::pi / l;
  const cplx i(0.0, 1.0);
  std::vector<PlaneWave> position;
  if (s.position == PositionFactor::ShiftedEvenBins) position.push_back({0.0, 0.0, 1.0});
  for (int j = 1; j <= jmax; j += 2) {
    cplx c = -2.0 * i / (std::numbers::pi * j);
    if (s.position == PositionFactor::ShiftedEvenBins) {
      // exp(-i j pi / 2) = (-i)^j
      c *= (j % 4 == 1) ? -i : i;
    }
    position.push_back({j * alpha, 0.0, c});
    position.push_back({-j * alpha, 0.0, std::conj(c)});
  }
  std::vector<PlaneWave> momentum;
  switch (s.momentum) {
    case MomentumFactor::One:
      momentum.push_back({0.0, 0.0, 1.0});
      break;
    case MomentumFactor::Cos:
      momentum.push_back({0.0, l, 0.5});
      momentum.push_back({0.0, -l, 0.5});
      break;
    case MomentumFactor::Sin:
      momentum.push_back({0.0, l, -0.5 * i});
      momentum.push_back({0.0, -l, 0.5 * i});
      break;
  }
  std::vector<PlaneWave> out;
  out.reserve(position.size() * momentum.size());
  for (const auto& m : momentum) {
    for (const auto& q : position) out.push_back({q.kq, m.kp, q.c * m.c});
  }
  return out;
}

// Sum of |coefficients| times the Gaussian damping bound exp(-c j^2),
// over harmonics j <= jmax (jmax < 0 means to convergence).
double damped_weight(const ModeSymbol& s, double c, int jmax) {
  double w = (s.position == PositionFactor::ShiftedEvenBins) ? 1.0 : 0.0;
  for (int j = 1; jmax < 0 || j <= jmax; j += 2) {
    const double damp = std::exp(-c * j * static_cast<double>(j));
    const double term = 4.0 / (std::numbers::pi * j) * damp;
    w += term;
    if (jmax < 0 && damp < 1e-18) break;
  }
  return w;
}

double damping_rate(const GaussianState& state, double l) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(state.sampling_covariance(), Eigen::EigenvaluesOnly);
  const double lambda_min = es.eigenvalues()(0);
  if (!(lambda_min > 0.0)) {
    throw NumericalDomainError("covariance matrix is not positive definite");
  }
  const double alpha = std::numbers::pi / l;
  return 0.5 * lambda_min * alpha * alpha;
}

int order_for(const ModeSymbol& s1, const ModeSymbol& s2, double c, double tol, int cap,
              double* bound_out) {
  const double full1 = damped_weight(s1, c, -1);
  const double full2 = damped_weight(s2, c, -1);
  const double full = full1 * full2;
  const double floor_bound = 4.0 * std::numeric_limits<double>::epsilon() * full;
  double w1 = (s1.position == PositionFactor::ShiftedEvenBins) ? 1.0 : 0.0;
  double w2 = (s2.position == PositionFactor::ShiftedEvenBins) ? 1.0 : 0.0;
  int j = 1;
  double bound = 0.0;
  for (;; j += 2) {
    const double term = 4.0 / (std::numbers::pi * j) * std::exp(-c * j * static_cast<double>(j));
    w1 += term;
    w2 += term;
    // tail mass of each factor, combined without forming the cancelling difference
    const double t1 = std::max(full1 - w1, 0.0);
    const double t2 = std::max(full2 - w2, 0.0);
    bound = std::max(t1 * full2 + w1 * t2, floor_bound);
    if (bound <= tol || j > cap) break;
  }
  if (bound_out) *bound_out = bound;
  return j;
}

}  // namespace

double square_wave(double q, double l) {
  const double k = std::floor(q / l);
  return (std::fmod(k, 2.0) == 0.0) ? 1.0 : -1.0;
}

double symbol_value(const ModeSymbol& s, double l, double q, double p) {
  double pos = 0.0;
  if (s.position == PositionFactor::SquareWave) {
    pos = square_wave(q, l);
  } else {
    pos = 1.0 + square_wave(q - 0.5 * l, l);
  }
  switch (s.momentum) {
    case MomentumFactor::One:
      return pos;
    case MomentumFactor::Cos:
      return std::cos(l * p) * pos;
    case MomentumFactor::Sin:
      return std::sin(l * p) * pos;
  }
  return pos;
}

int harmonic_order_needed(const GaussianState& state, double l, double tol, int cap) {
  const double c = damping_rate(state, l);
  return order_for(kSymbolX, kSymbolX, c, tol, cap, nullptr);
}

HarmonicResult harmonic_expectation(const GaussianState& state, double l, const ModeSymbol& s1,
                                    const ModeSymbol& s2, double tol, int max_harmonic) {
  if (!(l > 0.0) || !std::isfinite(l)) throw InvalidInput("bin size l must be finite and > 0");
  const double c = damping_rate(state, l);
  double bound = 0.0;
  const int jmax = order_for(s1, s2, c, tol, max_harmonic, &bound);
  if (jmax > max_harmonic) {
    throw AccuracyError("harmonic expansion needs more terms than allowed", bound);
  }
  const auto w1 = expand(s1, l, jmax);
  const auto w2 = expand(s2, l, jmax);
  const Mat4 sig = state.sampling_covariance();
  const Vec4& mu = state.disp;
  double sum = 0.0;
  for (const auto& a : w1) {
    for (const auto& b : w2) {
      // u = (kq1, kq2, kp1, kp2)
      const double u0 = a.kq, u1 = b.kq, u2 = a.kp, u3 = b.kp;
      const double quad = sig(0, 0) * u0 * u0 + sig(1, 1) * u1 * u1 + sig(2, 2) * u2 * u2 +
                          sig(3, 3) * u3 * u3 +
                          2.0 * (sig(0, 1) * u0 * u1 + sig(0, 2) * u0 * u2 + sig(0, 3) * u0 * u3 +
                                 sig(1, 2) * u1 * u2 + sig(1, 3) * u1 * u3 + sig(2, 3) * u2 * u3);
      const double phase = u0 * mu(0) + u1 * mu(1) + u2 * mu(2) + u3 * mu(3);
      const cplx cc = a.c * b.c;
      const double damp = std::exp(-0.5 * quad);
      sum += damp * (cc.real() * std::cos(phase) - cc.imag() * std::sin(phase));
    }
  }
  return {sum, bound, jmax};
}

}  // namespace gaussbell
