#include "gaussbell/gaussian_core.hpp"

#include "gaussbell/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gaussbell {

namespace {

bool all_finite(const Mat4& m) { return m.allFinite(); }

struct ModeBlocks {
  Mat2 a;  // mode 1
  Mat2 b;  // mode 2
  Mat2 c;  // correlations
};

ModeBlocks mode_blocks(const Mat4& sigma) {
  const Mat4 s = to_mode_ordering(sigma);
  return {s.block<2, 2>(0, 0), s.block<2, 2>(2, 2), s.block<2, 2>(0, 2)};
}

// Smaller root of x^2 - delta x + det = 0 in the cancellation-free form.
double smaller_root_squared(double delta, double det) {
  double disc = delta * delta - 4.0 * det;
  if (disc < -1e-9 * std::max(1.0, delta * delta)) {
    throw NumericalDomainError("negative symplectic discriminant: covariance is unphysical");
  }
  disc = std::max(disc, 0.0);
  const double big = 0.5 * (delta + std::sqrt(disc));
  if (big <= 0.0) {
    throw NumericalDomainError("non-positive symplectic invariant");
  }
  return det / big;
}

}  // namespace

Mat4 symplectic_form() {
  Mat4 omega = Mat4::Zero();
  omega.block<2, 2>(0, 2) = -Mat2::Identity();
  omega.block<2, 2>(2, 0) = Mat2::Identity();
  return omega;
}

Mat4 mode_ordering_permutation() {
  // rows: q1, p1, q2, p2 picked from (q1, q2, p1, p2)
  Mat4 p = Mat4::Zero();
  p(0, 0) = 1.0;
  p(1, 2) = 1.0;
  p(2, 1) = 1.0;
  p(3, 3) = 1.0;
  return p;
}

Mat4 to_mode_ordering(const Mat4& sigma) {
  const Mat4 p = mode_ordering_permutation();
  return p * sigma * p.transpose();
}

Mat4 from_mode_ordering(const Mat4& sigma_modes) {
  const Mat4 p = mode_ordering_permutation();
  return p.transpose() * sigma_modes * p;
}

CovarianceMatrix::CovarianceMatrix(const Mat4& m) : m_(m) {
  if (!all_finite(m)) {
    throw InvalidInput("covariance matrix has non-finite entries");
  }
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff())) {
    throw InvalidInput("covariance matrix is not symmetric");
  }
  m_ = 0.5 * (m + m.transpose());
}

std::array<double, 2> CovarianceMatrix::symplectic_eigenvalues() const {
  const ModeBlocks blk = mode_blocks(m_);
  const double delta = blk.a.determinant() + blk.b.determinant() + 2.0 * blk.c.determinant();
  const double det = m_.determinant();
  const double lo2 = smaller_root_squared(delta, det);
  const double hi2 = delta - lo2;
  return {std::sqrt(std::max(lo2, 0.0)), std::sqrt(std::max(hi2, 0.0))};
}

bool CovarianceMatrix::is_physical(double tol) const {
  try {
    return symplectic_eigenvalues()[0] >= 1.0 - tol;
  } catch (const NumericalDomainError&) {
    return false;
  }
}

double SymplecticMatrix::form_defect() const {
  const Mat4 omega = symplectic_form();
  return (m_ * omega * m_.transpose() - omega).cwiseAbs().maxCoeff();
}

void TmstParams::validate() const {
  if (!std::isfinite(r) || !std::isfinite(phi) || !std::isfinite(temperature) ||
      !std::isfinite(omega_a) || !std::isfinite(omega_b)) {
    throw InvalidInput("TMST parameters must be finite");
  }
  if (r < 0.0) throw InvalidInput("squeezing r must be >= 0");
  if (temperature < 0.0) throw InvalidInput("temperature must be >= 0");
  if (omega_a <= 0.0 || omega_b <= 0.0) throw InvalidInput("mode frequencies must be > 0");
}

double thermal_nu(double omega, double temperature) {
  if (!(omega > 0.0)) throw InvalidInput("mode frequency must be > 0");
  if (temperature < 0.0 || std::isnan(temperature)) throw InvalidInput("temperature must be >= 0");
  if (temperature == 0.0) return 1.0;
  const double x = omega / temperature;
  // expm1 overflows to +inf for x > ~709, which yields exactly 1
  return 1.0 + 2.0 / std::expm1(x);
}

SymplecticMatrix symplectic_from_hamiltonian(const Mat4& f) {
  if (!all_finite(f)) {
    throw InvalidInput("Hamiltonian matrix has non-finite entries");
  }
  const Mat4 fbar = 0.5 * (f + f.transpose());
  const Mat4 generator = symplectic_form().inverse() * fbar;
  return SymplecticMatrix(generator.exp());
}

Mat4 squeezing_hamiltonian(double r, double phi) {
  const Mat2 sx = (Mat2() << 0.0, 1.0, 1.0, 0.0).finished();
  Mat4 f;
  f << -std::sin(phi) * sx, std::cos(phi) * sx,
       std::cos(phi) * sx, std::sin(phi) * sx;
  return r * f;
}

SymplecticMatrix squeezing_symplectic(double r, double phi) {
  if (!std::isfinite(r) || !std::isfinite(phi)) {
    throw InvalidInput("squeezing parameters must be finite");
  }
  const double ch = std::cosh(r);
  const double sh = std::sinh(r);
  const double c = std::cos(phi) * sh;
  const double s = std::sin(phi) * sh;
  Mat4 m;
  m << ch, c, 0.0, s,
       c, ch, s, 0.0,
       0.0, s, ch, -c,
       s, 0.0, -c, ch;
  return SymplecticMatrix(m);
}

GaussianState thermal_state(double omega_a, double omega_b, double temperature) {
  const double nu_a = thermal_nu(omega_a, temperature);
  const double nu_b = thermal_nu(omega_b, temperature);
  Vec4 diag(nu_a, nu_b, nu_a, nu_b);
  return GaussianState{CovarianceMatrix(Mat4(diag.asDiagonal())), Vec4::Zero()};
}

GaussianState tmst_state(const TmstParams& p) {
  p.validate();
  const GaussianState thermal = thermal_state(p.omega_a, p.omega_b, p.temperature);
  const Mat4 s = squeezing_symplectic(p.r, p.phi).matrix();
  Mat4 sigma = s * thermal.cov.matrix() * s.transpose();
  sigma = 0.5 * (sigma + sigma.transpose());
  return GaussianState{CovarianceMatrix(sigma), Vec4::Zero()};
}

double wigner_eval(const GaussianState& state, const QuadratureVector& xi) {
  const Mat4& sigma = state.cov.matrix();
  Eigen::LLT<Mat4> llt(sigma);
  if (llt.info() != Eigen::Success) {
    throw NumericalDomainError("covariance matrix is not positive definite");
  }
  const double det = sigma.determinant();
  if (!(det > 0.0)) {
    throw NumericalDomainError("covariance matrix is singular");
  }
  const Vec4 d = xi - state.disp;
  const double quad = d.dot(llt.solve(d));
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  return std::exp(-quad) / (pi2 * std::sqrt(det));
}

double pt_symplectic_min(const GaussianState& state) {
  const Mat4& sigma = state.cov.matrix();
  const ModeBlocks blk = mode_blocks(sigma);
  const double delta = blk.a.determinant() + blk.b.determinant() - 2.0 * blk.c.determinant();
  return std::sqrt(smaller_root_squared(delta, sigma.determinant()));
}

double log_negativity(const GaussianState& state) {
  const double n_minus = pt_symplectic_min(state);
  return std::max(0.0, -std::log2(n_minus));
}

}  // namespace gaussbell
