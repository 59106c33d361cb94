#pragma once

// Covariance-matrix algebra for two-mode Gaussian states.
//
// All vectors and matrices use the quadrature ordering (q1, q2, p1, p2) with
// hbar = k_B = 1. The covariance convention is
//   sigma_ij = <xi_i xi_j + xi_j xi_i> - 2 <xi_i><xi_j>,
// so the vacuum has sigma = identity and the Wigner function is
//   W(xi) = exp(-(xi - m)^T sigma^{-1} (xi - m)) / (pi^2 sqrt(det sigma)).
// As a probability density W is therefore a normal distribution with
// covariance sigma / 2.

#include <Eigen/Core>

#include <array>

namespace gaussbell {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;
using Mat2 = Eigen::Matrix2d;

/// Phase-space point in (q1, q2, p1, p2) ordering.
using QuadratureVector = Vec4;

/// Omega = [[0, -1], [1, 0]] in (q, p) block form.
Mat4 symplectic_form();

/// Permutation matrix P with P * (q1, q2, p1, p2) = (q1, p1, q2, p2).
Mat4 mode_ordering_permutation();

/// sigma in (q1, q2, p1, p2) -> sigma in (q1, p1, q2, p2), and back.
Mat4 to_mode_ordering(const Mat4& sigma);
Mat4 from_mode_ordering(const Mat4& sigma_modes);

class CovarianceMatrix {
 public:
  CovarianceMatrix() : m_(Mat4::Identity()) {}
  /// Throws InvalidInput on non-finite entries or asymmetry above 1e-12.
  explicit CovarianceMatrix(const Mat4& m);

  const Mat4& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }
  double determinant() const { return m_.determinant(); }

  /// Symplectic eigenvalues (ascending), from the two-mode invariants.
  std::array<double, 2> symplectic_eigenvalues() const;
  /// All symplectic eigenvalues >= 1 - tol.
  bool is_physical(double tol = 1e-9) const;

 private:
  Mat4 m_;
};

class SymplecticMatrix {
 public:
  SymplecticMatrix() : m_(Mat4::Identity()) {}
  explicit SymplecticMatrix(const Mat4& m) : m_(m) {}

  const Mat4& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }
  /// max |S Omega S^T - Omega|.
  double form_defect() const;

 private:
  Mat4 m_;
};

struct GaussianState {
  CovarianceMatrix cov;
  QuadratureVector disp = QuadratureVector::Zero();

  /// Covariance of W viewed as a probability density: sigma / 2.
  Mat4 sampling_covariance() const { return 0.5 * cov.matrix(); }
};

/// Two-mode squeezed thermal state parameters.
struct TmstParams {
  double r = 0.0;
  double phi = 0.0;
  double temperature = 0.0;
  double omega_a = 1.0;
  double omega_b = 1.0;

  /// Throws InvalidInput unless r >= 0, T >= 0, omega > 0, all finite.
  void validate() const;
  bool equal_frequencies() const { return omega_a == omega_b; }
};

/// coth(omega / 2T), evaluated as 1 + 2 / expm1(omega / T); exactly 1 at T = 0.
double thermal_nu(double omega, double temperature);

SymplecticMatrix symplectic_from_hamiltonian(const Mat4& f);
SymplecticMatrix squeezing_symplectic(double r, double phi);
/// Quadratic-form matrix F of the two-mode squeezing generator.
Mat4 squeezing_hamiltonian(double r, double phi);

GaussianState thermal_state(double omega_a, double omega_b, double temperature);
GaussianState tmst_state(const TmstParams& p);

double wigner_eval(const GaussianState& state, const QuadratureVector& xi);

/// Smallest symplectic eigenvalue of the partially transposed covariance.
double pt_symplectic_min(const GaussianState& state);
/// max(0, -log2 n_-).
double log_negativity(const GaussianState& state);

}  // namespace gaussbell
