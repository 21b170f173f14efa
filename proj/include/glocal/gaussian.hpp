// Copyright 2026 The glocal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Phase-space machinery for zero-mean Gaussian states of N oscillators.
//
// Coordinates are ordered x = (q_1..q_N, p_1..p_N), the covariance matrix is
// sigma_jk = 1/2 <x_j x_k + x_k x_j>, and the vacuum of a unit oscillator has
// sigma = I/2. The symplectic form is Y = [[0, I], [-I, 0]].

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "glocal/degeneracy.hpp"
#include "glocal/errors.hpp"
#include "glocal/lattice.hpp"
#include "glocal/tolerances.hpp"

namespace glocal {

inline Matrix symplectic_form(Eigen::Index modes) {
  Matrix y = Matrix::Zero(2 * modes, 2 * modes);
  y.topRightCorner(modes, modes).setIdentity();
  y.bottomLeftCorner(modes, modes) = -Matrix::Identity(modes, modes);
  return y;
}

/// max |M^T Y M - Y|.
inline double symplectic_residual(const Matrix& m) {
  const Matrix y = symplectic_form(m.rows() / 2);
  return (m.transpose() * y * m - y).cwiseAbs().maxCoeff();
}

inline Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

class CovarianceMatrix {
 public:
  CovarianceMatrix() = default;
  explicit CovarianceMatrix(Matrix entries) : m_(std::move(entries)) {
    if (m_.rows() != m_.cols() || m_.rows() % 2 != 0)
      throw DimensionError("covariance matrix must be square with even dimension");
  }

  const Matrix& entries() const { return m_; }
  Eigen::Index modes() const { return m_.rows() / 2; }

  auto qq() const { return m_.topLeftCorner(modes(), modes()); }
  auto pp() const { return m_.bottomRightCorner(modes(), modes()); }
  auto qp() const { return m_.topRightCorner(modes(), modes()); }

  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

 private:
  Matrix m_;
};

/// Normal-mode data of H = 1/2 x^T (V (+) I) x.
struct NormalModeBasis {
  Matrix symplectic;   // S with x = S X, S^T F S = Omega (+) Omega
  Vector omega;        // ascending
  Matrix orthogonal;   // O with V = O diag(omega^2) O^T
  Partition degeneracies;

  Eigen::Index modes() const { return omega.size(); }

  /// S^{-1} = -Y S^T Y.
  Matrix inverse() const {
    const Eigen::Index n = modes();
    Matrix inv(2 * n, 2 * n);
    inv.topLeftCorner(n, n) = symplectic.bottomRightCorner(n, n).transpose();
    inv.topRightCorner(n, n) = -symplectic.topRightCorner(n, n).transpose();
    inv.bottomLeftCorner(n, n) = -symplectic.bottomLeftCorner(n, n).transpose();
    inv.bottomRightCorner(n, n) = symplectic.topLeftCorner(n, n).transpose();
    return inv;
  }
};

/// Normal modes of a positive-definite potential via V = O Omega^2 O^T and
/// S = (O Omega^{-1/2}) (+) (O Omega^{1/2}).
inline NormalModeBasis williamson_from_potential(const Matrix& v, double degeneracy_tol = tol::kDegeneracy) {
  if (v.rows() != v.cols()) throw DimensionError("potential matrix must be square");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(v);
  if (solver.info() != Eigen::Success) throw NumericError("eigen-decomposition of the potential failed");
  const Vector& ev = solver.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  if (ev.minCoeff() <= tol::kStability * scale)
    throw InstabilityError("potential matrix has a non-positive eigenvalue (" + std::to_string(ev.minCoeff()) +
                           "); the Hamiltonian is unstable");

  const Eigen::Index n = v.rows();
  NormalModeBasis basis;
  basis.omega = ev.cwiseSqrt();
  basis.orthogonal = solver.eigenvectors();
  const Vector root = basis.omega.cwiseSqrt();
  basis.symplectic = Matrix::Zero(2 * n, 2 * n);
  basis.symplectic.topLeftCorner(n, n) = basis.orthogonal * root.cwiseInverse().asDiagonal();
  basis.symplectic.bottomRightCorner(n, n) = basis.orthogonal * root.asDiagonal();
  basis.degeneracies = detect_degeneracies(basis.omega, degeneracy_tol);
  return basis;
}

/// max |S^T (V (+) I) S - Omega (+) Omega|.
inline double williamson_residual(const NormalModeBasis& basis, const Matrix& v) {
  const Eigen::Index n = basis.modes();
  Matrix f = Matrix::Zero(2 * n, 2 * n);
  f.topLeftCorner(n, n) = v;
  f.bottomRightCorner(n, n).setIdentity();
  Vector d(2 * n);
  d << basis.omega, basis.omega;
  return (basis.symplectic.transpose() * f * basis.symplectic - Matrix(d.asDiagonal())).cwiseAbs().maxCoeff();
}

/// 1/2 coth(Omega / 2T); exactly 1/2 at T = 0.
inline double thermal_mode_variance(double omega, double temperature) {
  if (temperature <= 0.0) return 0.5;
  const double x = omega / (2.0 * temperature);
  if (x > 40.0) return 0.5;
  return 0.5 / std::tanh(x);
}

inline Vector thermal_mode_variances(const Vector& omega, double temperature) {
  Vector r(omega.size());
  for (Eigen::Index j = 0; j < omega.size(); ++j) r[j] = thermal_mode_variance(omega[j], temperature);
  return r;
}

/// Normal-mode covariance diag(R, R) mapped back: sigma = S Sigma S^T.
inline CovarianceMatrix covariance_from_mode_variances(const NormalModeBasis& basis, const Vector& r) {
  Vector d(2 * r.size());
  d << r, r;
  const Matrix scaled = basis.symplectic * d.asDiagonal();
  return CovarianceMatrix(symmetrized(scaled * basis.symplectic.transpose()));
}

inline CovarianceMatrix thermal_covariance(const NormalModeBasis& basis, double temperature) {
  if (temperature < 0.0) throw ConfigError("temperature must be non-negative");
  return covariance_from_mode_variances(basis, thermal_mode_variances(basis.omega, temperature));
}

/// Covariance of sigma_A (x) sigma_B in the joint ordering (q_A, q_B, p_A, p_B).
inline CovarianceMatrix product_initial_state(const CovarianceMatrix& a, const CovarianceMatrix& b) {
  const Eigen::Index na = a.modes();
  const Eigen::Index nb = b.modes();
  const Eigen::Index n = na + nb;
  std::vector<Eigen::Index> ia(2 * na), ib(2 * nb);
  for (Eigen::Index i = 0; i < na; ++i) {
    ia[i] = i;
    ia[na + i] = n + i;
  }
  for (Eigen::Index j = 0; j < nb; ++j) {
    ib[j] = na + j;
    ib[nb + j] = n + na + j;
  }
  Matrix out = Matrix::Zero(2 * n, 2 * n);
  for (Eigen::Index r = 0; r < 2 * na; ++r)
    for (Eigen::Index c = 0; c < 2 * na; ++c) out(ia[r], ia[c]) = a(r, c);
  for (Eigen::Index r = 0; r < 2 * nb; ++r)
    for (Eigen::Index c = 0; c < 2 * nb; ++c) out(ib[r], ib[c]) = b(r, c);
  return CovarianceMatrix(std::move(out));
}

/// Block rotation [[cos Wt, sin Wt], [-sin Wt, cos Wt]] acting on normal coordinates.
inline Matrix normal_mode_rotation(const Vector& omega, double t) {
  const Eigen::Index n = omega.size();
  Matrix rot = Matrix::Zero(2 * n, 2 * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double c = std::cos(omega[j] * t);
    const double s = std::sin(omega[j] * t);
    rot(j, j) = c;
    rot(j, n + j) = s;
    rot(n + j, j) = -s;
    rot(n + j, n + j) = c;
  }
  return rot;
}

/// E(t) = exp(Y F t) = S R(t) S^{-1}.
inline Matrix propagator(const NormalModeBasis& basis, double t) {
  return basis.symplectic * normal_mode_rotation(basis.omega, t) * basis.inverse();
}

inline CovarianceMatrix evolve(const CovarianceMatrix& sigma0, const Matrix& e) {
  if (e.rows() != sigma0.entries().rows() || e.cols() != e.rows())
    throw DimensionError("propagator does not conform to the covariance matrix");
  return CovarianceMatrix(symmetrized(e * sigma0.entries() * e.transpose()));
}

/// Sub-block for the listed modes, keeping their q-p ordering.
inline CovarianceMatrix marginal(const CovarianceMatrix& sigma, std::span<const int> modes) {
  const Eigen::Index n = sigma.modes();
  const Eigen::Index k = static_cast<Eigen::Index>(modes.size());
  std::vector<Eigen::Index> idx(2 * k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const int m = modes[i];
    if (m < 0 || m >= n) throw ConfigError("mode index " + std::to_string(m) + " out of range");
    idx[i] = m;
    idx[k + i] = n + m;
  }
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = i + 1; j < k; ++j)
      if (modes[i] == modes[j]) throw ConfigError("duplicate mode index " + std::to_string(modes[i]));
  return CovarianceMatrix(sigma.entries()(idx, idx));
}

/// Symplectic eigenvalues (ascending, one per mode) of a positive-definite covariance.
inline Vector symplectic_eigenvalues(const CovarianceMatrix& sigma) {
  const Eigen::Index n = sigma.modes();
  Eigen::LLT<Matrix> llt(sigma.entries());
  if (llt.info() != Eigen::Success) throw NumericError("covariance matrix is not positive definite");
  const Matrix l = llt.matrixL();
  const Matrix k = l.transpose() * symplectic_form(n) * l;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(k.transpose() * k, Eigen::EigenvaluesOnly);
  const Vector& ev = solver.eigenvalues();  // each nu^2 appears twice
  Vector nu(n);
  for (Eigen::Index j = 0; j < n; ++j) nu[j] = std::sqrt(std::max(0.0, 0.5 * (ev[2 * j] + ev[2 * j + 1])));
  return nu;
}

/// Fidelity F = (tr sqrt(sqrt(r1) r2 sqrt(r1)))^2 of two zero-mean Gaussian states.
///
/// The root fidelity is (M / det(s1 + s2))^{1/4} with M = det[2 (sqrt(I + W^{-2} / 4) + I) C],
/// C = -Y (s1 + s2)^{-1} (Y / 4 + s2 Y s1) and W = C Y. W has eigenvalues +-i v, and each
/// contributes max(1, 2 (v + sqrt(v^2 - 1/4))) to M (det Y = 1 absorbs det C). For
/// near-pure states v sits at 1/2 where that factor has infinite slope, so v^2 - 1/4 is
/// taken from K = W^2 + I/4 directly. With a = s1 Y, b = s2 Y, s = a + b,
/// alpha = a^2 + I/4 and beta = b^2 + I/4:
///   K = b s^{-1} alpha + s^{-1} alpha s^{-1} (beta - b s).
/// Every term carries alpha or beta, which vanish for pure states, so no cancellation
/// against the I/4 shift occurs.
namespace detail {

// log F with F the squared fidelity; see gaussian_fidelity.
template <class Scalar>
Scalar log_gaussian_fidelity(const Matrix& s1_in, const Matrix& s2_in) {
  using M = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = s1_in.rows() / 2;
  const Eigen::Index dim = 2 * n;
  const M y = symplectic_form(n).cast<Scalar>();
  const M s1 = s1_in.cast<Scalar>();
  const M s2 = s2_in.cast<Scalar>();
  Eigen::LLT<M> llt(s1 + s2);
  if (llt.info() != Eigen::Success) throw NumericError("sigma1 + sigma2 is singular");
  const Scalar log_det_sum = Scalar(2) * llt.matrixLLT().diagonal().array().log().sum();

  // s^{-1} X = -Y (s1 + s2)^{-1} X since s = (s1 + s2) Y and Y^{-1} = -Y.
  const auto s_solve = [&](const M& x) -> M { return -y * llt.solve(x); };
  const M a = s1 * y;
  const M b = s2 * y;
  const M quarter = Scalar(0.25) * M::Identity(dim, dim);
  const M alpha = a * a + quarter;
  const M beta = b * b + quarter;
  const M p = s_solve(alpha);
  const M k = b * p + p * s_solve(beta - b * (a + b));

  Eigen::EigenSolver<M> es(k, false);
  if (es.info() != Eigen::Success) throw NumericError("eigenvalue solver failed in gaussian_fidelity");
  Scalar log_m = 0;
  for (Eigen::Index j = 0; j < dim; ++j) {
    const Scalar x = std::max(Scalar(0), Scalar(-es.eigenvalues()[j].real()));
    log_m += std::log(std::sqrt(Scalar(1) + Scalar(4) * x) + Scalar(2) * std::sqrt(x));
  }
  return Scalar(0.5) * (log_m - log_det_sum);
}

}  // namespace detail

/// log F, resolving 1 - F well below double epsilon.
inline double log_gaussian_fidelity(const CovarianceMatrix& s1, const CovarianceMatrix& s2) {
  if (s1.entries().rows() != s2.entries().rows()) throw DimensionError("fidelity of states with different mode counts");
  // Near the pure limit 1 - F falls below double resolution long before the
  // states stop differing, so small systems pay for extra precision.
  const double log_f = s1.modes() <= tol::kExtendedPrecisionModes
                           ? static_cast<double>(detail::log_gaussian_fidelity<long double>(s1.entries(), s2.entries()))
                           : detail::log_gaussian_fidelity<double>(s1.entries(), s2.entries());
  if (std::isnan(log_f)) throw NumericError("non-finite Gaussian fidelity");
  return std::min(log_f, 0.0);
}

inline double gaussian_fidelity(const CovarianceMatrix& s1, const CovarianceMatrix& s2) {
  return std::exp(log_gaussian_fidelity(s1, s2));
}

/// D = sqrt(2 - 2 sqrt(F)) from log F, without cancellation near F = 1.
inline double bures_from_log_fidelity(double log_f) { return std::sqrt(std::max(0.0, -2.0 * std::expm1(0.5 * log_f))); }

/// D = sqrt(2 - 2 sqrt(F)).
inline double bures_from_fidelity(double f) { return std::sqrt(std::max(0.0, 2.0 - 2.0 * std::sqrt(f))); }

/// F = (1 - D^2 / 2)^2.
inline double fidelity_from_bures(double d) {
  const double r = 1.0 - 0.5 * d * d;
  return r * r;
}

inline double bures_distance(const CovarianceMatrix& s1, const CovarianceMatrix& s2) {
  return bures_from_log_fidelity(log_gaussian_fidelity(s1, s2));
}

/// <H> = 1/2 tr[(V (+) I) sigma] for a zero-mean state.
inline double mean_energy(const CovarianceMatrix& sigma, const Matrix& v) {
  if (v.rows() != sigma.modes()) throw DimensionError("potential does not conform to the covariance matrix");
  return 0.5 * (v.cwiseProduct(sigma.qq()).sum() + sigma.pp().trace());
}

/// Sum_j (Omega_j / 2) coth(Omega_j / 2T).
inline double thermal_energy(const Vector& omega, double temperature) {
  double e = 0.0;
  for (Eigen::Index j = 0; j < omega.size(); ++j) e += omega[j] * thermal_mode_variance(omega[j], temperature);
  return e;
}

inline double zero_point_energy(const Vector& omega) { return 0.5 * omega.sum(); }

/// Sigma = S^{-1} sigma S^{-T}.
inline Matrix to_normal_coordinates(const NormalModeBasis& basis, const CovarianceMatrix& sigma) {
  const Matrix inv = basis.inverse();
  return symmetrized(inv * sigma.entries() * inv.transpose());
}

}  // namespace glocal
