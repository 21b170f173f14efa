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

// Generalized Gibbs ensemble of the post-quench Hamiltonian.
//
// The conserved charges are the normal-mode energies
// h_k = Omega_k (Q_k^2 + P_k^2) / 2 and, inside every block of degenerate
// frequencies, the pair charges Omega (Q_k Q_j + P_k P_j) and
// Omega (Q_k P_j - Q_j P_k). Within a degenerate block the normal modes are
// rotated so that the initial state has <a_k^dag a_j> diagonal; this zeroes
// both families of pair charges, and the GGE is again a product over modes.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "glocal/degeneracy.hpp"
#include "glocal/errors.hpp"
#include "glocal/gaussian.hpp"
#include "glocal/tolerances.hpp"

namespace glocal {

/// <h_k> = (Omega_k / 2) (Sigma_QQ[k,k] + Sigma_PP[k,k]).
inline Vector mode_energies(const NormalModeBasis& basis, const CovarianceMatrix& sigma) {
  const Matrix normal = to_normal_coordinates(basis, sigma);
  const Eigen::Index n = basis.modes();
  Vector h(n);
  for (Eigen::Index k = 0; k < n; ++k) h[k] = 0.5 * basis.omega[k] * (normal(k, k) + normal(n + k, n + k));
  return h;
}

/// Largest |<I_kj>| over pairs in degenerate blocks, including the
/// antisymmetric partners Omega (Q_k P_j - Q_j P_k).
inline double max_pair_charge(const NormalModeBasis& basis, const CovarianceMatrix& sigma) {
  const Matrix normal = to_normal_coordinates(basis, sigma);
  const Eigen::Index n = basis.modes();
  double worst = 0.0;
  for (const auto& block : basis.degeneracies)
    for (std::size_t a = 0; a < block.size(); ++a)
      for (std::size_t b = a + 1; b < block.size(); ++b) {
        const int k = block[a], j = block[b];
        const double w = basis.omega[k];
        const double sym = w * (normal(k, j) + normal(n + k, n + j));
        const double anti = w * (normal(k, n + j) - normal(j, n + k));
        worst = std::max({worst, std::abs(sym), std::abs(anti)});
      }
  return worst;
}

/// Rotates each degenerate block of normal modes so that sigma0 carries no
/// pair charges. Nondegenerate spectra come back unchanged.
inline NormalModeBasis rotate_degenerate_modes(const NormalModeBasis& basis, const CovarianceMatrix& sigma0) {
  if (!has_degeneracy(basis.degeneracies)) return basis;
  const Matrix normal = to_normal_coordinates(basis, sigma0);
  const Eigen::Index n = basis.modes();
  NormalModeBasis out = basis;
  for (const auto& block : basis.degeneracies) {
    const Eigen::Index m = static_cast<Eigen::Index>(block.size());
    if (m < 2) continue;
    // H_kj = <a_k^dag a_j> up to a multiple of the identity, a = (Q + iP)/sqrt 2.
    Eigen::MatrixXcd h(m, m);
    for (Eigen::Index r = 0; r < m; ++r)
      for (Eigen::Index c = 0; c < m; ++c) {
        const int k = block[r], j = block[c];
        const double re = 0.5 * (normal(k, j) + normal(n + k, n + j));
        const double im = 0.5 * (normal(k, n + j) - normal(j, n + k));
        h(r, c) = {re, im};
      }
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale)
      throw NumericError("pair-charge matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(0.5 * (h + h.adjoint()));
    if (solver.info() != Eigen::Success) throw NumericError("eigen-decomposition of a degenerate block failed");
    const Matrix ur = solver.eigenvectors().real();
    const Matrix ui = solver.eigenvectors().imag();

    // New modes a~ = U^T a, i.e. Q~ = Ur^T Q - Ui^T P, P~ = Ui^T Q + Ur^T P.
    // With x = S X = S R^T X~ the affected columns of S become
    // S_Q Ur - S_P Ui and S_Q Ui + S_P Ur.
    std::vector<Eigen::Index> qcols(m), pcols(m);
    for (Eigen::Index r = 0; r < m; ++r) {
      qcols[r] = block[r];
      pcols[r] = n + block[r];
    }
    const Matrix sq = basis.symplectic(Eigen::all, qcols);
    const Matrix sp = basis.symplectic(Eigen::all, pcols);
    out.symplectic(Eigen::all, qcols) = sq * ur - sp * ui;
    out.symplectic(Eigen::all, pcols) = sq * ui + sp * ur;
  }
  return out;
}

struct GeneralizedTemperatures {
  Vector beta;
  Vector mode_energy;
  std::vector<int> capped;  // modes whose beta hit the vacuum cap
};

/// beta_k = (2 / Omega_k) artanh(Omega_k / (2 <h_k>)).
inline GeneralizedTemperatures generalized_temperatures(const NormalModeBasis& basis, const CovarianceMatrix& sigma0) {
  GeneralizedTemperatures out;
  out.mode_energy = mode_energies(basis, sigma0);
  const Eigen::Index n = basis.modes();
  out.beta.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double w = basis.omega[k];
    const double h = out.mode_energy[k];
    const double excess = h - 0.5 * w;
    if (excess < -tol::kVacuumSaturation * 0.5 * w - 1e-14)
      throw NumericError("mode " + std::to_string(k) + " has energy below its zero-point value");
    if (excess <= tol::kVacuumSaturation * 0.5 * w) {
      out.beta[k] = tol::kBetaCap / w;
      out.capped.push_back(static_cast<int>(k));
      continue;
    }
    out.beta[k] = 2.0 / w * std::atanh(w / (2.0 * h));
  }
  return out;
}

struct GGESpec {
  NormalModeBasis basis;  // rotated within degenerate blocks
  Vector beta;
  Vector mode_energy;
  std::vector<int> capped;
  double charge_residual = 0.0;  // max |<I~_kj>| of the initial state
  double degeneracy_tolerance = tol::kDegeneracy;
};

/// GGE of the post-quench Hamiltonian for initial state sigma0.
inline GGESpec build_gge(const NormalModeBasis& post_quench, const CovarianceMatrix& sigma0,
                         double degeneracy_tol = tol::kDegeneracy) {
  NormalModeBasis basis = post_quench;
  basis.degeneracies = detect_degeneracies(basis.omega, degeneracy_tol);
  GGESpec spec;
  spec.basis = rotate_degenerate_modes(basis, sigma0);
  GeneralizedTemperatures temps = generalized_temperatures(spec.basis, sigma0);
  spec.beta = std::move(temps.beta);
  spec.mode_energy = std::move(temps.mode_energy);
  spec.capped = std::move(temps.capped);
  spec.charge_residual = max_pair_charge(spec.basis, sigma0);
  spec.degeneracy_tolerance = degeneracy_tol;
  return spec;
}

/// Normal-mode variances 1/2 coth(beta_k Omega_k / 2) mapped back through S.
inline CovarianceMatrix gge_covariance(const GGESpec& spec) {
  const Eigen::Index n = spec.basis.modes();
  Vector r(n);
  for (Eigen::Index k = 0; k < n; ++k) r[k] = thermal_mode_variance(spec.basis.omega[k], 1.0 / spec.beta[k]);
  return covariance_from_mode_variances(spec.basis, r);
}

}  // namespace glocal
