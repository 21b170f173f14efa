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

// g-local thermometry: fitting the marginal of a global Gibbs state (the
// mean-force state) to a subsystem, global Gibbs fits, canonical
// temperatures and heat capacities.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "glocal/errors.hpp"
#include "glocal/gaussian.hpp"
#include "glocal/lattice.hpp"
#include "glocal/scalar_search.hpp"
#include "glocal/tolerances.hpp"

namespace glocal {

struct TemperatureBracket {
  double lo = 1e-3;
  double hi = 1e3;

  /// [1e-3, 1e3] * reference temperature.
  static TemperatureBracket around(double reference) { return {1e-3 * reference, 1e3 * reference}; }

  void validate() const {
    if (!(lo > 0.0) || !(hi > lo)) throw ConfigError("temperature bracket must satisfy 0 < lo < hi");
  }
};

struct ThermometryReading {
  double t_eff = 0.0;
  double d_min = 0.0;
  double f_max = 0.0;
  int iterations = 0;
  TemperatureBracket bracket;
  bool pinned = false;  // optimum on a bracket end; widen and retry
};

/// Mean-force states of one lattice. Holds the normal modes of H_X so that
/// tau_s^MF(T) for a few sites costs O(|s|^2 N) per temperature.
class MeanForceModel {
 public:
  explicit MeanForceModel(const Matrix& potential) : basis_(williamson_from_potential(potential)) {}
  explicit MeanForceModel(NormalModeBasis basis) : basis_(std::move(basis)) {}

  const NormalModeBasis& basis() const { return basis_; }
  Eigen::Index sites() const { return basis_.modes(); }

  /// Marginal of the global Gibbs state at temperature T on `sites`.
  CovarianceMatrix covariance(double temperature, std::span<const int> sites) const {
    const Eigen::Index n = basis_.modes();
    const Eigen::Index k = static_cast<Eigen::Index>(sites.size());
    std::vector<Eigen::Index> rows(2 * k);
    for (Eigen::Index i = 0; i < k; ++i) {
      if (sites[i] < 0 || sites[i] >= n) throw ConfigError("site index " + std::to_string(sites[i]) + " out of range");
      rows[i] = sites[i];
      rows[k + i] = n + sites[i];
    }
    const Matrix s_rows = basis_.symplectic(rows, Eigen::all);
    const Vector r = thermal_mode_variances(basis_.omega, temperature);
    Vector d(2 * n);
    d << r, r;
    return CovarianceMatrix(symmetrized(s_rows * d.asDiagonal() * s_rows.transpose()));
  }

 private:
  NormalModeBasis basis_;
};

/// tau_s^MF(T) in covariance form.
inline CovarianceMatrix mean_force_covariance(const Matrix& potential, double temperature, std::span<const int> sites) {
  if (temperature < 0.0) throw ConfigError("temperature must be non-negative");
  return MeanForceModel(potential).covariance(temperature, sites);
}

namespace detail {

// Maximises log_fidelity(T) over log T; f_max and d_min obey F = (1 - D^2/2)^2.
template <class LogFidelity>
ThermometryReading fit_temperature(LogFidelity&& log_fidelity, const TemperatureBracket& bracket) {
  bracket.validate();
  auto objective = [&](double log_t) { return -log_fidelity(std::exp(log_t)); };
  const ScannedMinimum m = scan_then_minimize(objective, std::log(bracket.lo), std::log(bracket.hi),
                                              tol::kPrescanPoints, tol::kLogTemperature);
  ThermometryReading reading;
  reading.t_eff = std::exp(m.minimum.x);
  reading.d_min = bures_from_log_fidelity(-m.minimum.value);
  reading.f_max = fidelity_from_bures(reading.d_min);
  reading.iterations = m.minimum.iterations;
  reading.bracket = bracket;
  reading.pinned = m.pinned;
  return reading;
}

}  // namespace detail

/// T_eff = argmin_T D[sigma_s, tau_s^MF(T)].
inline ThermometryReading estimate_t_eff(const CovarianceMatrix& sigma_s, const MeanForceModel& model,
                                         std::span<const int> sites, const TemperatureBracket& bracket) {
  if (sigma_s.modes() != static_cast<Eigen::Index>(sites.size()))
    throw DimensionError("subsystem covariance does not match the site list");
  return detail::fit_temperature(
      [&](double t) { return log_gaussian_fidelity(sigma_s, model.covariance(t, sites)); }, bracket);
}

inline ThermometryReading estimate_t_eff(const CovarianceMatrix& sigma_s, const Matrix& potential,
                                         std::span<const int> sites, const TemperatureBracket& bracket) {
  return estimate_t_eff(sigma_s, MeanForceModel(potential), sites, bracket);
}

/// Closest global Gibbs state of H_X to sigma_X. Works in the normal modes
/// of H_X, where every Gibbs state is diagonal.
inline ThermometryReading global_thermality(const CovarianceMatrix& sigma_x, const MeanForceModel& model,
                                            const TemperatureBracket& bracket) {
  if (sigma_x.modes() != model.sites()) throw DimensionError("state does not match the lattice");
  const CovarianceMatrix normal(to_normal_coordinates(model.basis(), sigma_x));
  const Vector& omega = model.basis().omega;
  return detail::fit_temperature(
      [&](double t) {
        const Vector r = thermal_mode_variances(omega, t);
        Vector d(2 * r.size());
        d << r, r;
        return log_gaussian_fidelity(normal, CovarianceMatrix(Matrix(d.asDiagonal())));
      },
      bracket);
}

/// Thermal part of the Gibbs energy, sum_j Omega_j / (e^{Omega_j / T} - 1).
/// Kept apart from the zero-point term so that low temperatures do not
/// drown in cancellation.
inline double excitation_energy(const Vector& omega, double temperature) {
  if (temperature <= 0.0) return 0.0;
  double e = 0.0;
  for (Eigen::Index j = 0; j < omega.size(); ++j) {
    const double x = omega[j] / temperature;
    if (x < 700.0) e += omega[j] / std::expm1(x);
  }
  return e;
}

/// Temperature whose Gibbs state of modes `omega` carries thermal energy
/// `excitation` above the zero-point value; zero maps to T = 0.
inline double temperature_for_excitation(const Vector& omega, double excitation) {
  if (excitation < 0.0) throw NumericError("energy below the zero-point energy");
  if (excitation == 0.0) return 0.0;
  const double u = excitation;
  double hi = std::max(u / static_cast<double>(omega.size()), 1e-300);
  while (excitation_energy(omega, hi) < u) hi *= 2.0;
  double lo = hi;
  for (int i = 0; i < 4000 && excitation_energy(omega, lo) >= u; ++i) lo *= 0.5;
  auto residual = [&](double log_t) { return excitation_energy(omega, std::exp(log_t)) - u; };
  auto done = [&](double a, double b) {
    const double mid = std::exp(0.5 * (a + b));
    return std::abs(excitation_energy(omega, mid) - u) <= tol::kEnergyRelative * u || b - a < 1e-15;
  };
  return std::exp(bisect_increasing(residual, std::log(lo), std::log(hi), done));
}

/// Temperature whose Gibbs state of modes `omega` has mean energy `energy`.
/// Energy at the zero-point value maps to T = 0.
inline double temperature_for_energy(const Vector& omega, double energy) {
  const double e0 = zero_point_energy(omega);
  if (energy < e0 * (1.0 - 1e-12)) throw NumericError("energy below the zero-point energy");
  const double u = energy - e0;
  return u <= 1e-14 * e0 ? 0.0 : temperature_for_excitation(omega, u);
}

/// T with <H_X>_T = tr[H_X rho_X].
inline double canonical_t_eff(const CovarianceMatrix& sigma_x, const Matrix& potential, const NormalModeBasis& basis) {
  return temperature_for_energy(basis.omega, mean_energy(sigma_x, potential));
}

inline double canonical_t_eff(const CovarianceMatrix& sigma_x, const Matrix& potential) {
  return canonical_t_eff(sigma_x, potential, williamson_from_potential(potential));
}

/// dE/dT = sum_j (Omega_j / 2T)^2 / sinh^2(Omega_j / 2T); zero at T = 0.
inline double heat_capacity(const Vector& omega, double temperature) {
  if (temperature <= 0.0) return 0.0;
  double c = 0.0;
  for (Eigen::Index j = 0; j < omega.size(); ++j) {
    const double x = omega[j] / (2.0 * temperature);
    if (x > 350.0) continue;
    const double sh = std::sinh(x);
    c += x * x / (sh * sh);
  }
  return c;
}

inline double heat_capacity(const NormalModeBasis& basis, double temperature) {
  return heat_capacity(basis.omega, temperature);
}

// Subsystem families ------------------------------------------------------

using SiteList = std::vector<int>;

/// Contiguous run of `size` sites centred in the lattice (1D), or in the
/// middle row (2D).
inline SiteList centered_window(const LatticeSpec& spec, int size) {
  if (size < 1 || size > spec.cols) throw ConfigError("window size " + std::to_string(size) + " does not fit the lattice");
  const int row = spec.rows / 2;
  const int start = (spec.cols - size) / 2;
  SiteList s;
  for (int c = start; c < start + size; ++c) s.push_back(spec.index(row, c));
  return s;
}

/// Every contiguous run of `size` sites along a row, row by row.
inline std::vector<SiteList> sliding_windows(const LatticeSpec& spec, int size) {
  if (size < 1 || size > spec.cols) throw ConfigError("window size " + std::to_string(size) + " does not fit the lattice");
  std::vector<SiteList> family;
  for (int r = 0; r < spec.rows; ++r)
    for (int c = 0; c + size <= spec.cols; ++c) {
      SiteList s;
      for (int k = 0; k < size; ++k) s.push_back(spec.index(r, c + k));
      family.push_back(std::move(s));
    }
  return family;
}

/// Centred windows of sizes 1..max_size.
inline std::vector<SiteList> growing_windows(const LatticeSpec& spec, int max_size) {
  std::vector<SiteList> family;
  for (int k = 1; k <= max_size; ++k) family.push_back(centered_window(spec, k));
  return family;
}

/// One reading per subsystem; `sigma_x` is the full state of the lattice.
inline std::vector<ThermometryReading> profile_scan(const CovarianceMatrix& sigma_x, const MeanForceModel& model,
                                                    const std::vector<SiteList>& family,
                                                    const TemperatureBracket& bracket) {
  std::vector<ThermometryReading> out;
  out.reserve(family.size());
  for (const SiteList& s : family) out.push_back(estimate_t_eff(marginal(sigma_x, s), model, s, bracket));
  return out;
}

}  // namespace glocal
