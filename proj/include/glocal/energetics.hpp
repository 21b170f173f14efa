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

// Energy bookkeeping between the two lattices and the two-temperature-model
// diagnostics. The interaction energy is kept separate: it is never split
// between A and B.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "glocal/errors.hpp"
#include "glocal/gaussian.hpp"
#include "glocal/thermometry.hpp"
#include "glocal/tolerances.hpp"

namespace glocal {

struct EnergySplit {
  double a = 0.0;
  double b = 0.0;
  double interaction = 0.0;

  double total() const { return a + b + interaction; }
};

/// E_X = 1/2 (tr V_X sigma_qq,X + tr sigma_pp,X), E_int = tr(V_int^T sigma_qq,AB).
inline EnergySplit energy_split(const CovarianceMatrix& sigma, const Matrix& va, const Matrix& vb, const Matrix& vint) {
  const Eigen::Index na = va.rows();
  const Eigen::Index nb = vb.rows();
  if (sigma.modes() != na + nb || vint.rows() != na || vint.cols() != nb)
    throw DimensionError("energy_split blocks do not conform");
  const Eigen::Index n = na + nb;
  const Matrix& s = sigma.entries();
  EnergySplit e;
  e.a = 0.5 * (va.cwiseProduct(s.block(0, 0, na, na)).sum() + s.block(n, n, na, na).trace());
  e.b = 0.5 * (vb.cwiseProduct(s.block(na, na, nb, nb)).sum() + s.block(n + na, n + na, nb, nb).trace());
  e.interaction = vint.cwiseProduct(s.block(0, na, na, nb)).sum();
  return e;
}

/// Energy split straight from normal-mode covariances: each energy is
/// 1/2 tr(G Sigma) with G = S^T F_X S precomputed once.
class EnergyProbe {
 public:
  EnergyProbe(const NormalModeBasis& basis, const Matrix& va, const Matrix& vb, const Matrix& vint) {
    const Eigen::Index na = va.rows();
    const Eigen::Index nb = vb.rows();
    const Eigen::Index n = na + nb;
    if (basis.modes() != n) throw DimensionError("energy probe blocks do not conform");
    Matrix fa = Matrix::Zero(2 * n, 2 * n), fb = fa, fi = fa;
    fa.block(0, 0, na, na) = va;
    fa.block(n, n, na, na).setIdentity();
    fb.block(na, na, nb, nb) = vb;
    fb.block(n + na, n + na, nb, nb).setIdentity();
    fi.block(0, na, na, nb) = vint;
    fi.block(na, 0, nb, na) = vint.transpose();
    const Matrix& s = basis.symplectic;
    ga_ = s.transpose() * fa * s;
    gb_ = s.transpose() * fb * s;
    gi_ = s.transpose() * fi * s;
  }

  EnergySplit operator()(const Matrix& normal) const {
    return {0.5 * ga_.cwiseProduct(normal).sum(), 0.5 * gb_.cwiseProduct(normal).sum(),
            0.5 * gi_.cwiseProduct(normal).sum()};
  }

 private:
  Matrix ga_, gb_, gi_;
};

/// d/dt on a uniform grid: centred differences inside, second-order
/// one-sided differences at the ends.
inline std::vector<double> flows(std::span<const double> times, std::span<const double> values) {
  const std::size_t n = times.size();
  if (values.size() != n) throw DimensionError("flows: times and values differ in length");
  if (n < 3) throw ConfigError("flows need at least 3 samples");
  const double h = (times[n - 1] - times[0]) / static_cast<double>(n - 1);
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs((times[i] - times[i - 1]) - h) > 1e-9 * std::max(1.0, std::abs(h)))
      throw ConfigError("flows need a uniform time grid");
  std::vector<double> rate(n);
  rate[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h);
  rate[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * h);
  for (std::size_t i = 1; i + 1 < n; ++i) rate[i] = (values[i + 1] - values[i - 1]) / (2.0 * h);
  return rate;
}

struct EnergyLedger {
  std::vector<double> times;
  std::vector<double> e_a, e_b, e_int, e_total;
  std::vector<double> qdot_a, qdot_b, edot_int;
};

inline EnergyLedger build_ledger(std::span<const double> times, std::span<const EnergySplit> splits) {
  if (times.size() != splits.size()) throw DimensionError("ledger: times and energies differ in length");
  EnergyLedger ledger;
  ledger.times.assign(times.begin(), times.end());
  for (const EnergySplit& e : splits) {
    ledger.e_a.push_back(e.a);
    ledger.e_b.push_back(e.b);
    ledger.e_int.push_back(e.interaction);
    ledger.e_total.push_back(e.total());
  }
  if (times.size() >= 3) {
    ledger.qdot_a = flows(times, ledger.e_a);
    ledger.qdot_b = flows(times, ledger.e_b);
    ledger.edot_int = flows(times, ledger.e_int);
  }
  return ledger;
}

/// T_eq with <H_A>_Teq + <H_B>_Teq = <H_A>_TA + <H_B>_TB.
inline double predict_teq(const NormalModeBasis& a, const NormalModeBasis& b, double ta, double tb) {
  if (ta < 0.0 || tb < 0.0) throw ConfigError("temperatures must be non-negative");
  Vector all(a.modes() + b.modes());
  all << a.omega, b.omega;
  return temperature_for_excitation(all, excitation_energy(a.omega, ta) + excitation_energy(b.omega, tb));
}

struct TTMDiagnosis {
  bool degenerate = false;  // T_A = T_B throughout, J undefined
  bool monotone = false;    // |T_A - T_B| non-increasing
  std::vector<double> j;    // -d ln|T_A - T_B| / dt
  std::vector<double> k;    // J / (1/C_A + 1/C_B)
  std::vector<std::size_t> negative;  // samples with J < 0
};

/// Reverse-engineers the rate-equation conductance from sampled
/// temperature trajectories.
inline TTMDiagnosis ttm_consistency(std::span<const double> times, std::span<const double> ta,
                                    std::span<const double> tb, const std::function<double(double)>& ca,
                                    const std::function<double(double)>& cb) {
  const std::size_t n = times.size();
  if (ta.size() != n || tb.size() != n) throw DimensionError("ttm_consistency: trajectories differ in length");
  TTMDiagnosis out;
  std::vector<double> gap(n), log_gap(n);
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    gap[i] = std::abs(ta[i] - tb[i]);
    scale = std::max({scale, std::abs(ta[i]), std::abs(tb[i])});
  }
  const double floor = 1e-14 * std::max(scale, 1.0);
  if (std::all_of(gap.begin(), gap.end(), [&](double g) { return g <= floor; })) {
    out.degenerate = true;
    return out;
  }
  out.monotone = true;
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (gap[i + 1] - gap[i] > tol::kMonotoneNoise) out.monotone = false;
  for (std::size_t i = 0; i < n; ++i) log_gap[i] = std::log(std::max(gap[i], floor));
  if (n < 3) return out;
  const std::vector<double> dlog = flows(times, log_gap);
  for (std::size_t i = 0; i < n; ++i) {
    const double j = -dlog[i];
    out.j.push_back(j);
    out.k.push_back(j / (1.0 / ca(ta[i]) + 1.0 / cb(tb[i])));
    if (j < 0.0) out.negative.push_back(i);
  }
  return out;
}

}  // namespace glocal
