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

// Shared fixtures for unit and acceptance tests.

#pragma once

#include <random>
#include <utility>
#include <vector>

#include "glocal/gaussian.hpp"
#include "glocal/lattice.hpp"

namespace glocal::testing {

struct SystemPieces {
  LatticeSpec a, b;
  CouplingTopology topo;
  Matrix va, vb, vint, total;
};

inline SystemPieces assemble(const LatticeSpec& a, const LatticeSpec& b, const CouplingTopology& topo) {
  SystemPieces s{a, b, topo, {}, {}, {}, {}};
  const auto pa = build_intra_potential(a, 0);
  const auto pb = build_intra_potential(b, 1);
  s.va = pa.entries;
  s.vb = pb.entries;
  s.vint = build_interaction_potential(a, b, topo);
  s.total = assemble_total(pa, pb, s.vint).entries;
  return s;
}

/// Two 1D chains with long-range couplings, FB-coupled: the reference
/// thermalization setup used throughout the tests.
inline SystemPieces long_range_chains(int n = 200, double alpha = 0.5, double lambda_ratio = 0.14,
                                      CouplingKind kind = CouplingKind::FullBody) {
  const double wa = 1.55, wb = 1.5;
  return assemble(LatticeSpec::chain(n, wa, 0.16 * wa * wa, alpha), LatticeSpec::chain(n, wb, 0.19 * wb * wb, alpha),
                  {kind, lambda_ratio * wa * wb});
}

/// Random stable configuration: 1D or 2D, EE or FB, alpha from the usual set.
inline SystemPieces random_system(std::mt19937& rng, int max_sites) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double alphas[] = {0.5, 1.0, 1.75, kNearestNeighbor};
  while (true) {
    const bool two_d = u(rng) < 0.5;
    LatticeSpec a, b;
    const double alpha = alphas[static_cast<int>(u(rng) * 4) % 4];
    const double wa = 1.0 + u(rng), wb = 1.0 + u(rng);
    const double ga = (0.3 * u(rng) - 0.05) * wa * wa, gb = (0.3 * u(rng) - 0.05) * wb * wb;
    if (two_d) {
      const int side = std::max(2, static_cast<int>(std::sqrt(static_cast<double>(max_sites)) * (0.4 + 0.6 * u(rng))));
      const int rows = std::max(2, side - static_cast<int>(2 * u(rng)));
      a = LatticeSpec::square(rows, side, wa, ga, alpha);
      b = LatticeSpec::square(rows, side, wb, gb, alpha);
    } else {
      const int n = std::max(2, static_cast<int>(max_sites * (0.2 + 0.8 * u(rng))));
      a = LatticeSpec::chain(n, wa, ga, alpha);
      b = LatticeSpec::chain(n, wb, gb, alpha);
    }
    const CouplingKind kind = u(rng) < 0.5 ? CouplingKind::EdgeEdge : CouplingKind::FullBody;
    SystemPieces s = assemble(a, b, {kind, 0.25 * u(rng) * wa * wb});
    if (validate_stability(s.total) > 0.05) return s;
  }
}

/// exp(M) by scaling and squaring of a Taylor series; independent of any
/// normal-mode machinery.
inline Matrix taylor_expm(const Matrix& m) {
  const double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::pow(2.0, squarings) > 0.25) ++squarings;
  const Matrix x = m / std::pow(2.0, squarings);
  Matrix term = Matrix::Identity(m.rows(), m.cols());
  Matrix sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * x / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

/// Y (V + I): generator of the classical flow, x' = Y F x.
inline Matrix flow_generator(const Matrix& v) {
  const Eigen::Index n = v.rows();
  Matrix g = Matrix::Zero(2 * n, 2 * n);
  g.topRightCorner(n, n).setIdentity();
  g.bottomLeftCorner(n, n) = -v;
  return g;
}

inline double coth(double x) { return std::cosh(x) / std::sinh(x); }

struct TwoTemperatureTrajectory {
  std::vector<double> times, ta, tb, k;
};

/// Integrates C_A dT_A/dt = -k (T_A - T_B), C_B dT_B/dt = k (T_A - T_B) by
/// classical RK4 with `substeps` steps per output sample.
template <class Conductance, class CapA, class CapB>
TwoTemperatureTrajectory integrate_two_temperature(double ta, double tb, double dt, int samples, int substeps,
                                                   Conductance&& k, CapA&& ca, CapB&& cb) {
  TwoTemperatureTrajectory out;
  auto rhs = [&](double a, double b) {
    const double flow = k(a, b) * (a - b);
    return std::pair{-flow / ca(a), flow / cb(b)};
  };
  const double h = dt / substeps;
  for (int i = 0; i < samples; ++i) {
    out.times.push_back(i * dt);
    out.ta.push_back(ta);
    out.tb.push_back(tb);
    out.k.push_back(k(ta, tb));
    for (int s = 0; s < substeps; ++s) {
      const auto [a1, b1] = rhs(ta, tb);
      const auto [a2, b2] = rhs(ta + 0.5 * h * a1, tb + 0.5 * h * b1);
      const auto [a3, b3] = rhs(ta + 0.5 * h * a2, tb + 0.5 * h * b2);
      const auto [a4, b4] = rhs(ta + h * a3, tb + h * b3);
      ta += h / 6 * (a1 + 2 * a2 + 2 * a3 + a4);
      tb += h / 6 * (b1 + 2 * b2 + 2 * b3 + b4);
    }
  }
  return out;
}

}  // namespace glocal::testing
