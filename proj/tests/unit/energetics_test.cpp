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

#include <gtest/gtest.h>

#include <cmath>

#include "glocal/dynamics.hpp"
#include "glocal/energetics.hpp"
#include "support.hpp"

namespace glocal {
namespace {

struct QuenchRun {
  testing::SystemPieces sys;
  NormalModeBasis post, basis_a, basis_b;
  CovarianceMatrix sigma0;
};

QuenchRun quench(int n, double lambda_ratio = 0.14) {
  QuenchRun r{testing::long_range_chains(n, 0.5, lambda_ratio), {}, {}, {}, CovarianceMatrix(Matrix::Identity(2, 2))};
  r.post = williamson_from_potential(r.sys.total);
  r.basis_a = williamson_from_potential(r.sys.va);
  r.basis_b = williamson_from_potential(r.sys.vb);
  r.sigma0 = product_initial_state(thermal_covariance(r.basis_a, 0.1), thermal_covariance(r.basis_b, 1.0));
  return r;
}

TEST(EnergySplit, ClosesOnTotalEnergy) {
  const QuenchRun r = quench(30);
  const QuenchDynamics dyn(r.post, r.sigma0);
  for (double t : {0.0, 7.0, 90.0}) {
    const CovarianceMatrix s = dyn.covariance(t);
    const EnergySplit e = energy_split(s, r.sys.va, r.sys.vb, r.sys.vint);
    EXPECT_NEAR(e.total() / mean_energy(s, r.sys.total), 1.0, 1e-12);
  }
}

TEST(EnergySplit, NoInteractionEnergyInitiallyOrWithoutCoupling) {
  const QuenchRun r = quench(20);
  EXPECT_EQ(energy_split(r.sigma0, r.sys.va, r.sys.vb, r.sys.vint).interaction, 0.0);
  const QuenchRun free = quench(20, 0.0);
  const QuenchDynamics dyn(free.post, free.sigma0);
  EXPECT_EQ(energy_split(dyn.covariance(40.0), free.sys.va, free.sys.vb, free.sys.vint).interaction, 0.0);
}

TEST(EnergyProbe, MatchesDirectSplit) {
  const QuenchRun r = quench(25);
  const QuenchDynamics dyn(r.post, r.sigma0);
  const EnergyProbe probe(r.post, r.sys.va, r.sys.vb, r.sys.vint);
  for (double t : {0.0, 3.0, 55.0}) {
    const EnergySplit direct = energy_split(dyn.covariance(t), r.sys.va, r.sys.vb, r.sys.vint);
    const EnergySplit fast = probe(dyn.normal_covariance(t));
    EXPECT_NEAR(fast.a, direct.a, 1e-10 * direct.total());
    EXPECT_NEAR(fast.b, direct.b, 1e-10 * direct.total());
    EXPECT_NEAR(fast.interaction, direct.interaction, 1e-10 * direct.total());
  }
}

TEST(Flows, ConstantAndPolynomialInputs) {
  std::vector<double> t, c, q;
  for (int i = 0; i < 11; ++i) {
    t.push_back(0.5 * i);
    c.push_back(3.0);
    q.push_back(t.back() * t.back());
  }
  for (double x : flows(t, c)) EXPECT_EQ(x, 0.0);
  const auto d = flows(t, q);
  for (std::size_t i = 0; i < t.size(); ++i) EXPECT_NEAR(d[i], 2 * t[i], 1e-12);
}

TEST(Flows, Validation) {
  const std::vector<double> two{0, 1}, uneven{0, 1, 3}, v3{1, 2, 3};
  EXPECT_THROW(flows(two, two), ConfigError);
  EXPECT_THROW(flows(uneven, v3), ConfigError);
  EXPECT_THROW(flows(v3, two), DimensionError);
}

TEST(Ledger, RatesCancelForConservedTotal) {
  const QuenchRun r = quench(30);
  const QuenchDynamics dyn(r.post, r.sigma0);
  const EnergyProbe probe(r.post, r.sys.va, r.sys.vb, r.sys.vint);
  std::vector<double> times;
  std::vector<EnergySplit> splits;
  for (int i = 0; i <= 200; ++i) {
    times.push_back(0.25 * i);
    splits.push_back(probe(dyn.normal_covariance(times.back())));
  }
  const EnergyLedger ledger = build_ledger(times, splits);
  const double e0 = ledger.e_total.front();
  double scale = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    EXPECT_NEAR(ledger.e_total[i] / e0, 1.0, 1e-10);
    scale = std::max(scale, std::abs(ledger.qdot_a[i]));
  }
  for (std::size_t i = 0; i < times.size(); ++i)
    EXPECT_LE(std::abs(ledger.qdot_a[i] + ledger.qdot_b[i] + ledger.edot_int[i]), 1e-8 * std::max(1.0, scale));
}

TEST(PredictTeq, EqualTemperaturesAreFixedPoint) {
  const QuenchRun r = quench(40);
  EXPECT_NEAR(predict_teq(r.basis_a, r.basis_b, 0.6, 0.6), 0.6, 1e-9);
}

TEST(PredictTeq, EquipartitionLimit) {
  const NormalModeBasis b = williamson_from_potential(build_intra_potential(LatticeSpec::chain(10, 1.0, 0.2, 1.0)).entries);
  EXPECT_NEAR(predict_teq(b, b, 1e4, 3e4) / 2e4, 1.0, 1e-6);
}

TEST(PredictTeq, MatchesDenseGridScan) {
  const QuenchRun r = quench(200);
  const double teq = predict_teq(r.basis_a, r.basis_b, 0.1, 1.0);
  const double target = thermal_energy(r.basis_a.omega, 0.1) + thermal_energy(r.basis_b.omega, 1.0);
  auto residual = [&](double t) { return thermal_energy(r.basis_a.omega, t) + thermal_energy(r.basis_b.omega, t) - target; };
  // Dense scan for the sign change, then linear interpolation in the cell.
  const int points = 200001;
  double lo = 0.1, prev = residual(lo), root = 0.0;
  for (int i = 1; i < points; ++i) {
    const double t = 0.1 + 0.9 * i / (points - 1);
    const double cur = residual(t);
    if (prev <= 0.0 && cur > 0.0) {
      root = lo + (t - lo) * (-prev) / (cur - prev);
      break;
    }
    lo = t;
    prev = cur;
  }
  EXPECT_NEAR(teq / root, 1.0, 1e-6);
  EXPECT_LE(std::abs(residual(teq)) / target, 1e-10);
}

TEST(TTM, ExponentialGapGivesConstantRate) {
  std::vector<double> t, ta, tb;
  for (int i = 0; i < 400; ++i) {
    t.push_back(0.05 * i);
    ta.push_back(0.5 + 0.25 * std::exp(-0.3 * t.back()));
    tb.push_back(0.5 - 0.25 * std::exp(-0.3 * t.back()));
  }
  const auto d = ttm_consistency(t, ta, tb, [](double) { return 2.0; }, [](double) { return 2.0; });
  EXPECT_TRUE(d.monotone);
  EXPECT_FALSE(d.degenerate);
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_NEAR(d.j[i], 0.3, 1e-10);
    EXPECT_NEAR(d.k[i], 0.3, 1e-10);
  }
  EXPECT_TRUE(d.negative.empty());
}

TEST(TTM, EqualTemperaturesAreDegenerate) {
  const std::vector<double> t{0, 1, 2, 3}, temp{0.4, 0.4, 0.4, 0.4};
  const auto d = ttm_consistency(t, temp, temp, [](double) { return 1.0; }, [](double) { return 1.0; });
  EXPECT_TRUE(d.degenerate);
  EXPECT_TRUE(d.j.empty());
}

TEST(TTM, OscillatingGapIsFlagged) {
  std::vector<double> t, ta, tb;
  for (int i = 0; i < 300; ++i) {
    t.push_back(0.1 * i);
    ta.push_back(0.5 + std::exp(-0.05 * t.back()) * (0.3 + 0.1 * std::cos(2 * t.back())));
    tb.push_back(0.5);
  }
  const auto d = ttm_consistency(t, ta, tb, [](double) { return 1.0; }, [](double) { return 1.0; });
  EXPECT_FALSE(d.monotone);
  EXPECT_FALSE(d.negative.empty());
}

TEST(TTM, RateEquationRoundTrip) {
  const Vector wa = williamson_from_potential(build_intra_potential(LatticeSpec::chain(20, 1.55, 0.38, 0.5)).entries).omega;
  const Vector wb = williamson_from_potential(build_intra_potential(LatticeSpec::chain(20, 1.5, 0.43, 0.5)).entries).omega;
  auto ca = [&](double t) { return heat_capacity(wa, t); };
  auto cb = [&](double t) { return heat_capacity(wb, t); };
  auto k = [](double a, double b) { return 0.02 * (1.0 + a + 0.5 * b); };
  const auto traj = testing::integrate_two_temperature(0.3, 1.0, 0.05, 800, 50, k, ca, cb);
  const auto d = ttm_consistency(traj.times, traj.ta, traj.tb, ca, cb);
  EXPECT_TRUE(d.monotone);
  double worst = 0.0;
  for (std::size_t i = 0; i < traj.k.size(); ++i) worst = std::max(worst, std::abs(d.k[i] / traj.k[i] - 1.0));
  EXPECT_LE(worst, 1e-4);
}

}  // namespace
}  // namespace glocal
