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
#include <optional>

#include "glocal/dynamics.hpp"
#include "glocal/equilibration.hpp"
#include "glocal/gge.hpp"
#include "support.hpp"

namespace glocal {
namespace {

std::vector<double> grid(double t_max, int samples) {
  std::vector<double> t(samples);
  for (int i = 0; i < samples; ++i) t[i] = t_max * i / (samples - 1);
  return t;
}

TEST(DetectEquilibration, AlwaysInsideBand) {
  const auto t = grid(10, 50);
  const std::vector<double> d(50, 0.001);
  const auto r = detect_equilibration(d, t, 0.02, 16);
  ASSERT_TRUE(r.t_eq.has_value());
  EXPECT_EQ(*r.t_eq, 0.0);
  EXPECT_FALSE(r.t_rec.has_value());
  EXPECT_DOUBLE_EQ(r.window_fraction, 1.0);
}

TEST(DetectEquilibration, MonotoneCrossing) {
  const auto t = grid(10, 101);
  std::vector<double> d(101);
  for (int i = 0; i < 101; ++i) d[i] = 0.5 * std::exp(-0.5 * t[i]);
  const auto r = detect_equilibration(d, t, 0.02, 16);
  std::size_t k = 0;
  while (d[k] > 0.02) ++k;
  ASSERT_TRUE(r.t_eq.has_value());
  EXPECT_EQ(*r.t_eq, t[k]);
}

TEST(DetectEquilibration, NeverEquilibrated) {
  const auto t = grid(10, 40);
  const std::vector<double> d(40, 0.3);
  const auto r = detect_equilibration(d, t, 0.02, 16);
  EXPECT_FALSE(r.t_eq.has_value());
  EXPECT_FALSE(r.t_rec.has_value());
  EXPECT_EQ(r.window_fraction, 0.0);
}

TEST(DetectEquilibration, ShortDipIsIgnoredAndRecurrenceFound) {
  const auto t = grid(99, 100);
  std::vector<double> d(100, 0.1);
  for (int i = 10; i < 14; ++i) d[i] = 0.0;  // shorter than the sustain window
  for (int i = 30; i < 70; ++i) d[i] = 0.01;
  const auto r = detect_equilibration(d, t, 0.02, 16);
  ASSERT_TRUE(r.t_eq && r.t_rec);
  EXPECT_EQ(*r.t_eq, 30.0);
  EXPECT_EQ(*r.t_rec, 70.0);
  EXPECT_LT(*r.t_eq, *r.t_rec);
}

TEST(DetectEquilibration, RejectsBadArguments) {
  const std::vector<double> d{0.1, 0.2}, t{0, 1}, t3{0, 1, 2};
  EXPECT_THROW(detect_equilibration(d, t, 0.0, 1), ConfigError);
  EXPECT_THROW(detect_equilibration(d, t, 0.1, 0), ConfigError);
  EXPECT_THROW(detect_equilibration(d, t3, 0.1, 1), DimensionError);
}

// Damped oscillation above a decaying envelope; smooth, so refinement is
// meaningful.
double smooth_distance(double t) { return 0.01 + 0.2 * std::exp(-t / 15) * (1.2 + std::cos(t)); }

TEST(DetectEquilibration, GridRefinementMovesEntryByAtMostOneStep) {
  const auto coarse_t = grid(200, 401), fine_t = grid(200, 801);
  std::vector<double> coarse, fine;
  for (double t : coarse_t) coarse.push_back(smooth_distance(t));
  for (double t : fine_t) fine.push_back(smooth_distance(t));
  const auto a = detect_equilibration(coarse, coarse_t, 0.02, 16);
  const auto b = detect_equilibration(fine, fine_t, 0.02, 32);
  ASSERT_TRUE(a.t_eq && b.t_eq);
  EXPECT_LE(std::abs(*a.t_eq - *b.t_eq), coarse_t[1] - coarse_t[0] + 1e-12);
}

TEST(DetectEquilibration, LargerEpsilonNeverEntersLater) {
  const auto t = grid(200, 401);
  std::vector<double> d;
  for (double x : t) d.push_back(smooth_distance(x));
  std::optional<double> previous;
  for (double eps : {0.015, 0.02, 0.03, 0.05, 0.1, 0.3}) {
    const auto r = detect_equilibration(d, t, eps, 16);
    ASSERT_TRUE(r.t_eq.has_value());
    if (previous) EXPECT_LE(*r.t_eq, *previous);
    previous = r.t_eq;
  }
}

TEST(DetectEquilibration, ReportIsConsistentInsideWindow) {
  const auto t = grid(200, 401);
  std::vector<double> d;
  for (double x : t) d.push_back(smooth_distance(x));
  const auto r = detect_equilibration(d, t, 0.02, 16);
  ASSERT_TRUE(r.t_eq.has_value());
  const double end = r.t_rec.value_or(t.back());
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= *r.t_eq && t[i] < end) EXPECT_LE(d[i], 0.02) << "t = " << t[i];
}

TEST(DistanceTrajectory, StartingInTheGGEGivesZero) {
  const auto sys = testing::long_range_chains(12);
  const NormalModeBasis post = williamson_from_potential(sys.total);
  const CovarianceMatrix s0 = product_initial_state(thermal_covariance(williamson_from_potential(sys.va), 0.1),
                                                    thermal_covariance(williamson_from_potential(sys.vb), 1.0));
  const CovarianceMatrix gge = gge_covariance(build_gge(post, s0));
  const QuenchDynamics dyn(post, gge);
  const std::vector<int> pair{5, 6};
  for (double d : distance_trajectory(dyn, gge, pair, grid(50, 11))) EXPECT_LE(d, 1e-7);
}

TEST(DistanceTrajectory, UncoupledGibbsStatesAreStationary) {
  const auto sys = testing::long_range_chains(12, 0.5, 0.0);
  const NormalModeBasis post = williamson_from_potential(sys.total);
  const CovarianceMatrix s0 = product_initial_state(thermal_covariance(williamson_from_potential(sys.va), 0.1),
                                                    thermal_covariance(williamson_from_potential(sys.vb), 1.0));
  const CovarianceMatrix gge = gge_covariance(build_gge(post, s0));
  const QuenchDynamics dyn(post, s0);
  const std::vector<int> pair{5, 6};
  const auto d = distance_trajectory(dyn, gge, pair, grid(50, 11));
  for (double x : d) EXPECT_NEAR(x, d.front(), 1e-7);
}

TEST(DistanceTrajectory, RejectsUnsortedTimes) {
  const auto sys = testing::long_range_chains(6);
  const NormalModeBasis post = williamson_from_potential(sys.total);
  const CovarianceMatrix s0 = thermal_covariance(post, 1.0);
  const QuenchDynamics dyn(post, s0);
  const std::vector<int> site{1};
  const std::vector<double> times{1.0, 0.5};
  EXPECT_THROW(distance_trajectory(dyn, s0, site, times), ConfigError);
}

}  // namespace
}  // namespace glocal
