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

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "glocal/dynamics.hpp"
#include "glocal/errors.hpp"
#include "glocal/gaussian.hpp"
#include "glocal/tolerances.hpp"

namespace glocal {

struct EquilibrationReport {
  std::vector<double> times;
  std::vector<double> distances;
  double epsilon = 0.0;
  std::size_t sustain_window = tol::kSustainWindow;
  std::optional<double> t_eq;
  std::optional<double> t_rec;
  double window_fraction = 0.0;  // share of samples with D <= epsilon
};

/// D[rho_s(t), rho_s^GGE] along the time grid.
inline std::vector<double> distance_trajectory(const QuenchDynamics& dynamics, const CovarianceMatrix& gge_cov,
                                               std::span<const int> subsystem, std::span<const double> times) {
  if (!std::is_sorted(times.begin(), times.end())) throw ConfigError("time grid must be ascending");
  const CovarianceMatrix target = marginal(gge_cov, subsystem);
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(bures_distance(dynamics.marginal(t, subsystem), target));
  return out;
}

/// t_eq: first sample from which D stays <= epsilon for `sustain` samples.
/// t_rec: first later sample from which D stays > epsilon for `sustain` samples.
inline EquilibrationReport detect_equilibration(std::span<const double> distances, std::span<const double> times,
                                                double epsilon, std::size_t sustain = tol::kSustainWindow) {
  if (!(epsilon > 0.0)) throw ConfigError("equilibration epsilon must be positive");
  if (sustain < 1) throw ConfigError("sustain window must be at least one sample");
  if (distances.size() != times.size()) throw DimensionError("distances and times differ in length");
  EquilibrationReport report;
  report.times.assign(times.begin(), times.end());
  report.distances.assign(distances.begin(), distances.end());
  report.epsilon = epsilon;
  report.sustain_window = sustain;
  const std::size_t n = distances.size();
  if (n == 0) return report;
  const std::size_t w = std::min(sustain, n);

  auto run_from = [&](std::size_t k, auto&& pred) {
    if (k + w > n) return false;
    for (std::size_t i = k; i < k + w; ++i)
      if (!pred(distances[i])) return false;
    return true;
  };
  auto inside = [&](double d) { return d <= epsilon; };
  auto outside = [&](double d) { return d > epsilon; };

  std::size_t k_eq = n;
  for (std::size_t k = 0; k < n; ++k)
    if (run_from(k, inside)) {
      k_eq = k;
      break;
    }
  if (k_eq < n) {
    report.t_eq = times[k_eq];
    for (std::size_t k = k_eq + 1; k < n; ++k)
      if (run_from(k, outside)) {
        report.t_rec = times[k];
        break;
      }
  }
  const auto in_band = std::count_if(distances.begin(), distances.end(), inside);
  report.window_fraction = static_cast<double>(in_band) / static_cast<double>(n);
  return report;
}

}  // namespace glocal
