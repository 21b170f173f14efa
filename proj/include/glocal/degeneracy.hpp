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

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "glocal/tolerances.hpp"

namespace glocal {

using Partition = std::vector<std::vector<int>>;

/// Groups indices of an ascending frequency list into blocks of equal
/// frequency: consecutive entries closer than tol * max(omega) are chained.
inline Partition detect_degeneracies(const Eigen::VectorXd& omega, double tol = tol::kDegeneracy) {
  Partition blocks;
  const Eigen::Index n = omega.size();
  if (n == 0) return blocks;
  const double scale = omega.cwiseAbs().maxCoeff();
  blocks.push_back({0});
  for (Eigen::Index k = 1; k < n; ++k) {
    if (std::abs(omega[k] - omega[k - 1]) <= tol * scale)
      blocks.back().push_back(static_cast<int>(k));
    else
      blocks.push_back({static_cast<int>(k)});
  }
  return blocks;
}

inline bool has_degeneracy(const Partition& p) {
  for (const auto& block : p)
    if (block.size() > 1) return true;
  return false;
}

}  // namespace glocal
