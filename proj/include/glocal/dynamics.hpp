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

// Time evolution after the quench, carried out in the normal modes of the
// post-quench Hamiltonian: Sigma(t) = R(t) Sigma(0) R(t)^T is an O(N^2)
// elementwise update, and physical covariances are mapped back only for the
// rows that are asked for.

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

#include "glocal/gaussian.hpp"

namespace glocal {

class QuenchDynamics {
 public:
  QuenchDynamics(NormalModeBasis post_quench, const CovarianceMatrix& initial)
      : basis_(std::move(post_quench)), normal0_(to_normal_coordinates(basis_, initial)) {
    if (initial.modes() != basis_.modes()) throw DimensionError("initial state does not match the Hamiltonian");
  }

  const NormalModeBasis& basis() const { return basis_; }
  const Matrix& initial_normal() const { return normal0_; }
  Eigen::Index modes() const { return basis_.modes(); }

  /// Normal-mode covariance at time t.
  Matrix normal_covariance(double t) const {
    const Eigen::Index n = modes();
    const Eigen::ArrayXd c = (basis_.omega * t).array().cos();
    const Eigen::ArrayXd s = (basis_.omega * t).array().sin();
    const Eigen::ArrayXXd cc = c.matrix() * c.matrix().transpose();
    const Eigen::ArrayXXd cs = c.matrix() * s.matrix().transpose();
    const Eigen::ArrayXXd ss = s.matrix() * s.matrix().transpose();
    const Eigen::ArrayXXd a = normal0_.topLeftCorner(n, n).array();
    const Eigen::ArrayXXd b = normal0_.topRightCorner(n, n).array();
    const Eigen::ArrayXXd bt = normal0_.bottomLeftCorner(n, n).array();  // b^T
    const Eigen::ArrayXXd d = normal0_.bottomRightCorner(n, n).array();
    const Eigen::ArrayXXd sc = cs.transpose();

    Matrix out(2 * n, 2 * n);
    out.topLeftCorner(n, n) = (cc * a + cs * b + sc * bt + ss * d).matrix();
    out.topRightCorner(n, n) = (-cs * a + cc * b - ss * bt + sc * d).matrix();
    out.bottomLeftCorner(n, n) = out.topRightCorner(n, n).transpose();
    out.bottomRightCorner(n, n) = (ss * a - sc * b - cs * bt + cc * d).matrix();
    return out;
  }

  /// sigma(t) = S Sigma(t) S^T.
  CovarianceMatrix covariance(double t) const {
    return CovarianceMatrix(symmetrized(basis_.symplectic * normal_covariance(t) * basis_.symplectic.transpose()));
  }

  CovarianceMatrix marginal(double t, std::span<const int> modes) const {
    return marginal_from_normal(normal_covariance(t), modes);
  }

  /// Marginal on `modes` of S Sigma S^T, touching only the needed rows of S.
  CovarianceMatrix marginal_from_normal(const Matrix& normal, std::span<const int> modes) const {
    const Matrix rows = symplectic_rows(modes);
    return CovarianceMatrix(symmetrized(rows * normal * rows.transpose()));
  }

  /// Rows of S for the q's and p's of `modes`, in subsystem q-p order.
  Matrix symplectic_rows(std::span<const int> modes) const {
    const Eigen::Index n = basis_.modes();
    const Eigen::Index k = static_cast<Eigen::Index>(modes.size());
    std::vector<Eigen::Index> rows(2 * k);
    for (Eigen::Index i = 0; i < k; ++i) {
      if (modes[i] < 0 || modes[i] >= n) throw ConfigError("mode index " + std::to_string(modes[i]) + " out of range");
      rows[i] = modes[i];
      rows[k + i] = n + modes[i];
    }
    return basis_.symplectic(rows, Eigen::all);
  }

 private:
  NormalModeBasis basis_;
  Matrix normal0_;
};

}  // namespace glocal
