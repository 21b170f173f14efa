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

// Potential matrices of open-boundary harmonic lattices.
//
// A lattice of N sites with unit masses has H = 1/2 x^T (V (+) I) x in the
// q-p basis. The on-site term contributes omega^2 to the diagonal of V, and
// each unordered pair of sites (nu, nu') contributes G q_nu q_nu' to H. In the
// quadratic form 1/2 q^T V q that pair term is split over the two mirror
// entries, so V(nu, nu') = V(nu', nu) = G with no extra factor of two. The
// inter-lattice term lambda q_A q_B is stored the same way.

#include <Eigen/Dense>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#include "glocal/errors.hpp"
#include "glocal/tolerances.hpp"

namespace glocal {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kNearestNeighbor = std::numeric_limits<double>::infinity();

struct Site {
  int system = 0;  // 0 for A, 1 for B
  int row = 0;
  int col = 0;

  friend bool operator==(const Site&, const Site&) = default;
};

inline int manhattan_distance(const Site& a, const Site& b) {
  return std::abs(a.row - b.row) + std::abs(a.col - b.col);
}

struct LatticeSpec {
  int dim = 1;
  int rows = 1;  // 1 for chains
  int cols = 2;  // chain length for 1D
  double omega = 1.0;
  double g = 0.0;
  double alpha = kNearestNeighbor;

  static LatticeSpec chain(int n, double omega, double g, double alpha) {
    return {1, 1, n, omega, g, alpha};
  }
  static LatticeSpec square(int rows, int cols, double omega, double g, double alpha) {
    return {2, rows, cols, omega, g, alpha};
  }

  int sites() const { return rows * cols; }
  bool nearest_neighbor() const { return std::isinf(alpha); }

  // Row-major: site (r, c) has index r * cols + c.
  Site site(int index, int system = 0) const { return {system, index / cols, index % cols}; }
  int index(int row, int col) const { return row * cols + col; }

  void validate() const {
    if (dim != 1 && dim != 2) throw ConfigError("lattice dim must be 1 or 2, got " + std::to_string(dim));
    if (dim == 1 && rows != 1) throw ConfigError("1D lattice must have a single row");
    if (cols < 2 || (dim == 2 && rows < 2))
      throw ConfigError("lattice needs at least 2 sites in every occupied dimension");
    if (!(omega > 0.0) || !std::isfinite(omega)) throw ConfigError("on-site frequency omega must be > 0");
    if (!std::isfinite(g)) throw ConfigError("coupling g must be finite");
    if (!(alpha > 0.0)) throw ConfigError("interaction exponent alpha must be > 0 or infinite");
  }

  friend bool same_shape(const LatticeSpec& a, const LatticeSpec& b) {
    return a.dim == b.dim && a.rows == b.rows && a.cols == b.cols;
  }
};

enum class CouplingKind { EdgeEdge, FullBody };

inline std::string to_string(CouplingKind kind) { return kind == CouplingKind::EdgeEdge ? "EE" : "FB"; }

struct CouplingTopology {
  CouplingKind kind = CouplingKind::FullBody;
  double lambda = 0.0;
  // Boundary row carrying the contact for 2D edge-edge coupling.
  int edge_row = 0;
};

struct PotentialMatrix {
  Matrix entries;
  std::vector<Site> sites;  // sites[i] is the site on row/column i

  Eigen::Index size() const { return entries.rows(); }
};

/// Intra-lattice potential: omega^2 on the diagonal, g / dist^alpha off it
/// (nearest neighbours only when alpha is infinite).
inline PotentialMatrix build_intra_potential(const LatticeSpec& spec, int system = 0) {
  spec.validate();
  const int n = spec.sites();
  PotentialMatrix v{Matrix::Zero(n, n), {}};
  v.sites.reserve(n);
  for (int i = 0; i < n; ++i) v.sites.push_back(spec.site(i, system));
  const double w2 = spec.omega * spec.omega;
  for (int i = 0; i < n; ++i) {
    v.entries(i, i) = w2;
    for (int j = i + 1; j < n; ++j) {
      const int d = manhattan_distance(v.sites[i], v.sites[j]);
      double coupling = 0.0;
      if (spec.nearest_neighbor())
        coupling = d == 1 ? spec.g : 0.0;
      else
        coupling = spec.g / std::pow(static_cast<double>(d), spec.alpha);
      v.entries(i, j) = coupling;
      v.entries(j, i) = coupling;
    }
  }
  return v;
}

/// Sites of lattice `spec` that take part in the inter-lattice coupling.
inline std::vector<int> contact_sites(const LatticeSpec& spec, const CouplingTopology& topo) {
  std::vector<int> out;
  if (topo.kind == CouplingKind::FullBody) {
    for (int i = 0; i < spec.sites(); ++i) out.push_back(i);
  } else if (spec.dim == 1) {
    out.push_back(0);
  } else {
    if (topo.edge_row < 0 || topo.edge_row >= spec.rows)
      throw ConfigError("edge_row " + std::to_string(topo.edge_row) + " outside lattice");
    for (int c = 0; c < spec.cols; ++c) out.push_back(spec.index(topo.edge_row, c));
  }
  return out;
}

/// The N_A x N_B block coupling A to B: lambda at every contact site pair.
inline Matrix build_interaction_potential(const LatticeSpec& a, const LatticeSpec& b,
                                          const CouplingTopology& topo) {
  if (!same_shape(a, b)) throw DimensionError("coupled lattices must have equal size and shape");
  Matrix block = Matrix::Zero(a.sites(), b.sites());
  for (int i : contact_sites(a, topo)) block(i, i) = topo.lambda;
  return block;
}

/// [[V_A, V_int], [V_int^T, V_B]], A sites first.
inline PotentialMatrix assemble_total(const PotentialMatrix& va, const PotentialMatrix& vb,
                                      const Matrix& vint) {
  const Eigen::Index na = va.size();
  const Eigen::Index nb = vb.size();
  if (vint.rows() != na || vint.cols() != nb)
    throw DimensionError("interaction block does not conform to the lattice potentials");
  PotentialMatrix total{Matrix::Zero(na + nb, na + nb), {}};
  total.entries.topLeftCorner(na, na) = va.entries;
  total.entries.bottomRightCorner(nb, nb) = vb.entries;
  total.entries.topRightCorner(na, nb) = vint;
  total.entries.bottomLeftCorner(nb, na) = vint.transpose();
  total.sites = va.sites;
  for (Site s : vb.sites) {
    s.system = 1;
    total.sites.push_back(s);
  }
  return total;
}

/// Smallest eigenvalue of the symmetric matrix V.
inline double validate_stability(const Matrix& v) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(v, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericError("eigenvalue solver failed on potential matrix");
  return solver.eigenvalues().minCoeff();
}

/// Throws InstabilityError unless V is strictly positive definite.
inline void require_stable(const Matrix& v) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(v, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericError("eigenvalue solver failed on potential matrix");
  const Vector& ev = solver.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  if (ev.minCoeff() <= tol::kStability * scale)
    throw InstabilityError("potential matrix is not positive definite (lambda_min = " +
                           std::to_string(ev.minCoeff()) + ")");
}

}  // namespace glocal
