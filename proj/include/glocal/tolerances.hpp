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

#include <cstddef>

// Numerical thresholds shared by all modules. Everything that decides
// "equal", "zero" or "converged" reads its default from here.
namespace glocal::tol {

// Eigenvalues of matrix-function arguments below this are clamped to zero.
inline constexpr double kEigenClamp = 1e-12;

// V is considered unstable when lambda_min <= kStability * ||V||.
inline constexpr double kStability = 1e-12;

// Relative gap below which two normal frequencies are treated as equal.
inline constexpr double kDegeneracy = 1e-8;

// Absolute tolerance on log(T) for the Bures-distance minimisation.
inline constexpr double kLogTemperature = 1e-6;

// States with at most this many modes get their fidelity in long double, so
// that near-pure subsystems still resolve the temperature optimum.
inline constexpr long kExtendedPrecisionModes = 8;

// Coarse log-spaced scan before the local temperature search.
inline constexpr std::size_t kPrescanPoints = 32;

// Relative energy tolerance for inverting the thermal energy curve.
inline constexpr double kEnergyRelative = 1e-10;

// A mode with <h> - Omega/2 below this (relative to Omega/2) is vacuum-saturated.
inline constexpr double kVacuumSaturation = 1e-12;

// beta cap for vacuum-saturated modes is kBetaCap / Omega.
inline constexpr double kBetaCap = 1e12;

// Consecutive samples required to enter or leave the equilibration band.
inline constexpr std::size_t kSustainWindow = 16;

// Slack allowed when deciding that |T_A - T_B| is non-increasing.
inline constexpr double kMonotoneNoise = 1e-9;

// Symmetric-part tolerance for covariance matrices.
inline constexpr double kSymmetry = 1e-12;

}  // namespace glocal::tol
