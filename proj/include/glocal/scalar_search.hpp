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

// One-dimensional minimisation and root bracketing used by the thermometers.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "glocal/errors.hpp"

namespace glocal {

struct ScalarMinimum {
  double x = 0.0;
  double value = 0.0;
  int iterations = 0;
};

/// Brent's method (golden section with parabolic steps) on [a, b] to an
/// absolute tolerance on x. Deterministic: no randomness, fixed update rules.
template <class F>
ScalarMinimum brent_minimize(F&& f, double a, double b, double xtol, int max_iterations = 200) {
  constexpr double kGolden = 0.3819660112501051;  // (3 - sqrt 5) / 2
  if (a > b) std::swap(a, b);
  double x = a + kGolden * (b - a);
  double w = x, v = x;
  double fx = f(x);
  double fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  int it = 0;
  for (; it < max_iterations; ++it) {
    const double m = 0.5 * (a + b);
    const double tol1 = 0.5 * xtol + 1e-14 * std::abs(x);
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) break;
    bool golden = true;
    if (std::abs(e) > tol1) {
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double etemp = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * etemp) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = (m >= x) ? tol1 : -tol1;
        golden = false;
      }
    }
    if (golden) {
      e = (x >= m) ? a - x : b - x;
      d = kGolden * e;
    }
    const double u = std::abs(d) >= tol1 ? x + d : x + (d > 0 ? tol1 : -tol1);
    const double fu = f(u);
    if (fu <= fx) {
      if (u >= x)
        a = x;
      else
        b = x;
      v = w;
      fv = fw;
      w = x;
      fw = fx;
      x = u;
      fx = fu;
    } else {
      if (u < x)
        a = u;
      else
        b = u;
      if (fu <= fw || w == x) {
        v = w;
        fv = fw;
        w = u;
        fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }
  }
  return {x, fx, it};
}

struct ScannedMinimum {
  ScalarMinimum minimum;
  bool pinned = false;  // optimum sits on an end of [lo, hi]
};

/// Coarse scan on `points` evenly spaced abscissae, then Brent inside the
/// best cell and its neighbours. Guards against picking a local basin.
template <class F>
ScannedMinimum scan_then_minimize(F&& f, double lo, double hi, std::size_t points, double xtol) {
  if (!(lo < hi)) throw ConfigError("search interval must satisfy lo < hi");
  points = std::max<std::size_t>(points, 3);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points; ++i) {
    const double value = f(lo + step * static_cast<double>(i));
    if (value < best_value) {
      best_value = value;
      best = i;
    }
  }
  const double a = lo + step * static_cast<double>(best == 0 ? 0 : best - 1);
  const double b = lo + step * static_cast<double>(std::min(best + 1, points - 1));
  ScannedMinimum out;
  out.minimum = brent_minimize(f, a, b, xtol);
  if (best_value < out.minimum.value) out.minimum = {lo + step * static_cast<double>(best), best_value, out.minimum.iterations};
  out.pinned = out.minimum.x - lo <= 2.0 * xtol || hi - out.minimum.x <= 2.0 * xtol;
  return out;
}

/// Root of an increasing function g on [lo, hi] by bisection, stopping when
/// `done(lo, hi)` reports convergence.
template <class G, class Done>
double bisect_increasing(G&& g, double lo, double hi, Done&& done, int max_iterations = 400) {
  double glo = g(lo);
  double ghi = g(hi);
  if (glo > 0.0 || ghi < 0.0) throw NumericError("bisection interval does not bracket a root");
  for (int it = 0; it < max_iterations && !done(lo, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if (gm < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace glocal
