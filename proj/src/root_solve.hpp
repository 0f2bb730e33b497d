/*
  Copyright 2026 The gfmap Authors

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

  Unless required by applicable law or agreed to in writing, software
  distributed under the License is distributed on an "AS IS" BASIS,
  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
  See the License for the specific language governing permissions and
  limitations under the License.
*/

#ifndef GFMAP_SRC_ROOT_SOLVE_HPP
#define GFMAP_SRC_ROOT_SOLVE_HPP

#include <cmath>
#include <limits>
#include <optional>

namespace gfmap::detail {

// Newton with a bisection safeguard (rtsafe style) for a monotone g on
// [lo, hi] with g(lo), g(hi) of opposite sign. Returns nullopt when the
// bracket does not straddle a root.
template <class G, class DG>
std::optional<double> safeguarded_newton(G&& g, DG&& dg, double lo, double hi, double guess) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double glo = g(lo);
  double ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if ((glo > 0.0) == (ghi > 0.0)) return std::nullopt;

  double x = (guess > lo && guess < hi) ? guess : 0.5 * (lo + hi);
  double dx_old = hi - lo;
  double dx = dx_old;
  for (int iter = 0; iter < 200; ++iter) {
    const double gx = g(x);
    if (gx == 0.0) return x;
    if ((gx > 0.0) == (glo > 0.0)) {
      lo = x;
      glo = gx;
    } else {
      hi = x;
    }
    const double d = dg(x);
    double next = x - gx / d;
    const bool newton_ok = d != 0.0 && std::isfinite(next) && next > std::fmin(lo, hi) &&
                           next < std::fmax(lo, hi) && std::fabs(2.0 * gx) <= std::fabs(dx_old * d);
    dx_old = dx;
    if (!newton_ok) next = 0.5 * (lo + hi);
    dx = next - x;
    const double scale = std::fmax(std::fabs(x), std::numeric_limits<double>::min());
    if (std::fabs(dx) <= 2.0 * eps * scale) return next;
    if (std::fabs(hi - lo) <= 2.0 * eps * std::fmax(std::fabs(lo), std::fabs(hi))) return next;
    x = next;
  }
  return x;
}

}  // namespace gfmap::detail

#endif  // GFMAP_SRC_ROOT_SOLVE_HPP
