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

// Reference computations that share no code with the library: closed forms,
// plain bisection and brute-force scans.

#ifndef GFMAP_TESTS_ORACLE_HPP
#define GFMAP_TESTS_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

// Builtin branches written out by hand.
inline double tent(double x) { return 1.0 - 2.0 * std::fabs(x); }
inline double quadratic(double x) { return 1.0 - 2.0 * x * x; }
inline double quadratic_d1(double x) { return -4.0 * x; }
inline double cubic_left(double x) { return -3.0 * x * x * x - 5.0 * x * x + 1.0; }
inline double cubic_right(double x) { return 3.0 * x * x * x - 5.0 * x * x + 1.0; }
inline double neutral_cubic(double x) { return x <= 0.0 ? cubic_left(x) : cubic_right(x); }

// The conjugacy from the tent map to the quadratic map.
inline double sine_conjugacy(double x) { return std::sin(pi * x / 2.0); }

// Level n endpoints of the tent map: k 2^(1-n) - 1, k = 0 .. 2^n.
inline std::vector<double> tent_endpoints(int n) {
  std::vector<double> e;
  const double step = std::ldexp(1.0, 1 - n);
  for (long k = 0; k <= (1L << n); ++k) e.push_back(k * step - 1.0);
  return e;
}

// Level n endpoints of the quadratic map, sin(pi t / 2) over tent endpoints t.
inline std::vector<double> quadratic_endpoints(int n) {
  auto e = tent_endpoints(n);
  for (double& x : e) x = sine_conjugacy(x);
  return e;
}

// Quadratic Schwarzian, -3 / (2 x^2).
inline double quadratic_schwarzian(double x) { return -1.5 / (x * x); }

// Plain bisection for a monotone g on [lo, hi] with g(lo), g(hi) of opposite
// sign (or zero).
inline double bisect(const std::function<double(double)>& g, double lo, double hi) {
  double glo = g(lo);
  if (glo == 0.0) return lo;
  if (g(hi) == 0.0) return hi;
  for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct Branch {
  double left;
  double right;
  std::function<double(double)> f;
};

// Levels 1..depth of the tower, E_{n+1} = E_1 U f^-1(E_n), each preimage found
// from scratch by bisection on its branch. Points closer than `merge` are
// merged.
inline std::vector<std::vector<double>> bisection_tower(const std::vector<Branch>& branches,
                                                         std::vector<double> first, int depth,
                                                         double merge = 1e-12) {
  std::sort(first.begin(), first.end());
  std::vector<std::vector<double>> levels{first};
  while (static_cast<int>(levels.size()) < depth) {
    std::vector<double> next = first;
    for (const auto& b : branches) {
      const double fl = b.f(b.left), fr = b.f(b.right);
      const double lo = std::min(fl, fr), hi = std::max(fl, fr);
      for (double e : levels.back()) {
        if (e < lo || e > hi) continue;
        next.push_back(bisect([&](double x) { return b.f(x) - e; }, b.left, b.right));
      }
    }
    std::sort(next.begin(), next.end());
    std::vector<double> merged;
    for (double x : next)
      if (merged.empty() || x - merged.back() > merge) merged.push_back(x);
    levels.push_back(std::move(merged));
  }
  return levels;
}

inline double max_gap(const std::vector<double>& e) {
  double m = 0.0;
  for (std::size_t i = 1; i < e.size(); ++i) m = std::max(m, e[i] - e[i - 1]);
  return m;
}

// min |J| / |I| over children J of I, scanning both levels.
inline double child_ratio(const std::vector<double>& parent, const std::vector<double>& child) {
  double best = 1.0;
  std::size_t j = 0;
  for (std::size_t i = 1; i < parent.size(); ++i) {
    const double a = parent[i - 1], b = parent[i];
    while (j + 1 < child.size() && child[j + 1] <= a) ++j;
    for (std::size_t k = j; k + 1 < child.size() && child[k + 1] <= b; ++k)
      if (child[k] >= a) best = std::min(best, (child[k + 1] - child[k]) / (b - a));
  }
  return best;
}

// min ratio of adjacent intervals.
inline double neighbour_ratio(const std::vector<double>& e) {
  double best = 1.0;
  for (std::size_t i = 2; i < e.size(); ++i) {
    const double l = e[i - 1] - e[i - 2], r = e[i] - e[i - 1];
    best = std::min(best, std::min(l / r, r / l));
  }
  return best;
}

// Least-squares slope of log(values[n-1]) against n over [a, b], as exp.
inline double decay_rate(const std::vector<double>& values, int a, int b) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int m = b - a + 1;
  for (int n = a; n <= b; ++n) {
    const double y = std::log(values[n - 1]);
    sx += n;
    sy += y;
    sxx += double(n) * n;
    sxy += n * y;
  }
  return std::exp((m * sxy - sx * sy) / (m * sxx - sx * sx));
}

// Brute-force quasisymmetry of an analytic homeomorphism of [a, b]: every
// triple (x - t, x, x + t) with x on a grid of `xs` points and t on a grid of
// `ts` geometrically spaced scales down to `tmin`.
inline double qs_bruteforce(const std::function<double(double)>& h, double a, double b, int xs, int ts,
                            double tmin) {
  double best = 1.0;
  const double range = b - a;
  for (int i = 0; i < xs; ++i) {
    const double x = a + range * i / (xs - 1);
    for (int k = 0; k < ts; ++k) {
      const double t = range / 2.0 * std::pow(tmin / (range / 2.0), double(k) / (ts - 1));
      if (x - t < a || x + t > b) continue;
      const double r = (h(x) - h(x - t)) / (h(x + t) - h(x));
      best = std::max(best, std::max(r, 1.0 / r));
    }
  }
  return best;
}

// The same sampling rule as the library's estimator, on an analytic h.
inline double qs_sampled(const std::function<double(double)>& h, double a, double b, int xs, int levels) {
  double best = 1.0;
  const double range = b - a;
  for (int i = 0; i < xs; ++i) {
    const double x = a + range * i / (xs - 1);
    for (int k = 1; k <= levels; ++k) {
      const double t = std::ldexp(range, -k);
      if (x - t < a || x + t > b) continue;
      const double r = (h(x) - h(x - t)) / (h(x + t) - h(x));
      best = std::max(best, std::max(r, 1.0 / r));
    }
  }
  return best;
}

// Candidates for the largest neutral cubic interval at level n: the end
// intervals [-1, x_n] and [y_n, 1], and the two intervals next to the
// critical point, whose images are the end interval [y_{n-1}, 1]. Here x_1 = 0,
// x_{k+1} is the left-branch preimage of x_k and y_k the right-branch
// preimage of x_{k-1}, with y_1 = 0.
inline std::vector<double> neutral_lambdas(int depth) {
  auto left_pre = [](double v) { return bisect([&](double t) { return cubic_left(t) - v; }, -1.0, 0.0); };
  auto right_pre = [](double v) { return bisect([&](double t) { return cubic_right(t) - v; }, 0.0, 1.0); };
  std::vector<double> out;
  double x = 0.0, x_prev = 0.0, y_prev = 0.0;
  for (int n = 1; n <= depth; ++n) {
    double lam = 1.0;
    if (n > 1) {
      const double y = right_pre(x_prev);
      lam = std::max({x + 1.0, 1.0 - y, -left_pre(y_prev), right_pre(y_prev)});
      y_prev = y;
    }
    out.push_back(lam);
    x_prev = x;
    x = left_pre(x);
  }
  return out;
}

// Real fixed points of the tent map iterate T^p on [-1, 1], found as the
// solutions of +-2^p x + c = x on each monotone branch (brute force over
// the dyadic branches of level p+1).
inline std::vector<double> tent_periodic_points(int p) {
  std::vector<double> out;
  const auto e = tent_endpoints(p + 1);
  auto tp = [p](double x) {
    for (int i = 0; i < p; ++i) x = tent(x);
    return x;
  };
  for (std::size_t i = 1; i < e.size(); ++i) {
    const double a = e[i - 1], b = e[i];
    const double ga = tp(a) - a, gb = tp(b) - b;
    if (ga == 0.0) out.push_back(a);
    if ((ga < 0.0) != (gb < 0.0) && gb != 0.0) out.push_back(bisect([&](double x) { return tp(x) - x; }, a, b));
    if (i + 1 == e.size() && gb == 0.0) out.push_back(b);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), [](double u, double v) { return std::fabs(u - v) < 1e-12; }),
            out.end());
  return out;
}

}  // namespace oracle

#endif  // GFMAP_TESTS_ORACLE_HPP
