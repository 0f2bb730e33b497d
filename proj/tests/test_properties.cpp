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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "gfmap/distortion.hpp"
#include "gfmap/geometry.hpp"
#include "gfmap/map_model.hpp"
#include "gfmap/orbit.hpp"
#include "gfmap/partition.hpp"
#include "oracle.hpp"

using namespace gfmap;

namespace {

std::vector<oracle::Branch> branches(const std::string& name) {
  if (name == "quadratic") return {{-1.0, 0.0, oracle::quadratic}, {0.0, 1.0, oracle::quadratic}};
  return {{-1.0, 0.0, oracle::cubic_left}, {0.0, 1.0, oracle::cubic_right}};
}

double branch_derivative(const std::string& name, double x) {
  if (name == "quadratic") return oracle::quadratic_d1(x);
  return x <= 0.0 ? -9.0 * x * x - 10.0 * x : 9.0 * x * x - 10.0 * x;
}

// g(y) for the inverse branch along `laps`, by plain bisection, and the log of
// |g'(y)| from the chain rule.
std::pair<double, double> inverse_branch(const std::string& name, const std::vector<std::size_t>& laps, double y) {
  const auto b = branches(name);
  double x = y;
  for (std::size_t k = laps.size(); k-- > 0;) {
    const auto& br = b[laps[k]];
    const double target = x;
    x = oracle::bisect([&](double t) { return br.f(t) - target; }, br.left, br.right);
  }
  double logd = 0.0, z = x;
  for (std::size_t k = 0; k < laps.size(); ++k) {
    logd -= std::log(std::fabs(branch_derivative(name, z)));
    z = b[laps[k]].f(z);
  }
  return {x, logd};
}

}  // namespace

TEST_CASE("Schwarzian cocycle on the second iterate") {
  const auto q = builtin("quadratic");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.95, 0.95);
  int checked = 0;
  while (checked < 100) {
    const double x = u(rng);
    if (std::fabs(x) < 0.05 || std::fabs(oracle::quadratic(x)) < 0.05) continue;
    // p = f o f = 1 - 2 (1 - 2x^2)^2, differentiated by hand.
    const double p1 = 16.0 * x - 32.0 * x * x * x;
    const double p2 = 16.0 - 96.0 * x * x;
    const double p3 = -192.0 * x;
    const double want = p3 / p1 - 1.5 * (p2 / p1) * (p2 / p1);
    const double d = oracle::quadratic_d1(x);
    const double got = schwarzian(q, oracle::quadratic(x)) * d * d + schwarzian(q, x);
    CHECK(std::fabs(got - want) <= 1e-8 * std::fabs(want));
    ++checked;
  }
}

TEST_CASE("Koebe nonlinearity recursion against the inverse branch") {
  std::mt19937_64 rng(2);
  for (const std::string name : {"quadratic", "neutral_cubic"}) {
    const auto map = builtin(name);
    const auto tower = PartitionTower::build(map, 8);
    for (int trial = 0; trial < 100; ++trial) {
      const int n = std::uniform_int_distribution<int>(1, 7)(rng);
      const auto e = tower.endpoints(n);
      const std::size_t i = std::uniform_int_distribution<std::size_t>(1, e.size() - 1)(rng);
      std::vector<std::size_t> laps;
      double lo = e[i - 1], hi = e[i];
      for (int k = 0; k < n; ++k) {
        laps.push_back(map.lap_index(0.5 * (lo + hi)));
        double a = map(lo), b = map(hi);
        if (a > b) std::swap(a, b);
        lo = a;
        hi = b;
      }
      // [lo, hi] is now the domain of the inverse branch.
      const double y = lo + (hi - lo) * std::uniform_real_distribution<double>(0.2, 0.8)(rng);
      double gv = 0.0, gd = 0.0;
      const double nl = branch_nonlinearity(map, laps, y, &gv, &gd);
      const auto [gx, logd] = inverse_branch(name, laps, y);
      INFO(name, " n=", n, " y=", y);
      CHECK(std::fabs(gv - gx) <= 1e-12);
      CHECK(std::fabs(std::log(std::fabs(gd)) - logd) <= 1e-9);
      const double h = 1e-5 * (hi - lo);
      const double fd = (inverse_branch(name, laps, y + h).second - inverse_branch(name, laps, y - h).second) / (2 * h);
      CHECK(std::fabs(nl - fd) <= 1e-4 * std::max(std::fabs(fd), 1.0 / (hi - lo)));
      // Non-positive Schwarzian: at the midpoint, |n(g)| <= 2 / (|domain| / 2).
      const double mid = branch_nonlinearity(map, laps, 0.5 * (lo + hi));
      CHECK(std::fabs(mid) <= 4.0 / (hi - lo) * (1.0 + 1e-6));
    }
  }
}

TEST_CASE("variation estimates do not decrease under refinement") {
  MapConfig wavy;
  wavy.domain = {-1.0, 1.0};
  wavy.laps = {{{-1.0, 0.0}, "1-2*x^2+0.05*sin(pi*x)*x^2"}, {{0.0, 1.0}, "1-2*x^2"}};
  wavy.criticals = {{0.0, 2.0, {}, {}, {}}};
  std::vector<PiecewiseMap> maps{builtin("tent"), builtin("quadratic"), builtin("neutral_cubic")};
  maps.push_back(PiecewiseMap::from_config(wavy));
  for (const auto& m : maps) {
    const auto r = variation_estimates(m, 4096);
    for (const auto* group : {&r.laps, &r.ratios})
      for (const auto& v : *group) {
        REQUIRE(v.refinements.size() >= 2);
        for (std::size_t i = 1; i < v.refinements.size(); ++i)
          CHECK(v.refinements[i] >= v.refinements[i - 1] - 1e-12 * (1.0 + v.refinements[i - 1]));
      }
  }
}

TEST_CASE("a serialized tower reproduces the geometry constants bit for bit") {
  for (const char* name : {"quadratic", "neutral_cubic"}) {
    const auto t = PartitionTower::build(builtin(name), 12);
    const auto back = PartitionTower::deserialize(t.serialize());
    const auto a = geometry_constants(t), b = geometry_constants(back);
    CHECK(a.bc == b.bc);
    CHECK(a.nc == b.nc);
    CHECK(a.bc_series == b.bc_series);
    CHECK(a.nc_series == b.nc_series);
    CHECK(t.lambdas() == back.lambdas());
  }
}

TEST_CASE("distortion samples agree with the forward chain rule") {
  for (const char* name : {"quadratic", "neutral_cubic"}) {
    const auto map = builtin(name);
    const auto tower = PartitionTower::build(map, 12);
    const auto orbits = critical_orbits(map);
    const auto samples = distortion_samples(map, tower, orbits.postcritical(), 3, 1000, 4, 1);
    for (const auto& s : samples) {
      const double fwd = chain_log_derivative(map, s.gx, s.n) - chain_log_derivative(map, s.gy, s.n);
      CHECK(std::fabs(fwd + s.logratio) <= 1e-10 * (1.0 + std::fabs(s.logratio)));
    }
  }
}

TEST_CASE("random tower intervals map down the tower level by level") {
  std::mt19937_64 rng(3);
  for (const char* name : {"quadratic", "neutral_cubic"}) {
    const auto map = builtin(name);
    const auto tower = PartitionTower::build(map, 12);
    std::vector<std::vector<double>> levels;
    for (int n = 1; n <= 12; ++n) levels.push_back(tower.endpoints(n));
    for (int trial = 0; trial < 100; ++trial) {
      const int n = std::uniform_int_distribution<int>(2, 12)(rng);
      const auto& e = levels[n - 1];
      const std::size_t i = std::uniform_int_distribution<std::size_t>(1, e.size() - 1)(rng);
      double lo = e[i - 1], hi = e[i];
      for (int k = n - 1; k >= 1; --k) {
        double a = map(lo), b = map(hi);
        if (a > b) std::swap(a, b);
        const auto& c = levels[k - 1];
        const auto it = std::lower_bound(c.begin(), c.end(), a - 1e-12);
        REQUIRE(it != c.end());
        REQUIRE(it + 1 != c.end());
        INFO(name, " level ", n, " step to ", k);
        CHECK(std::fabs(*it - a) <= 1e-12);
        CHECK(std::fabs(*(it + 1) - b) <= 1e-12);
        lo = *it;
        hi = *(it + 1);
      }
    }
  }
}
