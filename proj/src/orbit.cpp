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

#include "gfmap/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "gfmap/errors.hpp"
#include "gfmap/partition.hpp"

namespace gfmap {

namespace {

// Exact values an orbit may land on: critical points and the boundary.
double snap(const PiecewiseMap& map, double y) {
  const double tol = map.tol_orbit();
  for (const auto& c : map.criticals())
    if (std::fabs(y - c.c) <= tol) return c.c;
  const Interval d = map.domain();
  if (std::fabs(y - d.left) <= tol) return d.left;
  if (std::fabs(y - d.right) <= tol) return d.right;
  return std::clamp(y, d.left, d.right);
}

bool is_critical(const PiecewiseMap& map, double x) {
  for (const auto& c : map.criticals())
    if (c.c == x) return true;
  return false;
}

// f^p by plain iteration; orbit points never leave the domain for a valid map
// except through rounding.
double iterate(const PiecewiseMap& map, double x, int p) {
  const Interval d = map.domain();
  for (int i = 0; i < p; ++i) x = std::clamp(map(x), d.left, d.right);
  return x;
}

}  // namespace

double cycle_eigenvalue(const PiecewiseMap& map, const std::vector<double>& cycle) {
  double eig = 1.0;
  for (double x : cycle) {
    if (is_critical(map, x)) return 0.0;
    eig *= map.lap_deriv(map.lap_index(x), x);
  }
  return eig;
}

PeriodicClass classify_eigenvalue(double eigenvalue) {
  const double m = std::fabs(eigenvalue);
  if (std::fabs(1.0 - m) <= kNeutralBand) return PeriodicClass::neutral;
  return m > 1.0 ? PeriodicClass::expanding : PeriodicClass::attracting;
}

const char* to_string(PeriodicClass c) {
  switch (c) {
    case PeriodicClass::expanding: return "expanding";
    case PeriodicClass::neutral: return "neutral";
    case PeriodicClass::attracting: return "attracting";
  }
  return "?";
}

std::vector<double> OrbitReport::postcritical() const {
  std::vector<double> out;
  for (const auto& o : orbits)
    for (std::size_t i = 1; i < o.points.size(); ++i) out.push_back(o.points[i]);
  // A periodic critical point belongs to its own forward orbit.
  for (const auto& o : orbits)
    if (o.found_cycle && o.preperiod == 0) out.push_back(o.points[0]);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

OrbitReport critical_orbits_unchecked(const PiecewiseMap& map, int max_steps) {
  if (max_steps < 1) throw PreconditionError("max_steps must be at least 1");
  const double tol = map.tol_orbit();
  OrbitReport report;
  report.critically_finite = true;
  report.all_criticals_nonperiodic = true;
  for (std::size_t ci = 0; ci < map.criticals().size(); ++ci) {
    CriticalOrbit orbit;
    orbit.critical = ci;
    orbit.points.push_back(map.criticals()[ci].c);
    for (int step = 0; step < max_steps; ++step) {
      const double y = snap(map, map(orbit.points.back()));
      auto hit = std::find_if(orbit.points.begin(), orbit.points.end(),
                              [&](double p) { return std::fabs(p - y) <= tol; });
      if (hit != orbit.points.end()) {
        orbit.found_cycle = true;
        orbit.preperiod = static_cast<int>(hit - orbit.points.begin());
        orbit.period = static_cast<int>(orbit.points.size()) - orbit.preperiod;
        std::vector<double> cycle(orbit.points.begin() + orbit.preperiod, orbit.points.end());
        orbit.eigenvalue = cycle_eigenvalue(map, cycle);
        break;
      }
      orbit.points.push_back(y);
    }
    if (!orbit.found_cycle) report.critically_finite = false;
    if (orbit.found_cycle && orbit.preperiod == 0) report.all_criticals_nonperiodic = false;
    report.orbits.push_back(std::move(orbit));
  }
  return report;
}

OrbitReport critical_orbits(const PiecewiseMap& map, int max_steps) {
  OrbitReport report = critical_orbits_unchecked(map, max_steps);
  if (!report.critically_finite) {
    std::ostringstream os;
    os << "critical orbit(s) not finite within " << max_steps << " steps:";
    os.precision(17);
    for (const auto& o : report.orbits)
      if (!o.found_cycle) os << " c" << o.critical << " = " << map.criticals()[o.critical].c;
    throw NotCriticallyFinite(os.str());
  }
  return report;
}

ChainGraph critical_chains_unchecked(const PiecewiseMap& map, const OrbitReport& report) {
  const double tol = map.tol_orbit();
  const auto crit = map.criticals();
  ChainGraph g;
  g.nodes = crit.size();
  for (const auto& o : report.orbits) {
    for (std::size_t l = 1; l < o.points.size(); ++l) {
      for (std::size_t j = 0; j < crit.size(); ++j)
        if (std::fabs(o.points[l] - crit[j].c) <= tol)
          g.edges.push_back({o.critical, j, static_cast<int>(l)});
    }
    if (o.found_cycle && o.preperiod == 0) g.edges.push_back({o.critical, o.critical, o.period});
  }

  // Longest path by memoized DFS; grey nodes on the stack reveal cycles.
  std::vector<int> colour(g.nodes, 0), best(g.nodes, 0);
  std::function<int(std::size_t)> visit = [&](std::size_t v) -> int {
    if (colour[v] == 2) return best[v];
    if (colour[v] == 1) {
      g.acyclic = false;
      return 0;
    }
    colour[v] = 1;
    int longest = 0;
    for (const auto& e : g.edges)
      if (e.from == v) longest = std::max(longest, e.length + visit(e.to));
    colour[v] = 2;
    best[v] = longest;
    return longest;
  };
  for (std::size_t v = 0; v < g.nodes; ++v) g.n0 = std::max(g.n0, visit(v));
  g.no_cycle = g.acyclic && report.all_criticals_nonperiodic;
  if (!g.acyclic) g.n0 = -1;
  return g;
}

ChainGraph critical_chains(const PiecewiseMap& map, const OrbitReport& report) {
  if (!report.critically_finite) throw PreconditionError("critical chains need finite critical orbits");
  ChainGraph g = critical_chains_unchecked(map, report);
  if (!g.no_cycle) {
    std::ostringstream os;
    os.precision(17);
    os << "critical cycle:";
    for (const auto& o : report.orbits)
      if (o.preperiod == 0) os << " c" << o.critical << " = " << map.criticals()[o.critical].c << " is periodic";
    if (!g.acyclic) os << " chain graph has a directed cycle";
    throw CycleDetected(os.str());
  }
  return g;
}

std::vector<PeriodicPoint> periodic_points(const PiecewiseMap& map, const PartitionTower& tower,
                                           int max_period) {
  if (max_period < 1) throw PreconditionError("max_period must be at least 1");
  if (tower.depth() < max_period + 1)
    throw PreconditionError("periodic points up to period " + std::to_string(max_period) +
                            " need a tower of depth " + std::to_string(max_period + 1));
  const double tol = map.tol_orbit();
  std::vector<PeriodicPoint> found;

  auto known = [&](double x) {
    for (const auto& p : found)
      for (double y : p.cycle)
        if (std::fabs(x - y) <= tol) return true;
    return false;
  };

  for (int p = 1; p <= max_period; ++p) {
    const std::vector<double> e = tower.endpoints(p + 1);
    std::vector<double> roots;
    auto g = [&](double x) { return iterate(map, x, p) - x; };
    for (std::size_t i = 0; i + 1 < e.size(); ++i) {
      double lo = e[i], hi = e[i + 1];
      double glo = g(lo), ghi = g(hi);
      if (glo == 0.0) roots.push_back(lo);
      if (ghi == 0.0) roots.push_back(hi);
      if (glo == 0.0 || ghi == 0.0 || (glo > 0.0) == (ghi > 0.0)) continue;
      // f^p is monotone here, so plain bisection to full resolution.
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double gm = g(mid);
        if (gm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((gm > 0.0) == (glo > 0.0)) {
          lo = mid;
          glo = gm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(std::fabs(g(lo)) <= std::fabs(g(hi)) ? lo : hi);
    }
    for (double x : roots) {
      if (known(x)) continue;
      // Minimal period: no earlier return.
      bool minimal = true;
      for (int q = 1; q < p && minimal; ++q)
        if (p % q == 0 && std::fabs(iterate(map, x, q) - x) <= tol) minimal = false;
      if (!minimal) continue;
      PeriodicPoint pp;
      pp.period = p;
      std::vector<double> cycle{x};
      for (int k = 1; k < p; ++k) cycle.push_back(iterate(map, cycle.back(), 1));
      // Start the cycle at its smallest point.
      std::rotate(cycle.begin(), std::min_element(cycle.begin(), cycle.end()), cycle.end());
      pp.x = cycle.front();
      pp.cycle = std::move(cycle);
      pp.eigenvalue = cycle_eigenvalue(map, pp.cycle);
      pp.cls = classify_eigenvalue(pp.eigenvalue);
      found.push_back(std::move(pp));
    }
  }
  std::sort(found.begin(), found.end(), [](const PeriodicPoint& a, const PeriodicPoint& b) {
    return a.period != b.period ? a.period < b.period : a.x < b.x;
  });
  return found;
}

}  // namespace gfmap
