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

#ifndef GFMAP_ORBIT_HPP
#define GFMAP_ORBIT_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "gfmap/map_model.hpp"

namespace gfmap {

class PartitionTower;

// Forward orbit of one critical point. `points` holds the distinct orbit
// points in visiting order, starting at the critical point itself; the
// eventual cycle is points[preperiod .. preperiod + period).
struct CriticalOrbit {
  std::size_t critical = 0;
  std::vector<double> points;
  int preperiod = 0;
  int period = 0;
  double eigenvalue = 0.0;  // (f^period)' along the cycle, 0 if a critical point is on it
  bool found_cycle = false;
};

struct OrbitReport {
  std::vector<CriticalOrbit> orbits;
  bool critically_finite = false;
  bool all_criticals_nonperiodic = false;

  // Union of f^i(CP), i >= 1, sorted and without duplicates.
  std::vector<double> postcritical() const;
};

// Iterates every critical point until an orbit point repeats (within
// tol_orbit, with exact snapping onto critical points and the domain
// boundary). Throws NotCriticallyFinite naming the critical points whose
// orbits did not close within max_steps.
OrbitReport critical_orbits(const PiecewiseMap& map, int max_steps = 10000);

// Same iteration, but returns the partial report instead of throwing.
OrbitReport critical_orbits_unchecked(const PiecewiseMap& map, int max_steps = 10000);

struct ChainEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  int length = 0;  // f^length(c_from) = c_to
};

struct ChainGraph {
  std::size_t nodes = 0;
  std::vector<ChainEdge> edges;
  int n0 = 0;  // longest total length over directed paths
  bool acyclic = true;
  bool no_cycle = false;  // acyclic and no critical point is periodic
};

// Throws CycleDetected when a critical point is periodic or the chain graph
// has a directed cycle.
ChainGraph critical_chains(const PiecewiseMap& map, const OrbitReport& report);
ChainGraph critical_chains_unchecked(const PiecewiseMap& map, const OrbitReport& report);

enum class PeriodicClass { expanding, neutral, attracting };

const char* to_string(PeriodicClass c);

struct PeriodicPoint {
  double x = 0.0;  // smallest point of the cycle
  int period = 1;
  double eigenvalue = 0.0;
  PeriodicClass cls = PeriodicClass::expanding;
  std::vector<double> cycle;  // x, f(x), ..., f^(period-1)(x)
};

// |1 - |eigenvalue|| at or below this is classified neutral.
inline constexpr double kNeutralBand = 1e-9;

PeriodicClass classify_eigenvalue(double eigenvalue);

// All periodic orbits of minimal period p <= max_period, one entry per
// orbit, sorted by (period, x). Each interval of level p+1 of the tower is a
// monotone branch of f^p and holds at most one fixed point of f^p.
std::vector<PeriodicPoint> periodic_points(const PiecewiseMap& map, const PartitionTower& tower,
                                           int max_period);

// Product of f' along the points, 0 when one of them is a critical point.
double cycle_eigenvalue(const PiecewiseMap& map, const std::vector<double>& cycle);

}  // namespace gfmap

#endif  // GFMAP_ORBIT_HPP
