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

#ifndef GFMAP_GEOMETRY_HPP
#define GFMAP_GEOMETRY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gfmap/map_model.hpp"
#include "gfmap/orbit.hpp"
#include "gfmap/partition.hpp"

namespace gfmap {

// bc[n-1]: min |J|/|I| over children J in level n+1 of I in level n
// (n = 1..depth-1). nc[n-1]: min ratio of adjacent intervals of level n.
struct GeometryConstants {
  double bc = 0.0;
  double nc = 0.0;
  std::vector<double> bc_series;
  std::vector<double> nc_series;

  // Running minimum of bc_series up to tower depth `depth`.
  double bc_up_to(int depth) const;
};

// Requires depth >= 3.
GeometryConstants geometry_constants(const PartitionTower& tower);

// S(f)(x) = f'''/f' - 3/2 (f''/f')^2. Rejected at critical points and where
// f' vanishes.
double schwarzian(const PiecewiseMap& map, double x);

struct SchwarzianCheck {
  bool nonpositive = true;
  double max_value = 0.0;  // largest S over the grid
  double argmax = 0.0;
  std::size_t points = 0;
};

// S <= 1e-9 on grid_size interior points per lap, skipping points within
// tol_orbit of a critical point.
SchwarzianCheck check_nonpositive_schwarzian(const PiecewiseMap& map, int grid_size);

// One sampled inverse branch g of f^n, defined on `domain` and mapping it
// onto the tower interval whose first n laps are `itinerary`.
struct KoebeSample {
  int n = 0;
  std::vector<std::size_t> itinerary;
  Interval domain;
  double y = 0.0;
  double nonlinearity = 0.0;  // g''/g' at y
  double bound = 0.0;         // 2 / d_domain(y)
  bool ok = true;
};

struct KoebeReport {
  std::size_t samples = 0;
  std::size_t violations = 0;
  double worst_ratio = 0.0;  // max |n(g)| / bound
  std::vector<KoebeSample> failures;
};

// Nonlinearity n(g) = g''/g' of g along the itinerary, at y in the domain, by
// n(g1 o g2) = n(g1)(g2) g2' + n(g2) with n(g_lap)(y) = -f''(x)/f'(x)^2.
// Also returns g(y) and g'(y) through the out parameters when given.
double branch_nonlinearity(const PiecewiseMap& map, const std::vector<std::size_t>& itinerary, double y,
                           double* g_value = nullptr, double* g_deriv = nullptr);

// Samples inverse branches of f^n for n in 1..depth from the tower's level n
// intervals and checks |n(g)(y)| <= 2/d(y) (1 + 1e-6). Requires the
// Schwarzian check to pass.
KoebeReport koebe_nonlinearity_check(const PiecewiseMap& map, const PartitionTower& tower, int depth,
                                     std::size_t samples, std::uint64_t seed);

struct VariationEstimate {
  std::string what;  // "f'" on a lap, "r+" / "r-" at a critical point
  std::size_t index = 0;
  double variation = 0.0;
  std::vector<double> refinements;  // estimate per doubling of the grid
  std::size_t grid_points = 0;
  bool stable = false;  // last doubling changed the estimate by < 1%
  double holder = 0.0;  // max |dr| / |dx|^alpha, ratio functions only
};

struct RegularityReport {
  std::vector<VariationEstimate> laps;
  std::vector<VariationEstimate> ratios;
  double total_variation = 0.0;  // sum over laps of Var(f')
  double beta = 0.0;             // min |f'| outside critical neighbourhoods
};

RegularityReport variation_estimates(const PiecewiseMap& map, int grid_size);

enum class Verdict { geometrically_finite, not_geometrically_finite, inconclusive };

const char* to_string(Verdict v);

struct AnalysisOptions {
  int depth = 20;
  int max_period = 4;
  std::optional<std::pair<int, int>> window;
  int variation_grid = 1024;
  int schwarzian_grid = 10000;
};

struct Advisory {
  bool only_expanding_periodic = false;  // up to max_period
  bool variation_stable = false;
  bool bc_plateau = false;
  double bc_drift = 0.0;  // relative, depth N vs N-4
  std::optional<bool> nonpositive_schwarzian;
};

struct GeometryReport {
  Verdict verdict = Verdict::inconclusive;
  std::vector<std::string> reasons;
  bool smooth = false;
  bool finite = false;
  bool no_cycle = false;
  std::optional<DecayVerdict> decay;
  std::optional<GeometryConstants> constants;
  Advisory advisory;
};

struct AnalysisReport {
  ValidationReport validation;
  OrbitReport orbits;
  std::optional<ChainGraph> chains;
  std::optional<PartitionTower> tower;
  std::vector<PeriodicPoint> periodic;
  RegularityReport regularity;
  std::optional<SchwarzianCheck> schwarzian;
  GeometryReport geometry;
};

// Full pipeline. Never throws for a map that failed one of the conditions;
// the verdict records which condition failed.
AnalysisReport analyze(const PiecewiseMap& map, const AnalysisOptions& options);

GeometryReport finiteness_verdict(const PiecewiseMap& map, const AnalysisOptions& options = {});

}  // namespace gfmap

#endif  // GFMAP_GEOMETRY_HPP
