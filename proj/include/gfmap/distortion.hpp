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

#ifndef GFMAP_DISTORTION_HPP
#define GFMAP_DISTORTION_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gfmap/map_model.hpp"
#include "gfmap/orbit.hpp"
#include "gfmap/partition.hpp"

namespace gfmap {

// |(f^n)'(x)| / |(f^n)'(y)| for x, y in I. Throws PreconditionError when
// some f^i(I), i < n, meets a critical neighbourhood.
double naive_distortion(const PiecewiseMap& map, Interval interval, int n, double x, double y);

// Sum over i < n of |f^i(I)|^alpha; f^i must be monotone on I.
double orbit_length_sum(const PiecewiseMap& map, Interval interval, int n, double alpha);

// Sum over i < n of log|f'(f^i(x))| (forward chain rule, no checks).
double chain_log_derivative(const PiecewiseMap& map, double x, int n);

// One sample of the Denjoy-Koebe bound: g is the inverse of f^n on a level
// n + n0 interval, x and y lie in its image, a level n0 interval.
struct DistortionSample {
  int n = 0;
  double x = 0.0;
  double y = 0.0;
  double D = 0.0;                  // distance of {x, y} to the post-critical set
  double boundary_distance = 0.0;  // distance of {x, y} to the image interval's ends
  double logratio = 0.0;           // log |g'(x)| - log |g'(y)|
  double gx = 0.0;                 // g(x)
  double gy = 0.0;                 // g(y)
};

struct DistortionFit {
  int base_level = 0;
  int depth = 0;
  std::vector<DistortionSample> samples;
  double A = 0.0;
  double B = 0.0;
  double A_tight = 0.0;  // max(logratio - B/D) over the fitting samples
  std::size_t violations = 0;
  std::size_t fresh_samples = 0;
  std::size_t fresh_violations = 0;
  double fresh_max_excess = 0.0;  // max(logratio - A - B/D) on the fresh samples
  bool bounded = true;            // fresh samples stayed under the fitted bound
};

// Draws `count` samples from levels n + n0, n = 1 .. depth - n0, of the tower.
std::vector<DistortionSample> distortion_samples(const PiecewiseMap& map, const PartitionTower& tower,
                                                 const std::vector<double>& postcritical, int base_level,
                                                 std::size_t count, std::uint64_t seed, std::uint64_t stream);

// Fits logratio <= A + B/D: B is the smallest grid value in {0, 2^-10 .. 2^10}
// at which the upper tail of logratio - B/D has settled (its scale, from the
// top order statistics, is small against A). A is the sample max plus a
// margin sized from that tail scale. Validates on fresh_factor * sample_count
// new samples. Requires depth >= n0 + 4.
DistortionFit denjoy_koebe_fit(const PiecewiseMap& map, const PartitionTower& tower, const OrbitReport& orbits,
                               int base_level, std::size_t sample_count, std::uint64_t seed,
                               std::size_t fresh_factor = 10);

struct DistortionTrendPoint {
  int depth = 0;
  double A = 0.0;
  double B = 0.0;
  double max_logratio = 0.0;
};

// The fit repeated on the tower truncated at each depth in `depths`.
std::vector<DistortionTrendPoint> distortion_trend(const PiecewiseMap& map, const PartitionTower& tower,
                                                   const OrbitReport& orbits, int base_level,
                                                   std::size_t sample_count, std::uint64_t seed,
                                                   const std::vector<int>& depths);

}  // namespace gfmap

#endif  // GFMAP_DISTORTION_HPP
