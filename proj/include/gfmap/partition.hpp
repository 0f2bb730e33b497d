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

#ifndef GFMAP_PARTITION_HPP
#define GFMAP_PARTITION_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gfmap/map_model.hpp"
#include "gfmap/orbit.hpp"

namespace gfmap {

struct PartitionInterval {
  double left = 0.0;
  double right = 0.0;
  std::size_t lap = 0;  // lap of the first step

  double length() const { return right - left; }
};

struct PartitionLevel {
  int level = 1;
  std::vector<double> endpoints;  // strictly increasing, includes the domain boundary
  std::vector<PartitionInterval> intervals;

  double lambda() const;
};

// Builds intervals (with lap indices) from sorted endpoints.
PartitionLevel make_level(const PiecewiseMap& map, int level, std::vector<double> endpoints);

// Domain boundary plus every critical orbit point.
PartitionLevel first_partition(const PiecewiseMap& map, const OrbitReport& orbits);

struct MarkovCheck {
  bool ok = true;
  std::optional<std::size_t> violating;  // interval index
  std::string message;

  explicit operator bool() const { return ok; }
};

// Every interval must map onto a union of level intervals, with its endpoints
// landing on level endpoints.
MarkovCheck verify_markov(const PiecewiseMap& map, const PartitionLevel& level1);

// Hard cap on the number of intervals in the deepest level.
inline constexpr std::size_t kMaxTowerIntervals = std::size_t{1} << 25;

// Nested partitions stored as the deepest endpoint set with the level at
// which each endpoint first appears. Level n consists of the endpoints with
// birth <= n.
class PartitionTower {
 public:
  // Starts from a Markov first level; throws PreconditionError otherwise.
  PartitionTower(const PiecewiseMap& map, const PartitionLevel& first);

  // Convenience: orbits, first level and refinement up to `depth`.
  static PartitionTower build(const PiecewiseMap& map, int depth);
  static PartitionTower build(const PiecewiseMap& map, const OrbitReport& orbits, int depth);

  // Adds level depth()+1: E_{n+1} = E_1 U f^-1(E_n). Throws
  // RootBracketFailure, NestednessViolation or ResourceLimit.
  void refine(const PiecewiseMap& map);
  void refine_to(const PiecewiseMap& map, int depth);

  int depth() const { return static_cast<int>(counts_.size()); }
  double domain_length() const { return domain_.length(); }
  Interval domain() const { return domain_; }

  std::span<const double> points() const { return points_; }
  std::span<const std::uint8_t> births() const { return births_; }

  std::size_t endpoint_count(int n) const;
  std::size_t interval_count(int n) const { return endpoint_count(n) - 1; }
  double lambda(int n) const;
  const std::vector<double>& lambdas() const { return lambda_; }

  std::vector<double> endpoints(int n) const;
  PartitionLevel level(const PiecewiseMap& map, int n) const;

  // Text form: one "x birth" pair per line with round-trip precision.
  std::string serialize() const;
  static PartitionTower deserialize(std::string_view text);

 private:
  PartitionTower() = default;

  Interval domain_;
  std::vector<double> points_;
  std::vector<std::uint8_t> births_;
  std::vector<std::size_t> counts_;  // endpoint count per level
  std::vector<double> lambda_;
  double dedupe_tol_ = 0.0;
};

struct DecayFit {
  double K = 0.0;
  double mu = 0.0;
  double residual = 0.0;  // rms of the log fit
  int n_min = 0;
  int n_max = 0;

  double bound(int n) const;  // K mu^n (1 + 10 residual)
};

// Least squares on (n, log lambda_n), n in [n_min, n_max]. Throws DegenerateFit
// when the window is shorter than five levels or a lambda is not positive.
DecayFit fit_decay(const PartitionTower& tower, int n_min, int n_max);
DecayFit fit_decay(const PartitionTower& tower);  // window [5, depth]

// Decay is declared when mu < kDecayMuMax and the fits over the main window
// and its upper half differ by at most kDecayDriftMax.
inline constexpr double kDecayMuMax = 0.8;
inline constexpr double kDecayDriftMax = 0.1;

struct DecayVerdict {
  bool conclusive = false;
  bool decays = false;
  DecayFit main;
  DecayFit upper;
  double drift = 0.0;
  std::string reason;
};

DecayVerdict decay_verdict(const PartitionTower& tower, std::optional<std::pair<int, int>> window = {});

}  // namespace gfmap

#endif  // GFMAP_PARTITION_HPP
