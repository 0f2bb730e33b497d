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

#ifndef GFMAP_REPORT_HPP
#define GFMAP_REPORT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gfmap/conjugacy.hpp"
#include "gfmap/distortion.hpp"
#include "gfmap/geometry.hpp"
#include "gfmap/map_model.hpp"
#include "gfmap/orbit.hpp"
#include "gfmap/partition.hpp"

namespace gfmap {

// Map config JSON:
//   {"name": "...", "domain": [a, b], "alpha": 1,
//    "laps": [{"interval": [l, r], "expr": "..."}, ...],
//    "critical_points": [{"c": 0, "gamma": 2, "A": .., "B": .., "nbhd_radius": ..}]}
// name, alpha, A, B and nbhd_radius are optional. Unknown keys are rejected.
MapConfig parse_map_config(std::string_view json_text);
MapConfig load_map_config(const std::string& path);

// Canonical JSON of a config; parse_map_config(dump) gives the same config.
std::string dump_map_config(const MapConfig& config, bool pretty = true);

// FNV-1a of the compact canonical dump, as 16 hex digits.
std::string config_hash(const MapConfig& config);

struct RunMeta {
  std::string command;
  std::uint64_t seed = 0;
  std::vector<std::string> config_hashes;
  bool reproducible = false;  // drops the timestamp
};

// "# gfmap <version> command=<cmd> seed=<s> config=<hash>[,<hash>] [time=...]"
std::string csv_header(const RunMeta& meta);

std::string analysis_json(const PiecewiseMap& map, const AnalysisReport& report, const AnalysisOptions& options,
                          const RunMeta& meta);

// n, intervals, lambda, bc, nc. Geometry columns are empty where undefined.
std::string tower_csv(const PartitionTower& tower, const RunMeta& meta);

std::string distortion_csv(const DistortionFit& fit, const RunMeta& meta);
std::string distortion_summary_json(const DistortionFit& fit, const std::vector<DistortionTrendPoint>& trend,
                                    const RunMeta& meta);

std::string kneading_json(const std::vector<const KneadingInvariant*>& invariants,
                          std::optional<std::string> difference, const RunMeta& meta);

std::string periodic_json(const std::vector<PeriodicPoint>& points, int max_period, const RunMeta& meta);

std::string knots_csv(const Conjugacy& c, const RunMeta& meta);
std::string conjugacy_summary_json(const Conjugacy& c, const RunMeta& meta);

}  // namespace gfmap

#endif  // GFMAP_REPORT_HPP
