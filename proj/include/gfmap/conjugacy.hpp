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

#ifndef GFMAP_CONJUGACY_HPP
#define GFMAP_CONJUGACY_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gfmap/map_model.hpp"
#include "gfmap/partition.hpp"

namespace gfmap {

// Itinerary of the critical value f(c) for `depth` steps.
struct KneadingSequence {
  std::size_t critical = 0;
  double critical_point = 0.0;
  std::vector<std::string> symbols;

  std::string str() const;  // symbols joined by spaces
};

// Symbols: "L"/"R"/"C" for maps with two laps, "I<k>"/"C<k>" otherwise. A
// point within tol_orbit of a critical point gets the critical symbol; a
// domain boundary point gets the one lap that contains it.
struct KneadingInvariant {
  int depth = 0;
  std::vector<Orientation> orientations;  // per lap
  std::vector<KneadingSequence> sequences;

  static const char* convention();
  bool operator==(const KneadingInvariant& other) const;
};

// Requires a critically finite map without critical cycles. Throws
// AmbiguousAddress when an orbit point lies closer than 1e-8 of the domain
// length to a lap join without being within tol_orbit of it.
KneadingInvariant kneading(const PiecewiseMap& map, int depth);
// Same; `depth` must not exceed the tower depth.
KneadingInvariant kneading(const PiecewiseMap& map, const PartitionTower& tower, int depth);

// Description of the first difference, or nothing when equal.
std::optional<std::string> kneading_difference(const KneadingInvariant& f, const KneadingInvariant& g);

// Increasing piecewise-linear homeomorphism through the knots (x_i, y_i).
class PLHomeomorphism {
 public:
  // Both coordinate lists strictly increasing, at least two knots.
  PLHomeomorphism(std::vector<double> xs, std::vector<double> ys, int depth = 0);

  double operator()(double x) const;
  double inverse(double y) const;
  PLHomeomorphism inverted() const;

  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }
  std::size_t size() const { return xs_.size(); }
  int depth() const { return depth_; }
  Interval domain() const { return {xs_.front(), xs_.back()}; }
  Interval range() const { return {ys_.front(), ys_.back()}; }

  double qc_estimate = 1.0;

 private:
  static double interpolate(const std::vector<double>& a, const std::vector<double>& b, double x);

  std::vector<double> xs_;
  std::vector<double> ys_;
  int depth_ = 0;
};

// Sampled max of max(r, 1/r), r = (h(x) - h(x-t)) / (h(x+t) - h(x)), over x
// on a uniform grid of x_samples points and t = |domain| 2^-k, k =
// 1..scale_levels. Triples leaving the domain are skipped. A lower estimate
// of the quasisymmetric constant.
double qs_constant(const PLHomeomorphism& h, int x_samples = 1000, int scale_levels = 20);

struct Conjugacy {
  PLHomeomorphism h;
  KneadingInvariant kneading_f;
  KneadingInvariant kneading_g;
  double defect = 0.0;        // sup |h(f(x)) - g(h(x))| over test_points cell midpoints
  double defect_bound = 0.0;  // 2 lambda_depth(g)
  bool defect_ok = false;
  std::size_t test_points = 0;
};

// Matches the depth-level endpoints of f and g in order. Throws
// KneadingMismatch when the kneading invariants, lap counts or lap
// orientations differ and CardinalityMismatch when the towers do not have
// the same combinatorics.
Conjugacy conjugate(const PiecewiseMap& f, const PiecewiseMap& g, int depth, std::size_t test_points = 4097);

}  // namespace gfmap

#endif  // GFMAP_CONJUGACY_HPP
