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

#include "gfmap/conjugacy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gfmap/errors.hpp"
#include "gfmap/orbit.hpp"

namespace gfmap {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string lap_symbol(std::size_t laps, std::size_t k) {
  if (laps == 2) return k == 0 ? "L" : "R";
  return "I" + std::to_string(k);
}

std::string critical_symbol(std::size_t criticals, std::size_t k) {
  if (criticals == 1) return "C";
  return "C" + std::to_string(k);
}

std::string address(const PiecewiseMap& map, double x) {
  const double tol = map.tol_orbit();
  const std::size_t nlaps = map.laps().size();
  if (auto k = map.critical_near(x, tol)) return critical_symbol(map.criticals().size(), *k);
  const Interval d = map.domain();
  if (x <= d.left + tol) return lap_symbol(nlaps, 0);
  if (x >= d.right - tol) return lap_symbol(nlaps, nlaps - 1);
  const double resolution = 1e-8 * d.length();
  for (std::size_t i = 0; i + 1 < nlaps; ++i) {
    const double join = map.laps()[i].interval().right;
    if (std::fabs(x - join) <= resolution)
      throw AmbiguousAddress("orbit point " + fmt(x) + " is within " + fmt(std::fabs(x - join)) +
                             " of the lap join " + fmt(join) + " but not at it");
  }
  return lap_symbol(nlaps, map.lap_index(x));
}

double snap(const PiecewiseMap& map, double y) {
  const double tol = map.tol_orbit();
  for (const auto& c : map.criticals())
    if (std::fabs(y - c.c) <= tol) return c.c;
  const Interval d = map.domain();
  if (std::fabs(y - d.left) <= tol) return d.left;
  if (std::fabs(y - d.right) <= tol) return d.right;
  return std::clamp(y, d.left, d.right);
}

}  // namespace

std::string KneadingSequence::str() const {
  std::string s;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (i) s += ' ';
    s += symbols[i];
  }
  return s;
}

const char* KneadingInvariant::convention() {
  return "lap containing the point; critical symbol within tol_orbit of a critical point; "
         "domain boundary points take the unique lap containing them";
}

bool KneadingInvariant::operator==(const KneadingInvariant& other) const {
  if (depth != other.depth || orientations != other.orientations) return false;
  if (sequences.size() != other.sequences.size()) return false;
  for (std::size_t i = 0; i < sequences.size(); ++i)
    if (sequences[i].symbols != other.sequences[i].symbols) return false;
  return true;
}

KneadingInvariant kneading(const PiecewiseMap& map, int depth) {
  if (depth < 1) throw PreconditionError("kneading depth must be at least 1");
  const OrbitReport orbits = critical_orbits(map);
  critical_chains(map, orbits);

  KneadingInvariant k;
  k.depth = depth;
  for (const auto& lap : map.laps()) k.orientations.push_back(lap.orientation());
  for (std::size_t i = 0; i < map.criticals().size(); ++i) {
    KneadingSequence s;
    s.critical = i;
    s.critical_point = map.criticals()[i].c;
    double x = snap(map, map(s.critical_point));
    for (int step = 0; step < depth; ++step) {
      s.symbols.push_back(address(map, x));
      x = snap(map, map(x));
    }
    k.sequences.push_back(std::move(s));
  }
  return k;
}

KneadingInvariant kneading(const PiecewiseMap& map, const PartitionTower& tower, int depth) {
  if (depth > tower.depth())
    throw PreconditionError("kneading depth " + std::to_string(depth) + " exceeds the tower depth " +
                            std::to_string(tower.depth()));
  return kneading(map, depth);
}

std::optional<std::string> kneading_difference(const KneadingInvariant& f, const KneadingInvariant& g) {
  if (f.orientations.size() != g.orientations.size())
    return "lap counts differ (" + std::to_string(f.orientations.size()) + " vs " +
           std::to_string(g.orientations.size()) + ")";
  for (std::size_t i = 0; i < f.orientations.size(); ++i)
    if (f.orientations[i] != g.orientations[i]) return "lap " + std::to_string(i) + " has opposite orientation";
  if (f.sequences.size() != g.sequences.size()) return "critical point counts differ";
  if (f.depth != g.depth) return "kneading depths differ";
  for (std::size_t i = 0; i < f.sequences.size(); ++i) {
    const auto& a = f.sequences[i].symbols;
    const auto& b = g.sequences[i].symbols;
    for (std::size_t j = 0; j < a.size(); ++j)
      if (a[j] != b[j])
        return "critical value " + std::to_string(i) + " differs at step " + std::to_string(j + 1) + " (" + a[j] +
               " vs " + b[j] + ")";
  }
  return std::nullopt;
}

PLHomeomorphism::PLHomeomorphism(std::vector<double> xs, std::vector<double> ys, int depth)
    : xs_(std::move(xs)), ys_(std::move(ys)), depth_(depth) {
  if (xs_.size() != ys_.size()) throw PreconditionError("knot coordinate lists differ in length");
  if (xs_.size() < 2) throw PreconditionError("a homeomorphism needs at least two knots");
  for (std::size_t i = 1; i < xs_.size(); ++i)
    if (!(xs_[i] > xs_[i - 1]) || !(ys_[i] > ys_[i - 1]))
      throw PreconditionError("knots must be strictly increasing in both coordinates (index " +
                              std::to_string(i) + ")");
}

double PLHomeomorphism::interpolate(const std::vector<double>& a, const std::vector<double>& b, double x) {
  if (x < a.front() || x > a.back())
    throw OutOfDomain(fmt(x) + " outside [" + fmt(a.front()) + ", " + fmt(a.back()) + "]");
  auto it = std::upper_bound(a.begin(), a.end(), x);
  if (it == a.end()) return b.back();
  const std::size_t j = static_cast<std::size_t>(it - a.begin());
  const double x0 = a[j - 1], x1 = a[j];
  if (x == x0) return b[j - 1];
  const double s = (x - x0) / (x1 - x0);
  return b[j - 1] + s * (b[j] - b[j - 1]);
}

double PLHomeomorphism::operator()(double x) const { return interpolate(xs_, ys_, x); }

double PLHomeomorphism::inverse(double y) const { return interpolate(ys_, xs_, y); }

PLHomeomorphism PLHomeomorphism::inverted() const {
  PLHomeomorphism h(ys_, xs_, depth_);
  h.qc_estimate = qc_estimate;
  return h;
}

double qs_constant(const PLHomeomorphism& h, int x_samples, int scale_levels) {
  if (x_samples < 1 || scale_levels < 1) throw PreconditionError("qs_constant needs positive sample counts");
  const Interval d = h.domain();
  const double range = d.length();
  double best = 1.0;
  for (int i = 0; i < x_samples; ++i) {
    const double x = x_samples == 1 ? d.midpoint() : d.left + range * i / (x_samples - 1);
    const double hx = h(x);
    for (int k = 1; k <= scale_levels; ++k) {
      const double t = std::ldexp(range, -k);
      if (x - t < d.left || x + t > d.right) continue;
      const double left = hx - h(x - t);
      const double right = h(x + t) - hx;
      if (!(left > 0.0) || !(right > 0.0)) continue;
      const double r = left / right;
      best = std::max(best, std::max(r, 1.0 / r));
    }
  }
  return best;
}

Conjugacy conjugate(const PiecewiseMap& f, const PiecewiseMap& g, int depth, std::size_t test_points) {
  if (depth < 1) throw PreconditionError("conjugacy depth must be at least 1");
  if (test_points < 1) throw PreconditionError("need at least one test point");
  KneadingInvariant kf = kneading(f, depth);
  KneadingInvariant kg = kneading(g, depth);
  if (auto diff = kneading_difference(kf, kg)) throw KneadingMismatch("maps are not conjugate: " + *diff);

  const PartitionTower tf = PartitionTower::build(f, depth);
  const PartitionTower tg = PartitionTower::build(g, depth);
  for (int n = 1; n <= depth; ++n)
    if (tf.endpoint_count(n) != tg.endpoint_count(n))
      throw CardinalityMismatch("level " + std::to_string(n) + " has " + std::to_string(tf.endpoint_count(n)) +
                                " endpoints for f and " + std::to_string(tg.endpoint_count(n)) + " for g");
  const auto bf = tf.births();
  const auto bg = tg.births();
  for (std::size_t i = 0; i < bf.size(); ++i)
    if (bf[i] != bg[i])
      throw CardinalityMismatch("endpoint " + std::to_string(i) + " appears at level " + std::to_string(bf[i]) +
                                " for f and " + std::to_string(bg[i]) + " for g");

  const auto pf = tf.points();
  const auto pg = tg.points();
  Conjugacy out{PLHomeomorphism({pf.begin(), pf.end()}, {pg.begin(), pg.end()}, depth), std::move(kf),
                std::move(kg)};

  const Interval d = f.domain();
  const Interval dg = g.domain();
  out.test_points = test_points;
  for (std::size_t j = 0; j < test_points; ++j) {
    // cell midpoints, so the grid does not sit on dyadic knots
    const double x = d.left + d.length() * (static_cast<double>(j) + 0.5) / static_cast<double>(test_points);
    const double lhs = out.h(std::clamp(f(x), d.left, d.right));
    const double rhs = g(std::clamp(out.h(x), dg.left, dg.right));
    out.defect = std::max(out.defect, std::fabs(lhs - rhs));
  }
  out.defect_bound = 2.0 * tg.lambda(depth);
  out.defect_ok = out.defect <= out.defect_bound;
  out.h.qc_estimate = qs_constant(out.h);
  return out;
}

}  // namespace gfmap
