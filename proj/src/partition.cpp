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

#include "gfmap/partition.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

#include "gfmap/errors.hpp"
#include "root_solve.hpp"

namespace gfmap {

namespace {

constexpr double kDedupeRel = 1e-12;
constexpr double kRootRel = 1e-13;

std::string fmt(double v) {
  std::array<char, 32> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

double max_gap(const std::vector<double>& e) {
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < e.size(); ++i) m = std::max(m, e[i + 1] - e[i]);
  return m;
}

// Nearest endpoint to x in a sorted list.
double nearest(const std::vector<double>& e, double x) {
  auto it = std::lower_bound(e.begin(), e.end(), x);
  double best = it == e.end() ? e.back() : *it;
  if (it != e.begin() && std::fabs(*(it - 1) - x) < std::fabs(best - x)) best = *(it - 1);
  return best;
}

}  // namespace

double PartitionLevel::lambda() const { return max_gap(endpoints); }

PartitionLevel make_level(const PiecewiseMap& map, int level, std::vector<double> endpoints) {
  PartitionLevel out;
  out.level = level;
  out.endpoints = std::move(endpoints);
  for (std::size_t i = 0; i + 1 < out.endpoints.size(); ++i) {
    const double l = out.endpoints[i], r = out.endpoints[i + 1];
    out.intervals.push_back({l, r, map.lap_index(0.5 * (l + r))});
  }
  return out;
}

PartitionLevel first_partition(const PiecewiseMap& map, const OrbitReport& orbits) {
  if (!orbits.critically_finite) throw NotCriticallyFinite("first partition needs finite critical orbits");
  const Interval d = map.domain();
  std::vector<double> pts{d.left, d.right};
  for (const auto& o : orbits.orbits) pts.insert(pts.end(), o.points.begin(), o.points.end());
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  for (double x : pts)
    if (out.empty() || x - out.back() > map.tol_orbit()) out.push_back(x);
  // Keep the boundary exact even if an orbit point sat just inside it.
  out.front() = d.left;
  out.back() = d.right;
  return make_level(map, 1, std::move(out));
}

MarkovCheck verify_markov(const PiecewiseMap& map, const PartitionLevel& level1) {
  const double tol = map.tol_orbit();
  const auto& e = level1.endpoints;
  MarkovCheck check;
  auto fail = [&](std::size_t i, std::string msg) {
    check.ok = false;
    check.violating = i;
    check.message = "interval " + std::to_string(i) + " [" + fmt(e[i]) + ", " + fmt(e[i + 1]) + "]: " + msg;
    return check;
  };
  if (e.size() < 2 || e.front() != map.domain().left || e.back() != map.domain().right) {
    check.ok = false;
    check.message = "endpoints must start and end at the domain boundary";
    return check;
  }
  for (std::size_t i = 0; i + 1 < e.size(); ++i) {
    if (!(e[i] < e[i + 1])) return fail(i, "endpoints are not strictly increasing");
    for (const auto& c : map.criticals())
      if (c.c > e[i] && c.c < e[i + 1]) return fail(i, "contains the critical point " + fmt(c.c));
    for (double x : {e[i], e[i + 1]}) {
      const std::size_t lap = map.lap_index(0.5 * (e[i] + e[i + 1]));
      const double y = map.lap_value(lap, x);
      if (std::fabs(nearest(e, y) - y) > tol)
        return fail(i, "endpoint " + fmt(x) + " maps to " + fmt(y) + ", which is not an endpoint");
    }
  }
  return check;
}

PartitionTower::PartitionTower(const PiecewiseMap& map, const PartitionLevel& first) {
  MarkovCheck check = verify_markov(map, first);
  if (!check) throw PreconditionError("first partition is not Markov: " + check.message);
  domain_ = map.domain();
  dedupe_tol_ = kDedupeRel * domain_.length();
  points_ = first.endpoints;
  births_.assign(points_.size(), 1);
  counts_.push_back(points_.size());
  lambda_.push_back(max_gap(points_));
}

PartitionTower PartitionTower::build(const PiecewiseMap& map, const OrbitReport& orbits, int depth) {
  if (depth < 1) throw PreconditionError("tower depth must be at least 1");
  if (!orbits.critically_finite) throw NotCriticallyFinite("tower needs finite critical orbits");
  PartitionTower tower(map, first_partition(map, orbits));
  tower.refine_to(map, depth);
  return tower;
}

PartitionTower PartitionTower::build(const PiecewiseMap& map, int depth) {
  return build(map, critical_orbits(map), depth);
}

void PartitionTower::refine_to(const PiecewiseMap& map, int depth) {
  while (this->depth() < depth) refine(map);
}

void PartitionTower::refine(const PiecewiseMap& map) {
  const int n = depth();
  if (n >= 255) throw ResourceLimit("tower depth is limited to 255 levels");
  std::vector<double> targets;
  for (std::size_t i = 0; i < points_.size(); ++i)
    if (births_[i] == n) targets.push_back(points_[i]);

  std::vector<double> fresh;
  const auto laps = map.laps();
  for (std::size_t k = 0; k < laps.size(); ++k) {
    const Lap& lap = laps[k];
    const Interval iv = lap.interval();
    const double yl = lap.value(iv.left), yr = lap.value(iv.right);
    const double lo_img = std::min(yl, yr), hi_img = std::max(yl, yr);
    const bool inc = lap.orientation() == Orientation::increasing;
    auto first = std::lower_bound(targets.begin(), targets.end(), lo_img);
    auto last = std::upper_bound(targets.begin(), targets.end(), hi_img);
    const auto count = static_cast<std::size_t>(last - first);
    if (points_.size() + fresh.size() + count > kMaxTowerIntervals + 1)
      throw ResourceLimit("level " + std::to_string(n + 1) + " would exceed " +
                          std::to_string(kMaxTowerIntervals) + " intervals");
    // Walk targets so that preimages come out increasing; each root brackets
    // the next one and warm-starts Newton.
    double lo = iv.left, prev_x = iv.left, prev_y = inc ? yl : yr;
    bool have_prev = false;
    for (std::size_t j = 0; j < count; ++j) {
      const double t = inc ? *(first + j) : *(last - 1 - j);
      double x;
      if (t == yl) {
        x = iv.left;
      } else if (t == yr) {
        x = iv.right;
      } else {
        double guess = 0.5 * (lo + iv.right);
        if (have_prev) {
          const double d = lap.deriv(prev_x);
          if (d != 0.0) guess = prev_x + (t - prev_y) / d;
        }
        auto g = [&](double z) { return lap.value(z) - t; };
        auto dg = [&](double z) { return lap.deriv(z); };
        auto root = detail::safeguarded_newton(g, dg, lo, iv.right, guess);
        if (!root && lo != iv.left) root = detail::safeguarded_newton(g, dg, iv.left, iv.right, guess);
        if (!root)
          throw RootBracketFailure("no preimage of " + fmt(t) + " on lap " + std::to_string(k) + " in [" +
                                   fmt(iv.left) + ", " + fmt(iv.right) + "]; is the lap monotone?");
        x = *root;
        const double residual = std::fabs(lap.value(x) - t);
        if (residual > kRootRel * std::max(1.0, std::fabs(t)))
          throw RootBracketFailure("preimage of " + fmt(t) + " on lap " + std::to_string(k) +
                                   " has residual " + fmt(residual));
      }
      fresh.push_back(x);
      lo = x;
      prev_x = x;
      prev_y = t;
      have_prev = true;
    }
  }

  // Merge; a fresh point closer than the dedupe tolerance to a kept point is
  // the same endpoint.
  std::vector<double> merged;
  std::vector<std::uint8_t> births;
  merged.reserve(points_.size() + fresh.size());
  births.reserve(points_.size() + fresh.size());
  const auto level = static_cast<std::uint8_t>(n + 1);
  std::size_t i = 0, j = 0;
  while (i < points_.size() || j < fresh.size()) {
    if (j == fresh.size() || (i < points_.size() && points_[i] <= fresh[j])) {
      if (!merged.empty() && births.back() == level && points_[i] - merged.back() <= dedupe_tol_) {
        merged.pop_back();
        births.pop_back();
      }
      merged.push_back(points_[i]);
      births.push_back(births_[i]);
      ++i;
    } else {
      const double x = fresh[j++];
      if (!merged.empty() && x - merged.back() <= dedupe_tol_) continue;
      merged.push_back(x);
      births.push_back(level);
    }
  }
  for (std::size_t k = 0; k + 1 < merged.size(); ++k)
    if (!(merged[k] < merged[k + 1]))
      throw NestednessViolation("level " + std::to_string(n + 1) + " endpoints not strictly increasing at " +
                                fmt(merged[k]));
  if (merged.size() < points_.size())
    throw NestednessViolation("level " + std::to_string(n + 1) + " lost endpoints of level " + std::to_string(n));

  points_ = std::move(merged);
  births_ = std::move(births);
  counts_.push_back(points_.size());
  lambda_.push_back(max_gap(points_));
}

std::size_t PartitionTower::endpoint_count(int n) const {
  if (n < 1 || n > depth()) throw PreconditionError("level " + std::to_string(n) + " not in tower");
  return counts_[n - 1];
}

double PartitionTower::lambda(int n) const {
  if (n < 1 || n > depth()) throw PreconditionError("level " + std::to_string(n) + " not in tower");
  return lambda_[n - 1];
}

std::vector<double> PartitionTower::endpoints(int n) const {
  std::vector<double> out;
  out.reserve(endpoint_count(n));
  for (std::size_t i = 0; i < points_.size(); ++i)
    if (births_[i] <= n) out.push_back(points_[i]);
  return out;
}

PartitionLevel PartitionTower::level(const PiecewiseMap& map, int n) const {
  return make_level(map, n, endpoints(n));
}

std::string PartitionTower::serialize() const {
  std::string out = "gfmap-tower 1 " + fmt(domain_.left) + " " + fmt(domain_.right) + " " +
                    std::to_string(depth()) + " " + std::to_string(points_.size()) + "\n";
  out.reserve(out.size() + points_.size() * 28);
  for (std::size_t i = 0; i < points_.size(); ++i) {
    out += fmt(points_[i]);
    out += ' ';
    out += std::to_string(births_[i]);
    out += '\n';
  }
  return out;
}

PartitionTower PartitionTower::deserialize(std::string_view text) {
  const char* p = text.data();
  const char* end = text.data() + text.size();
  auto skip = [&] {
    while (p < end && (*p == ' ' || *p == '\n')) ++p;
  };
  auto read_double = [&] {
    skip();
    double v = 0.0;
    auto res = std::from_chars(p, end, v);
    if (res.ec != std::errc()) throw ConfigError("malformed tower text");
    p = res.ptr;
    return v;
  };
  auto read_int = [&] {
    skip();
    long long v = 0;
    auto res = std::from_chars(p, end, v);
    if (res.ec != std::errc()) throw ConfigError("malformed tower text");
    p = res.ptr;
    return v;
  };
  const std::string_view magic = "gfmap-tower 1";
  if (text.substr(0, magic.size()) != magic) throw ConfigError("not a serialized tower");
  p += magic.size();
  PartitionTower t;
  t.domain_.left = read_double();
  t.domain_.right = read_double();
  t.dedupe_tol_ = kDedupeRel * t.domain_.length();
  const auto depth = read_int();
  const auto size = read_int();
  if (depth < 1 || depth > 255 || size < 2) throw ConfigError("malformed tower header");
  t.points_.resize(static_cast<std::size_t>(size));
  t.births_.resize(static_cast<std::size_t>(size));
  for (long long i = 0; i < size; ++i) {
    t.points_[i] = read_double();
    const auto b = read_int();
    if (b < 1 || b > depth) throw ConfigError("tower birth level out of range");
    t.births_[i] = static_cast<std::uint8_t>(b);
  }
  for (int n = 1; n <= depth; ++n) {
    std::vector<double> e;
    for (std::size_t i = 0; i < t.points_.size(); ++i)
      if (t.births_[i] <= n) e.push_back(t.points_[i]);
    t.counts_.push_back(e.size());
    t.lambda_.push_back(max_gap(e));
  }
  return t;
}

double DecayFit::bound(int n) const { return K * std::pow(mu, n) * (1.0 + 10.0 * residual); }

DecayFit fit_decay(const PartitionTower& tower, int n_min, int n_max) {
  if (n_min < 1 || n_max > tower.depth() || n_max < n_min + 4)
    throw DegenerateFit("decay window [" + std::to_string(n_min) + ", " + std::to_string(n_max) +
                        "] needs 1 <= n_min, n_max <= depth " + std::to_string(tower.depth()) +
                        " and n_max >= n_min + 4");
  const int m = n_max - n_min + 1;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> ys;
  for (int n = n_min; n <= n_max; ++n) {
    const double l = tower.lambda(n);
    if (!(l > 0.0)) throw DegenerateFit("lambda_" + std::to_string(n) + " is not positive");
    const double y = std::log(l);
    ys.push_back(y);
    sx += n;
    sy += y;
    sxx += double(n) * n;
    sxy += n * y;
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / m;
  double ss = 0.0;
  for (int n = n_min; n <= n_max; ++n) {
    const double r = ys[n - n_min] - (intercept + slope * n);
    ss += r * r;
  }
  DecayFit fit;
  fit.K = std::exp(intercept);
  fit.mu = std::exp(slope);
  fit.residual = std::sqrt(ss / m);
  fit.n_min = n_min;
  fit.n_max = n_max;
  return fit;
}

DecayFit fit_decay(const PartitionTower& tower) { return fit_decay(tower, 5, tower.depth()); }

DecayVerdict decay_verdict(const PartitionTower& tower, std::optional<std::pair<int, int>> window) {
  DecayVerdict v;
  const int a = window ? window->first : 5;
  const int b = window ? window->second : tower.depth();
  if (b > tower.depth() || b < a + 4) {
    v.reason = "depth " + std::to_string(tower.depth()) + " too shallow for a decay fit over [" +
               std::to_string(a) + ", " + std::to_string(b) + "]";
    return v;
  }
  int half = std::max(a, b / 2);
  if (b - half < 4) half = b - 4;
  v.main = fit_decay(tower, a, b);
  v.upper = fit_decay(tower, half, b);
  v.drift = std::fabs(v.main.mu - v.upper.mu);
  v.conclusive = true;
  v.decays = v.main.mu < kDecayMuMax && v.drift <= kDecayDriftMax;
  std::ostringstream os;
  os << "mu = " << v.main.mu << " over [" << a << ", " << b << "], " << v.upper.mu << " over [" << half
     << ", " << b << "]";
  if (!(v.main.mu < kDecayMuMax)) os << "; mu not below " << kDecayMuMax;
  if (!(v.drift <= kDecayDriftMax)) os << "; window drift " << v.drift << " exceeds " << kDecayDriftMax;
  v.reason = os.str();
  return v;
}

}  // namespace gfmap
