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

#include "gfmap/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "gfmap/errors.hpp"
#include "sampling.hpp"

namespace gfmap {

namespace {

// B counts as stable once the tail scale of logratio - B/D, estimated from
// the top order statistics, is below kStableScale (1 + |A|).
constexpr double kStableScale = 0.01;
constexpr std::size_t kTailCount = 30;
// The max of an exponential-type tail grows by scale * log(m) when the
// sample grows m-fold; the margin covers an 11-fold sample twice over.
const double kMarginScales = 2.0 * std::log(11.0);

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double distance_to(const std::vector<double>& sorted, double x) {
  if (sorted.empty()) return std::numeric_limits<double>::infinity();
  auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
  double d = std::numeric_limits<double>::infinity();
  if (it != sorted.end()) d = *it - x;
  if (it != sorted.begin()) d = std::min(d, x - *(it - 1));
  return d;
}

void check_avoids(const PiecewiseMap& map, double a, double b, int step) {
  const double lo = std::min(a, b), hi = std::max(a, b);
  for (const auto& c : map.criticals())
    if (hi > c.c - c.nbhd_radius && lo < c.c + c.nbhd_radius)
      throw PreconditionError("image f^" + std::to_string(step) + "(I) = [" + fmt(lo) + ", " + fmt(hi) +
                              "] meets the neighbourhood of the critical point " + fmt(c.c));
}

// log |g'(z)| for the inverse branch along the itinerary; also returns g(z).
double inverse_log_derivative(const PiecewiseMap& map, const std::vector<std::size_t>& itinerary, double z,
                              double& gz) {
  double s = 0.0;
  for (std::size_t k = itinerary.size(); k-- > 0;) {
    const double x = map.preimage(itinerary[k], z);
    s -= std::log(std::fabs(map.lap_deriv(itinerary[k], x)));
    z = x;
  }
  gz = z;
  return s;
}

struct LevelCache {
  explicit LevelCache(const PartitionTower& t) : tower(t), levels(t.depth()) {}

  const PartitionTower& tower;
  std::vector<std::vector<double>> levels;  // sized once; references stay valid

  const std::vector<double>& get(int n) {
    auto& e = levels.at(n - 1);
    if (e.empty()) e = tower.endpoints(n);
    return e;
  }
};

std::vector<DistortionSample> draw(const PiecewiseMap& map, LevelCache& cache, int depth,
                                   const std::vector<double>& postcritical, int n0, std::size_t count,
                                   std::uint64_t seed, std::uint64_t stream) {
  detail::Rng rng(seed, stream);
  const auto& base = cache.get(n0);
  const Interval dom = map.domain();
  std::vector<DistortionSample> out;
  out.reserve(count);
  while (out.size() < count) {
    DistortionSample s;
    s.n = rng.integer(1, depth - n0);
    const auto& e = cache.get(s.n + n0);
    const std::size_t j = rng.index(e.size() - 1);
    double m = 0.5 * (e[j] + e[j + 1]);
    std::vector<std::size_t> itinerary;
    for (int k = 0; k < s.n; ++k) {
      itinerary.push_back(map.lap_index(m));
      m = std::clamp(map(m), dom.left, dom.right);
    }
    auto it = std::upper_bound(base.begin(), base.end(), m);
    if (it == base.end()) --it;
    if (it == base.begin()) ++it;
    const double tl = *(it - 1), tr = *it;
    s.x = rng.uniform(tl, tr);
    s.y = rng.uniform(tl, tr);
    s.D = std::min(distance_to(postcritical, s.x), distance_to(postcritical, s.y));
    s.boundary_distance = std::min({s.x - tl, tr - s.x, s.y - tl, tr - s.y});
    s.logratio = inverse_log_derivative(map, itinerary, s.x, s.gx) - inverse_log_derivative(map, itinerary, s.y, s.gy);
    out.push_back(s);
  }
  return out;
}

struct Bound {
  double A = 0.0;
  double B = 0.0;
  double A_tight = 0.0;
};

Bound fit_bound(const std::vector<DistortionSample>& s) {
  std::vector<double> grid{0.0};
  for (int k = -10; k <= 10; ++k) grid.push_back(std::ldexp(1.0, k));
  std::vector<double> v;
  v.reserve(s.size());
  Bound best;
  for (double B : grid) {
    v.clear();
    for (const auto& x : s)
      if (x.D > 0.0) v.push_back(x.logratio - B / x.D);
    if (v.size() < 8) throw DegenerateFit("too few distortion samples away from the post-critical set");
    const std::size_t k = std::min(kTailCount, v.size() / 4);
    std::partial_sort(v.begin(), v.begin() + k + 1, v.end(), std::greater<>());
    double scale = 0.0;
    for (std::size_t i = 0; i < k; ++i) scale += v[i] - v[k];
    scale /= static_cast<double>(k);
    best.B = B;
    best.A_tight = v[0];
    best.A = v[0] + kMarginScales * scale;
    if (scale <= kStableScale * (1.0 + std::fabs(v[0]))) break;
  }
  return best;
}

}  // namespace

double naive_distortion(const PiecewiseMap& map, Interval interval, int n, double x, double y) {
  if (n < 0) throw PreconditionError("n must be nonnegative");
  if (!interval.contains(x) || !interval.contains(y))
    throw PreconditionError("x and y must lie in the interval");
  double a = interval.left, b = interval.right;
  double lx = 0.0, ly = 0.0;
  for (int i = 0; i < n; ++i) {
    check_avoids(map, a, b, i);
    lx += std::log(std::fabs(map.deriv(x)));
    ly += std::log(std::fabs(map.deriv(y)));
    a = map(a);
    b = map(b);
    x = map(x);
    y = map(y);
  }
  return std::exp(lx - ly);
}

double orbit_length_sum(const PiecewiseMap& map, Interval interval, int n, double alpha) {
  double a = interval.left, b = interval.right, s = 0.0;
  for (int i = 0; i < n; ++i) {
    s += std::pow(std::fabs(b - a), alpha);
    a = map(a);
    b = map(b);
  }
  return s;
}

double chain_log_derivative(const PiecewiseMap& map, double x, int n) {
  double s = 0.0;
  const Interval dom = map.domain();
  for (int i = 0; i < n; ++i) {
    s += std::log(std::fabs(map.lap_deriv(map.lap_index(x), x)));
    x = std::clamp(map(x), dom.left, dom.right);
  }
  return s;
}

std::vector<DistortionSample> distortion_samples(const PiecewiseMap& map, const PartitionTower& tower,
                                                 const std::vector<double>& postcritical, int base_level,
                                                 std::size_t count, std::uint64_t seed, std::uint64_t stream) {
  if (base_level < 1 || tower.depth() < base_level + 1)
    throw PreconditionError("distortion sampling needs depth > base level");
  LevelCache cache(tower);
  return draw(map, cache, tower.depth(), postcritical, base_level, count, seed, stream);
}

DistortionFit denjoy_koebe_fit(const PiecewiseMap& map, const PartitionTower& tower, const OrbitReport& orbits,
                               int base_level, std::size_t sample_count, std::uint64_t seed,
                               std::size_t fresh_factor) {
  if (base_level < 1) throw PreconditionError("base level must be at least 1");
  if (tower.depth() < base_level + 4)
    throw PreconditionError("Denjoy-Koebe fit needs depth >= base level + 4 (depth " +
                            std::to_string(tower.depth()) + ", base level " + std::to_string(base_level) + ")");
  if (sample_count < 2) throw PreconditionError("need at least two samples");
  const std::vector<double> pc = orbits.postcritical();
  LevelCache cache(tower);
  DistortionFit fit;
  fit.base_level = base_level;
  fit.depth = tower.depth();
  fit.samples = draw(map, cache, tower.depth(), pc, base_level, sample_count, seed, 1);
  const Bound b = fit_bound(fit.samples);
  fit.A = b.A;
  fit.B = b.B;
  fit.A_tight = b.A_tight;
  for (const auto& s : fit.samples)
    if (s.D > 0.0 && s.logratio > fit.A + fit.B / s.D) ++fit.violations;

  if (fresh_factor > 0) {
    const auto fresh = draw(map, cache, tower.depth(), pc, base_level, sample_count * fresh_factor, seed, 2);
    fit.fresh_samples = fresh.size();
    fit.fresh_max_excess = -std::numeric_limits<double>::infinity();
    for (const auto& s : fresh) {
      if (!(s.D > 0.0)) continue;
      const double excess = s.logratio - fit.A - fit.B / s.D;
      fit.fresh_max_excess = std::max(fit.fresh_max_excess, excess);
      if (excess > 0.0) ++fit.fresh_violations;
    }
    fit.bounded = fit.fresh_violations == 0;
  }
  return fit;
}

std::vector<DistortionTrendPoint> distortion_trend(const PiecewiseMap& map, const PartitionTower& tower,
                                                   const OrbitReport& orbits, int base_level,
                                                   std::size_t sample_count, std::uint64_t seed,
                                                   const std::vector<int>& depths) {
  const std::vector<double> pc = orbits.postcritical();
  LevelCache cache(tower);
  std::vector<DistortionTrendPoint> out;
  for (int d : depths) {
    if (d < base_level + 4 || d > tower.depth())
      throw PreconditionError("trend depth " + std::to_string(d) + " outside [" + std::to_string(base_level + 4) +
                              ", " + std::to_string(tower.depth()) + "]");
    const auto s = draw(map, cache, d, pc, base_level, sample_count, seed, 1);
    const Bound b = fit_bound(s);
    DistortionTrendPoint p;
    p.depth = d;
    p.A = b.A;
    p.B = b.B;
    for (const auto& x : s) p.max_logratio = std::max(p.max_logratio, x.logratio);
    out.push_back(p);
  }
  return out;
}

}  // namespace gfmap
