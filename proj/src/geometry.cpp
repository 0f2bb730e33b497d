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

#include "gfmap/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gfmap/errors.hpp"
#include "sampling.hpp"

namespace gfmap {

namespace {

constexpr double kSchwarzianTol = 1e-9;
constexpr double kKoebeSlack = 1e-6;
constexpr int kVariationMaxGrid = 1 << 20;
constexpr double kVariationStable = 0.01;
constexpr double kPlateauDrift = 0.1;

double iterate(const PiecewiseMap& map, double x, int n) {
  const Interval d = map.domain();
  for (int i = 0; i < n; ++i) x = std::clamp(map(x), d.left, d.right);
  return x;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

double GeometryConstants::bc_up_to(int depth) const {
  if (depth < 2 || static_cast<std::size_t>(depth - 1) > bc_series.size())
    throw PreconditionError("bounded-geometry series has no entry for depth " + std::to_string(depth));
  return *std::min_element(bc_series.begin(), bc_series.begin() + (depth - 1));
}

GeometryConstants geometry_constants(const PartitionTower& tower) {
  if (tower.depth() < 3) throw PreconditionError("geometry constants need a tower of depth >= 3");
  const auto pts = tower.points();
  const auto birth = tower.births();
  GeometryConstants g;
  for (int m = 1; m <= tower.depth(); ++m) {
    double nc = 1.0, bc = 1.0;
    double prev = 0.0, prev_len = -1.0;
    double parent_left = 0.0, min_child = std::numeric_limits<double>::infinity();
    bool started = false;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (birth[i] > m) continue;
      const double x = pts[i];
      if (!started) {
        started = true;
        prev = parent_left = x;
        continue;
      }
      const double len = x - prev;
      if (prev_len > 0.0) nc = std::min(nc, std::min(len / prev_len, prev_len / len));
      prev_len = len;
      prev = x;
      min_child = std::min(min_child, len);
      if (m >= 2 && birth[i] <= m - 1) {
        bc = std::min(bc, min_child / (x - parent_left));
        parent_left = x;
        min_child = std::numeric_limits<double>::infinity();
      }
    }
    g.nc_series.push_back(nc);
    if (m >= 2) g.bc_series.push_back(bc);
  }
  g.bc = *std::min_element(g.bc_series.begin(), g.bc_series.end());
  g.nc = *std::min_element(g.nc_series.begin(), g.nc_series.end());
  return g;
}

double schwarzian(const PiecewiseMap& map, double x) {
  if (map.critical_near(x, 0.0)) throw PreconditionError("Schwarzian undefined at the critical point " + fmt(x));
  const std::size_t lap = map.lap_index(x);
  const double d1 = map.lap_deriv(lap, x, 1);
  if (d1 == 0.0) throw PreconditionError("Schwarzian undefined where f' = 0 (x = " + fmt(x) + ")");
  const double d2 = map.lap_deriv(lap, x, 2);
  const double d3 = map.lap_deriv(lap, x, 3);
  const double q = d2 / d1;
  return d3 / d1 - 1.5 * q * q;
}

SchwarzianCheck check_nonpositive_schwarzian(const PiecewiseMap& map, int grid_size) {
  if (grid_size < 1) throw PreconditionError("grid_size must be positive");
  SchwarzianCheck check;
  check.max_value = -std::numeric_limits<double>::infinity();
  for (const Lap& lap : map.laps()) {
    const Interval iv = lap.interval();
    for (int k = 0; k < grid_size; ++k) {
      const double x = iv.left + iv.length() * (k + 0.5) / grid_size;
      if (map.critical_near(x, map.tol_orbit())) continue;
      const double d1 = lap.deriv(x, 1);
      if (d1 == 0.0) continue;
      const double q = lap.deriv(x, 2) / d1;
      const double s = lap.deriv(x, 3) / d1 - 1.5 * q * q;
      ++check.points;
      if (s > check.max_value) {
        check.max_value = s;
        check.argmax = x;
      }
      if (!(s <= kSchwarzianTol)) check.nonpositive = false;
    }
  }
  return check;
}

double branch_nonlinearity(const PiecewiseMap& map, const std::vector<std::size_t>& itinerary, double y,
                           double* g_value, double* g_deriv) {
  double nl = 0.0, dg = 1.0, z = y;
  for (std::size_t k = itinerary.size(); k-- > 0;) {
    const std::size_t lap = itinerary[k];
    const double x = map.preimage(lap, z);
    const double d1 = map.lap_deriv(lap, x, 1);
    const double d2 = map.lap_deriv(lap, x, 2);
    nl = (-d2 / (d1 * d1)) * dg + nl;
    dg /= d1;
    z = x;
  }
  if (g_value) *g_value = z;
  if (g_deriv) *g_deriv = dg;
  return nl;
}

KoebeReport koebe_nonlinearity_check(const PiecewiseMap& map, const PartitionTower& tower, int depth,
                                     std::size_t samples, std::uint64_t seed) {
  if (depth < 1 || depth > tower.depth())
    throw PreconditionError("Koebe check depth must lie in 1.." + std::to_string(tower.depth()));
  SchwarzianCheck s = check_nonpositive_schwarzian(map, 10000);
  if (!s.nonpositive)
    throw PreconditionError("Koebe check needs a nonpositive Schwarzian; S = " + fmt(s.max_value) + " at " +
                            fmt(s.argmax));
  std::vector<std::vector<double>> levels;
  for (int n = 1; n <= depth; ++n) levels.push_back(tower.endpoints(n));
  const auto& e1 = levels[0];
  auto snap1 = [&](double v) {
    auto it = std::lower_bound(e1.begin(), e1.end(), v);
    double best = it == e1.end() ? e1.back() : *it;
    if (it != e1.begin() && std::fabs(*(it - 1) - v) < std::fabs(best - v)) best = *(it - 1);
    return std::fabs(best - v) <= map.tol_orbit() ? best : v;
  };

  detail::Rng rng(seed, 0x4b6f656265ULL);
  KoebeReport report;
  for (std::size_t s_i = 0; s_i < samples; ++s_i) {
    KoebeSample ks;
    ks.n = rng.integer(1, depth);
    const auto& e = levels[ks.n - 1];
    const std::size_t j = rng.index(e.size() - 1);
    double m = 0.5 * (e[j] + e[j + 1]);
    for (int k = 0; k < ks.n; ++k) {
      ks.itinerary.push_back(map.lap_index(m));
      if (k + 1 < ks.n) m = iterate(map, m, 1);
    }
    // m now lies in a level-1 interval K; the branch is defined on f(K).
    auto it = std::upper_bound(e1.begin(), e1.end(), m);
    const double kl = *(it - 1), kr = *it;
    const std::size_t last = ks.itinerary.back();
    const double a = snap1(map.lap_value(last, kl)), b = snap1(map.lap_value(last, kr));
    ks.domain = {std::min(a, b), std::max(a, b)};
    ks.y = rng.uniform(ks.domain.left, ks.domain.right);
    const double d = std::min(ks.y - ks.domain.left, ks.domain.right - ks.y);
    if (!(d > 0.0)) continue;
    ks.bound = 2.0 / d;
    ks.nonlinearity = branch_nonlinearity(map, ks.itinerary, ks.y);
    ks.ok = std::fabs(ks.nonlinearity) <= ks.bound * (1.0 + kKoebeSlack);
    ++report.samples;
    report.worst_ratio = std::max(report.worst_ratio, std::fabs(ks.nonlinearity) / ks.bound);
    if (!ks.ok) {
      ++report.violations;
      if (report.failures.size() < 20) report.failures.push_back(ks);
    }
  }
  return report;
}

namespace {

struct GridVariation {
  double variation = 0.0;
  std::vector<double> refinements;
  std::size_t points = 0;
  bool stable = false;
  std::vector<double> xs, us;  // final grid
};

// Sum of |u(x_{i+1}) - u(x_i)| over nested dyadic grids on [l, r]; x_i is
// computed from the exact dyadic fraction so coarse points reappear exactly.
template <class U>
GridVariation grid_variation(U&& u, double l, double r, int start, bool skip_left) {
  GridVariation out;
  double previous = -1.0;
  for (int m = start; m <= kVariationMaxGrid; m *= 2) {
    std::vector<double> xs, us;
    xs.reserve(m + 1);
    us.reserve(m + 1);
    for (int i = skip_left ? 1 : 0; i <= m; ++i) {
      const double x = l + (r - l) * (static_cast<double>(i) / m);
      xs.push_back(x);
      us.push_back(u(x));
    }
    long double v = 0.0L;
    for (std::size_t i = 0; i + 1 < us.size(); ++i) v += std::fabs(static_cast<long double>(us[i + 1]) - us[i]);
    const double var = static_cast<double>(v);
    out.refinements.push_back(var);
    out.variation = var;
    out.points = xs.size();
    out.xs = std::move(xs);
    out.us = std::move(us);
    if (previous >= 0.0 && std::fabs(var - previous) <= kVariationStable * var) {
      out.stable = true;
      break;
    }
    previous = var;
  }
  return out;
}

}  // namespace

RegularityReport variation_estimates(const PiecewiseMap& map, int grid_size) {
  if (grid_size < 2) throw PreconditionError("variation grid needs at least 2 points");
  RegularityReport rep;
  rep.beta = std::numeric_limits<double>::infinity();
  const auto crit = map.criticals();
  for (std::size_t k = 0; k < map.laps().size(); ++k) {
    const Lap& lap = map.laps()[k];
    const Interval iv = lap.interval();
    GridVariation gv = grid_variation([&](double x) { return lap.deriv(x); }, iv.left, iv.right, grid_size, false);
    VariationEstimate ve;
    ve.what = "f'";
    ve.index = k;
    ve.variation = gv.variation;
    ve.refinements = gv.refinements;
    ve.grid_points = gv.points;
    ve.stable = gv.stable;
    rep.total_variation += gv.variation;
    for (std::size_t i = 0; i < gv.xs.size(); ++i) {
      bool near = false;
      for (const auto& c : crit)
        if (std::fabs(gv.xs[i] - c.c) < c.nbhd_radius) near = true;
      if (!near) rep.beta = std::min(rep.beta, std::fabs(gv.us[i]));
    }
    rep.laps.push_back(std::move(ve));
  }
  for (std::size_t ci = 0; ci < crit.size(); ++ci) {
    const CriticalPoint& c = crit[ci];
    for (int side : {1, -1}) {
      const std::size_t lap = map.lap_index(c.c) + (side > 0 ? 1 : 0);
      auto r = [&](double x) { return map.lap_deriv(lap, x) / std::pow(std::fabs(x - c.c), c.gamma - 1.0); };
      // Grid runs away from c so the singular point itself is skipped.
      GridVariation gv = grid_variation(r, c.c, c.c + side * c.nbhd_radius, grid_size, true);
      VariationEstimate ve;
      ve.what = side > 0 ? "r+" : "r-";
      ve.index = ci;
      ve.variation = gv.variation;
      ve.refinements = gv.refinements;
      ve.grid_points = gv.points;
      ve.stable = gv.stable;
      for (std::size_t step = 1; step < gv.xs.size(); step *= 2)
        for (std::size_t i = 0; i + step < gv.xs.size(); ++i) {
          const double dx = std::fabs(gv.xs[i + step] - gv.xs[i]);
          ve.holder = std::max(ve.holder, std::fabs(gv.us[i + step] - gv.us[i]) / std::pow(dx, map.alpha()));
        }
      rep.ratios.push_back(std::move(ve));
    }
  }
  if (!std::isfinite(rep.beta)) rep.beta = 0.0;
  return rep;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::geometrically_finite: return "geometrically_finite";
    case Verdict::not_geometrically_finite: return "not_geometrically_finite";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

AnalysisReport analyze(const PiecewiseMap& map, const AnalysisOptions& options) {
  if (options.depth < 1) throw PreconditionError("depth must be positive");
  AnalysisReport rep;
  GeometryReport& g = rep.geometry;
  rep.validation = map.validation();
  g.smooth = rep.validation.ok();

  rep.orbits = critical_orbits_unchecked(map);
  g.finite = rep.orbits.critically_finite;
  if (!g.finite) {
    for (const auto& o : rep.orbits.orbits)
      if (!o.found_cycle)
        g.reasons.push_back("finite condition fails: orbit of c = " + fmt(map.criticals()[o.critical].c) +
                            " does not close");
  } else {
    rep.chains = critical_chains_unchecked(map, rep.orbits);
    g.no_cycle = rep.chains->no_cycle;
    if (!g.no_cycle) g.reasons.push_back("no-cycle condition fails: a critical point is periodic or chains loop");
  }

  rep.regularity = variation_estimates(map, options.variation_grid);
  rep.schwarzian = check_nonpositive_schwarzian(map, options.schwarzian_grid);
  g.advisory.nonpositive_schwarzian = rep.schwarzian->nonpositive;
  g.advisory.variation_stable = true;
  for (const auto& v : rep.regularity.laps) g.advisory.variation_stable &= v.stable;
  for (const auto& v : rep.regularity.ratios) g.advisory.variation_stable &= v.stable;

  if (g.finite && g.no_cycle) {
    try {
      rep.tower = PartitionTower::build(map, rep.orbits, options.depth);
    } catch (const ResourceLimit& e) {
      g.reasons.push_back(std::string("tower stopped: ") + e.what());
    }
  }
  if (rep.tower) {
    const PartitionTower& t = *rep.tower;
    const int p = std::min(options.max_period, t.depth() - 1);
    if (p >= 1) rep.periodic = periodic_points(map, t, p);
    g.advisory.only_expanding_periodic = !rep.periodic.empty();
    for (const auto& pp : rep.periodic) {
      if (pp.cls != PeriodicClass::expanding) {
        g.advisory.only_expanding_periodic = false;
        g.reasons.push_back(std::string(to_string(pp.cls)) + " periodic point at x = " + fmt(pp.x) + " (period " +
                            std::to_string(pp.period) + ", eigenvalue " + fmt(pp.eigenvalue) + ")");
      }
    }
    g.decay = decay_verdict(t, options.window);
    if (t.depth() >= 3) {
      g.constants = geometry_constants(t);
      if (t.depth() >= 6) {
        const double now = g.constants->bc_up_to(t.depth());
        const double before = g.constants->bc_up_to(t.depth() - 4);
        g.advisory.bc_drift = std::fabs(now - before) / before;
        g.advisory.bc_plateau = g.advisory.bc_drift <= kPlateauDrift;
      }
    }
  }

  if (!g.smooth) {
    g.verdict = Verdict::not_geometrically_finite;
  } else if (!g.finite || !g.no_cycle) {
    g.verdict = Verdict::not_geometrically_finite;
  } else if (!g.decay || !g.decay->conclusive) {
    g.verdict = Verdict::inconclusive;
    g.reasons.push_back(g.decay ? g.decay->reason : "no tower available for the decay fit");
  } else if (g.decay->decays) {
    g.verdict = Verdict::geometrically_finite;
    g.reasons.insert(g.reasons.begin(), "exponential decay: " + g.decay->reason);
  } else {
    g.verdict = Verdict::not_geometrically_finite;
    g.reasons.insert(g.reasons.begin(), "decay condition fails: " + g.decay->reason);
  }
  return rep;
}

GeometryReport finiteness_verdict(const PiecewiseMap& map, const AnalysisOptions& options) {
  return analyze(map, options).geometry;
}

}  // namespace gfmap
