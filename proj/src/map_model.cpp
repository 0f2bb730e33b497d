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

#include "gfmap/map_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gfmap/errors.hpp"
#include "root_solve.hpp"

namespace gfmap {

namespace {

constexpr int kMonotoneGrid = 10000;
constexpr double kJoinTol = 1e-12;
constexpr int kPowerLawFirstK = 4;
constexpr int kPowerLawLastK = 40;
constexpr int kCauchyWindow = 8;
constexpr double kCauchyTol = 1e-3;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

Lap::Lap(Interval interval, Expr expr) : interval_(interval) {
  exprs_[0] = std::move(expr);
  for (int k = 1; k <= 3; ++k)
    exprs_[k] = differentiate_on(exprs_[0], k, interval_.left, interval_.right);
  for (int k = 0; k <= 3; ++k) programs_[k] = CompiledExpr(exprs_[k]);
  orientation_ = value(interval_.right) >= value(interval_.left) ? Orientation::increasing
                                                                 : Orientation::decreasing;
}

std::string ValidationReport::summary() const {
  if (ok()) return "valid";
  std::ostringstream os;
  os << issues.size() << " validation issue(s):";
  for (const auto& i : issues) os << "\n  [" << i.check << " @ " << i.location << "] " << i.message;
  return os.str();
}

ValidationReport validate(const MapConfig& config) {
  ValidationReport report;
  auto issue = [&](std::string check, double at, std::string msg) {
    report.issues.push_back({std::move(check), at, std::move(msg)});
  };

  const Interval dom = config.domain;
  if (!(dom.left < dom.right) || !std::isfinite(dom.left) || !std::isfinite(dom.right)) {
    issue("domain", dom.left, "domain must be a finite interval [a, b] with a < b");
    return report;
  }
  if (!(config.alpha > 0.0 && config.alpha <= 1.0))
    issue("alpha", config.alpha, "Hoelder exponent must lie in (0, 1]");
  if (config.laps.empty()) {
    issue("laps", dom.left, "at least one lap is required");
    return report;
  }

  // Structure: ordered laps with shared endpoints covering the domain.
  if (config.laps.front().interval.left != dom.left)
    issue("cover", config.laps.front().interval.left, "first lap must start at the domain's left end");
  if (config.laps.back().interval.right != dom.right)
    issue("cover", config.laps.back().interval.right, "last lap must end at the domain's right end");
  for (std::size_t i = 0; i < config.laps.size(); ++i) {
    const Interval& iv = config.laps[i].interval;
    if (!(iv.left < iv.right)) issue("cover", iv.left, "lap " + std::to_string(i) + " is empty");
    if (i + 1 < config.laps.size() && iv.right != config.laps[i + 1].interval.left)
      issue("cover", iv.right, "laps " + std::to_string(i) + " and " + std::to_string(i + 1) +
                                   " do not share an endpoint");
  }
  if (!report.ok()) return report;

  std::vector<Lap> laps;
  for (std::size_t i = 0; i < config.laps.size(); ++i) {
    try {
      laps.emplace_back(config.laps[i].interval, parse(config.laps[i].expr));
    } catch (const ParseError& e) {
      issue("parse", config.laps[i].interval.left, "lap " + std::to_string(i) + ": " + e.what());
    } catch (const EvalError& e) {
      issue("smooth", config.laps[i].interval.left, "lap " + std::to_string(i) + ": " + e.what());
    }
  }
  if (!report.ok()) return report;

  // Critical points are exactly the interior lap boundaries.
  std::vector<double> joins;
  for (std::size_t i = 0; i + 1 < laps.size(); ++i) joins.push_back(laps[i].interval().right);
  for (double j : joins) {
    auto it = std::find_if(config.criticals.begin(), config.criticals.end(),
                           [&](const CriticalConfig& c) { return c.c == j; });
    if (it == config.criticals.end()) issue("criticals", j, "lap boundary is not a listed critical point");
  }
  for (const auto& c : config.criticals) {
    if (std::find(joins.begin(), joins.end(), c.c) == joins.end())
      issue("criticals", c.c, "critical point is not an interior lap boundary");
    if (!(c.gamma >= 1.0)) issue("criticals", c.c, "exponent gamma must be >= 1");
    if (c.coeff_a && *c.coeff_a == 0.0) issue("criticals", c.c, "A must be nonzero");
    if (c.coeff_b && *c.coeff_b == 0.0) issue("criticals", c.c, "B must be nonzero");
  }
  if (!report.ok()) return report;

  // Evaluation totality, image containment and monotonicity on a grid.
  for (std::size_t i = 0; i < laps.size(); ++i) {
    const Lap& lap = laps[i];
    const Interval iv = lap.interval();
    const double sign = lap.orientation() == Orientation::increasing ? 1.0 : -1.0;
    try {
      for (double t : {iv.left, iv.right}) {
        const double v = lap.value(t);
        if (v < dom.left - kJoinTol * (1.0 + std::fabs(v)) ||
            v > dom.right + kJoinTol * (1.0 + std::fabs(v)))
          issue("image", t, "lap " + std::to_string(i) + " maps outside the domain: f = " + fmt(v));
      }
      for (int k = 0; k < kMonotoneGrid; ++k) {
        const double t = iv.left + iv.length() * (k + 0.5) / kMonotoneGrid;
        const double v = lap.value(t);
        if (v < dom.left - kJoinTol * (1.0 + std::fabs(v)) ||
            v > dom.right + kJoinTol * (1.0 + std::fabs(v))) {
          issue("image", t, "lap " + std::to_string(i) + " maps outside the domain: f = " + fmt(v));
          break;
        }
        const double d = lap.deriv(t);
        if (!(sign * d > 0.0)) {
          issue("monotone", t, "lap " + std::to_string(i) + " is not strictly monotone: f' = " + fmt(d));
          break;
        }
      }
    } catch (const EvalError& e) {
      issue("domain", iv.left, "lap " + std::to_string(i) + ": " + e.what());
    }
  }
  if (!report.ok()) return report;

  // Continuity at joins.
  for (std::size_t i = 0; i + 1 < laps.size(); ++i) {
    const double c = laps[i].interval().right;
    const double l = laps[i].value(c);
    const double r = laps[i + 1].value(c);
    if (std::fabs(l - r) > kJoinTol * (1.0 + std::max(std::fabs(l), std::fabs(r))))
      issue("continuity", c, "lap values disagree: " + fmt(l) + " vs " + fmt(r));
  }

  // Boundary maps into the boundary with nonzero one-sided derivative.
  auto check_boundary = [&](const Lap& lap, double t) {
    const double v = lap.value(t);
    const double tol = kJoinTol * (1.0 + std::fabs(v));
    if (std::fabs(v - dom.left) > tol && std::fabs(v - dom.right) > tol)
      issue("boundary", t, "boundary point maps to " + fmt(v) + ", not to the boundary");
    const double d = lap.deriv(t);
    if (!(std::fabs(d) > 0.0)) issue("boundary", t, "one-sided derivative vanishes at the boundary");
  };
  check_boundary(laps.front(), dom.left);
  check_boundary(laps.back(), dom.right);

  // Power-law limits at each critical point.
  for (std::size_t ci = 0; ci < config.criticals.size(); ++ci) {
    const CriticalConfig& cc = config.criticals[ci];
    const auto join = static_cast<std::size_t>(std::find(joins.begin(), joins.end(), cc.c) - joins.begin());
    const Lap& left_lap = laps[join];
    const Lap& right_lap = laps[join + 1];
    const double radius = cc.nbhd_radius.value_or(
        0.25 * std::min(left_lap.interval().length(), right_lap.interval().length()));
    if (!(radius > 0.0) || cc.c - radius < dom.left || cc.c + radius > dom.right)
      issue("criticals", cc.c, "neighbourhood radius " + fmt(radius) + " leaves the domain");

    CriticalPoint cp;
    cp.c = cc.c;
    cp.gamma = cc.gamma;
    cp.nbhd_radius = radius;
    for (int side : {1, -1}) {
      const Lap& lap = side > 0 ? right_lap : left_lap;
      PowerLawTrace trace;
      trace.critical = ci;
      trace.side = side;
      bool finite = true;
      for (int k = kPowerLawFirstK; k <= kPowerLawLastK; ++k) {
        const double x = cc.c + side * std::ldexp(radius, -k);
        const double dist = std::fabs(x - cc.c);
        double r;
        try {
          r = lap.deriv(x) / std::pow(dist, cc.gamma - 1.0);
        } catch (const EvalError&) {
          r = NAN;
        }
        if (!std::isfinite(r)) finite = false;
        trace.ratios.push_back(r);
      }
      const auto n = trace.ratios.size();
      bool converged = finite;
      for (std::size_t k = n - kCauchyWindow + 1; converged && k < n; ++k) {
        const double inc = std::fabs(trace.ratios[k] - trace.ratios[k - 1]);
        if (!(inc <= kCauchyTol * std::fabs(trace.ratios[k]))) converged = false;
      }
      trace.limit = trace.ratios.back();
      if (!(std::fabs(trace.limit) > 0.0)) converged = false;
      trace.converged = converged;
      const char* which = side > 0 ? "right (A)" : "left (B)";
      const std::optional<double>& declared = side > 0 ? cc.coeff_a : cc.coeff_b;
      if (!converged) {
        issue("power_law", cc.c, std::string(which) + " ratio f'(x)/|x-c|^(gamma-1) does not converge " +
                                     "to a nonzero limit (last sample " + fmt(trace.limit) + ")");
      } else if (declared && std::fabs(*declared - trace.limit) > kCauchyTol * std::fabs(*declared)) {
        issue("power_law", cc.c, std::string(which) + " limit " + fmt(trace.limit) +
                                     " differs from declared " + fmt(*declared));
      }
      const double value = declared.value_or(trace.limit);
      (side > 0 ? cp.coeff_a : cp.coeff_b) = value;
      report.power_law.push_back(std::move(trace));
    }
    cp.asymmetry = cp.coeff_a / cp.coeff_b;
    report.criticals.push_back(cp);
  }
  return report;
}

PiecewiseMap::PiecewiseMap(MapConfig config, ValidationReport report, std::vector<Lap> laps)
    : config_(std::move(config)),
      validation_(std::move(report)),
      laps_(std::move(laps)),
      criticals_(validation_.criticals) {
  std::sort(criticals_.begin(), criticals_.end(),
            [](const CriticalPoint& a, const CriticalPoint& b) { return a.c < b.c; });
}

PiecewiseMap PiecewiseMap::from_config(const MapConfig& config) {
  ValidationReport report = validate(config);
  if (!report.ok()) throw ValidationError(report.summary());
  std::vector<Lap> laps;
  laps.reserve(config.laps.size());
  for (const auto& lc : config.laps) laps.emplace_back(lc.interval, parse(lc.expr));
  return PiecewiseMap(config, std::move(report), std::move(laps));
}

std::size_t PiecewiseMap::lap_index(double x) const {
  if (!(x >= config_.domain.left && x <= config_.domain.right))
    throw OutOfDomain("x = " + fmt(x) + " lies outside the domain [" + fmt(config_.domain.left) + ", " +
                      fmt(config_.domain.right) + "]");
  auto it = std::lower_bound(laps_.begin(), laps_.end(), x,
                             [](const Lap& lap, double v) { return lap.interval().right < v; });
  if (it == laps_.end()) --it;
  return static_cast<std::size_t>(it - laps_.begin());
}

double PiecewiseMap::operator()(double x) const { return laps_[lap_index(x)].value(x); }

double PiecewiseMap::deriv(double x, int order) const {
  if (order < 1 || order > 3) throw PreconditionError("derivative order must be in 1..3");
  const std::size_t i = lap_index(x);
  const double here = laps_[i].deriv(x, order);
  if (i + 1 < laps_.size() && x == laps_[i].interval().right) {
    const double there = laps_[i + 1].deriv(x, order);
    if (std::fabs(here - there) > kJoinTol * (1.0 + std::max(std::fabs(here), std::fabs(there))))
      throw PreconditionError("derivative of order " + std::to_string(order) +
                              " does not exist at the critical point " + fmt(x));
  }
  return here;
}

double PiecewiseMap::preimage(std::size_t lap, double y) const {
  const Interval iv = laps_.at(lap).interval();
  return preimage(lap, y, iv.left, iv.right, iv.midpoint());
}

double PiecewiseMap::preimage(std::size_t lap, double y, double lo, double hi, double guess) const {
  const Lap& L = laps_.at(lap);
  const double vtol = 1e-13 * std::max(1.0, std::fabs(y));
  auto root = detail::safeguarded_newton([&](double x) { return L.value(x) - y; },
                                         [&](double x) { return L.deriv(x); }, lo, hi, guess);
  if (!root) {
    // The target may sit on a bracket end up to rounding.
    if (std::fabs(L.value(lo) - y) <= vtol) return lo;
    if (std::fabs(L.value(hi) - y) <= vtol) return hi;
    throw RootBracketFailure("no preimage of " + fmt(y) + " in [" + fmt(lo) + ", " + fmt(hi) +
                             "] on lap " + std::to_string(lap));
  }
  const double residual = std::fabs(L.value(*root) - y);
  if (residual > vtol)
    throw RootBracketFailure("preimage of " + fmt(y) + " on lap " + std::to_string(lap) +
                             " did not converge (residual " + fmt(residual) + ")");
  return *root;
}

std::optional<std::size_t> PiecewiseMap::critical_near(double x, double tol) const {
  for (std::size_t i = 0; i < criticals_.size(); ++i)
    if (std::fabs(criticals_[i].c - x) <= tol) return i;
  return std::nullopt;
}

}  // namespace gfmap
