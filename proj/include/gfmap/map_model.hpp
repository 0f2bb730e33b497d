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

#ifndef GFMAP_MAP_MODEL_HPP
#define GFMAP_MAP_MODEL_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gfmap/expr.hpp"

namespace gfmap {

struct Interval {
  double left = 0.0;
  double right = 0.0;

  double length() const { return right - left; }
  double midpoint() const { return 0.5 * (left + right); }
  bool contains(double x) const { return x >= left && x <= right; }
};

enum class Orientation { increasing, decreasing };

// Power-law critical point: f'(x) ~ A|x-c|^(gamma-1) on the right and
// B|x-c|^(gamma-1) on the left.
struct CriticalPoint {
  double c = 0.0;
  double gamma = 1.0;
  double coeff_a = 0.0;  // right limit
  double coeff_b = 0.0;  // left limit
  double asymmetry = 0.0;  // A / B
  double nbhd_radius = 0.0;
};

struct LapConfig {
  Interval interval;
  std::string expr;
};

struct CriticalConfig {
  double c = 0.0;
  double gamma = 1.0;
  std::optional<double> coeff_a;
  std::optional<double> coeff_b;
  std::optional<double> nbhd_radius;
};

// Map description as read from a config file (or a builtin).
struct MapConfig {
  std::string name;
  Interval domain{-1.0, 1.0};
  double alpha = 1.0;
  std::vector<LapConfig> laps;
  std::vector<CriticalConfig> criticals;
};

// One monotone branch with its first three symbolic derivatives.
class Lap {
 public:
  // Throws ParseError / EvalError when the expression is malformed or has a
  // non-smooth point inside the interval.
  Lap(Interval interval, Expr expr);

  const Interval& interval() const { return interval_; }
  const Expr& expr() const { return exprs_[0]; }
  const Expr& derivative_expr(int order) const { return exprs_.at(order); }
  Orientation orientation() const { return orientation_; }

  double value(double x) const { return programs_[0](x); }
  double deriv(double x, int order = 1) const { return programs_.at(order)(x); }

 private:
  Interval interval_;
  std::array<Expr, 4> exprs_;
  std::array<CompiledExpr, 4> programs_;
  Orientation orientation_;
};

struct ValidationIssue {
  std::string check;
  double location = 0.0;
  std::string message;
};

// Power-law ratio samples f'(x)/|x-c|^(gamma-1) at x = c +- 2^-k r.
struct PowerLawTrace {
  std::size_t critical = 0;
  int side = 1;  // +1 right, -1 left
  std::vector<double> ratios;  // k = 4..40
  double limit = 0.0;
  bool converged = false;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  std::vector<CriticalPoint> criticals;  // A, B filled in (declared or estimated)
  std::vector<PowerLawTrace> power_law;

  bool ok() const { return issues.empty(); }
  std::string summary() const;
};

ValidationReport validate(const MapConfig& config);

class PiecewiseMap {
 public:
  // Validates; throws ValidationError listing every failed check.
  static PiecewiseMap from_config(const MapConfig& config);

  const MapConfig& config() const { return config_; }
  const ValidationReport& validation() const { return validation_; }
  const std::string& name() const { return config_.name; }

  Interval domain() const { return config_.domain; }
  double alpha() const { return config_.alpha; }
  std::span<const Lap> laps() const { return laps_; }
  std::span<const CriticalPoint> criticals() const { return criticals_; }

  // Orbit-point equality tolerance, 1e-10 of the domain length.
  double tol_orbit() const { return 1e-10 * config_.domain.length(); }

  // Lap containing x; a shared endpoint belongs to the left lap.
  std::size_t lap_index(double x) const;

  double operator()(double x) const;
  // Rejected at a lap join where the one-sided derivatives disagree.
  double deriv(double x, int order = 1) const;

  double lap_value(std::size_t lap, double x) const { return laps_[lap].value(x); }
  double lap_deriv(std::size_t lap, double x, int order = 1) const {
    return laps_[lap].deriv(x, order);
  }

  // The unique x in the given lap with f(x) = y. `lo`/`hi` narrow the search
  // bracket and `guess` seeds Newton; both must lie inside the lap.
  double preimage(std::size_t lap, double y) const;
  double preimage(std::size_t lap, double y, double lo, double hi, double guess) const;

  // Index of the critical point within `tol` of x.
  std::optional<std::size_t> critical_near(double x, double tol) const;

 private:
  PiecewiseMap(MapConfig config, ValidationReport report, std::vector<Lap> laps);

  MapConfig config_;
  ValidationReport validation_;
  std::vector<Lap> laps_;
  std::vector<CriticalPoint> criticals_;
};

std::vector<std::string> builtin_names();
MapConfig builtin_config(std::string_view name);  // throws ConfigError
PiecewiseMap builtin(std::string_view name);

}  // namespace gfmap

#endif  // GFMAP_MAP_MODEL_HPP
