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

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gfmap/errors.hpp"
#include "gfmap/map_model.hpp"
#include "oracle.hpp"

using namespace gfmap;

namespace {

bool has_issue(const ValidationReport& r, const std::string& check) {
  return std::any_of(r.issues.begin(), r.issues.end(), [&](const ValidationIssue& i) { return i.check == check; });
}

MapConfig two_laps(const char* left, const char* right, double gamma) {
  MapConfig c;
  c.domain = {-1.0, 1.0};
  c.laps = {{{-1.0, 0.0}, left}, {{0.0, 1.0}, right}};
  c.criticals = {{0.0, gamma, {}, {}, {}}};
  return c;
}

}  // namespace

TEST_CASE("builtin maps validate with the expected power-law data") {
  const auto tent = builtin("tent");
  REQUIRE(tent.criticals().size() == 1);
  CHECK(tent.criticals()[0].coeff_a == doctest::Approx(-2.0));
  CHECK(tent.criticals()[0].coeff_b == doctest::Approx(2.0));
  CHECK(tent.criticals()[0].asymmetry == doctest::Approx(-1.0));
  CHECK(tent.criticals()[0].gamma == 1.0);

  const auto q = builtin("quadratic");
  CHECK(q.criticals()[0].coeff_a == doctest::Approx(-4.0));
  CHECK(q.criticals()[0].coeff_b == doctest::Approx(4.0));
  CHECK(q.criticals()[0].asymmetry == doctest::Approx(-1.0));
  CHECK(q.criticals()[0].nbhd_radius == doctest::Approx(0.25));

  const auto n = builtin("neutral_cubic");
  CHECK(n.validation().ok());
  CHECK(n.criticals()[0].gamma == 2.0);

  CHECK_THROWS_AS(builtin("logistic"), ConfigError);
  CHECK(builtin_names().size() == 3);
}

TEST_CASE("laps record orientation") {
  const auto q = builtin("quadratic");
  CHECK(q.laps()[0].orientation() == Orientation::increasing);
  CHECK(q.laps()[1].orientation() == Orientation::decreasing);
}

TEST_CASE("evaluation and derivatives") {
  const auto tent = builtin("tent");
  const auto q = builtin("quadratic");
  const auto n = builtin("neutral_cubic");
  CHECK(tent(0.0) == 1.0);
  CHECK(q(-1.0) == -1.0);
  CHECK(n(-1.0) == -1.0);
  CHECK(q.deriv(0.5) == -2.0);
  CHECK(q.deriv(0.3, 2) == -4.0);
  CHECK(tent.deriv(-0.5) == 2.0);
  CHECK(tent.deriv(-1.0) == 2.0);
  CHECK(n.deriv(-1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(tent.deriv(0.0), PreconditionError);
  CHECK(q.deriv(0.0) == 0.0);
  CHECK_THROWS_AS(q(1.5), OutOfDomain);
  for (double x = -1.0; x <= 1.0; x += 0.0625) {
    CHECK(tent(x) == doctest::Approx(oracle::tent(x)));
    CHECK(q(x) == doctest::Approx(oracle::quadratic(x)));
    CHECK(n(x) == doctest::Approx(oracle::neutral_cubic(x)));
  }
}

TEST_CASE("the neutral cubic solves its Hermite conditions") {
  // p(x) = a x^3 + b x^2 + 1 with p(-1) = -1 and p'(-1) = 1: -a + b = -2,
  // 3a - 2b = 1, so a = -3, b = -5.
  const double a = -3.0, b = -5.0;
  CHECK(-a + b + 1.0 == -1.0);
  CHECK(3 * a - 2 * b == 1.0);
  const auto n = builtin("neutral_cubic");
  CHECK(n(0.0) == 1.0);
  CHECK(n.lap_deriv(0, 0.0) == 0.0);
}

TEST_CASE("preimages invert each lap") {
  const auto q = builtin("quadratic");
  CHECK(q.preimage(1, 0.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(q.preimage(0, 0.0) == doctest::Approx(-std::sqrt(0.5)).epsilon(1e-15));
  for (double y = -1.0; y <= 1.0; y += 0.01)
    for (std::size_t lap = 0; lap < 2; ++lap) CHECK(std::fabs(q(q.preimage(lap, y)) - y) <= 1e-13);
  CHECK(q.preimage(1, -1.0) == 1.0);
}

TEST_CASE("a wrong exponent fails the power-law check") {
  const auto r = validate(two_laps("1-2*x^2", "1-2*x^2", 3.0));
  CHECK_FALSE(r.ok());
  CHECK(has_issue(r, "power_law"));
  CHECK_THROWS_AS(PiecewiseMap::from_config(two_laps("1-2*x^2", "1-2*x^2", 3.0)), ValidationError);
}

TEST_CASE("declared coefficients must match the limits") {
  auto c = two_laps("1-2*x^2", "1-2*x^2", 2.0);
  c.criticals[0].coeff_a = -4.0;
  c.criticals[0].coeff_b = 4.0;
  CHECK(validate(c).ok());
  c.criticals[0].coeff_a = -3.0;
  CHECK_FALSE(validate(c).ok());
}

TEST_CASE("validation reports each broken hypothesis") {
  CHECK(has_issue(validate(two_laps("1+2*x", "0.9-1.9*x", 1.0)), "continuity"));
  CHECK(has_issue(validate(two_laps("1+2*x", "1-3*x", 1.0)), "image"));
  CHECK(has_issue(validate(two_laps("1-2*x^2", "cos(3*pi*x)", 2.0)), "monotone"));
  CHECK_FALSE(validate(two_laps("1-2*x^2", "1-2*(x", 2.0)).ok());

  auto nocrit = two_laps("1+2*x", "1-2*x", 1.0);
  nocrit.criticals.clear();
  CHECK_FALSE(validate(nocrit).ok());

  MapConfig interior;
  interior.domain = {-1.0, 1.0};
  interior.laps = {{{-1.0, 1.0}, "0.9*x"}};
  CHECK(has_issue(validate(interior), "boundary"));

  auto kink = two_laps("1-2*|x+0.5|", "1-2*x", 1.0);
  CHECK_FALSE(validate(kink).ok());
}

TEST_CASE("a monotone one-lap map without critical points is valid") {
  MapConfig c;
  c.domain = {-1.0, 1.0};
  c.laps = {{{-1.0, 1.0}, "(x^3+x)/2"}};
  const auto m = PiecewiseMap::from_config(c);
  CHECK(m.criticals().empty());
  CHECK(m(1.0) == 1.0);
}

TEST_CASE("omitted neighbourhood radius defaults to a quarter of the shorter lap") {
  MapConfig c;
  c.domain = {-1.0, 1.0};
  c.laps = {{{-1.0, 0.5}, "1-8/9*(x-0.5)^2"}, {{0.5, 1.0}, "1-8*(x-0.5)^2"}};
  c.criticals = {{0.5, 2.0, {}, {}, {}}};
  const auto r = validate(c);
  REQUIRE(r.ok());
  CHECK(r.criticals[0].nbhd_radius == doctest::Approx(0.125));
  CHECK(r.criticals[0].coeff_a == doctest::Approx(-16.0));
  CHECK(r.criticals[0].coeff_b == doctest::Approx(16.0 / 9.0));
}

TEST_CASE("critical_near finds critical points within a tolerance") {
  const auto q = builtin("quadratic");
  CHECK(q.critical_near(1e-12, q.tol_orbit()).has_value());
  CHECK_FALSE(q.critical_near(1e-6, q.tol_orbit()).has_value());
}
