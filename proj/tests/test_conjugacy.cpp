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

#include <cmath>

#include "gfmap/conjugacy.hpp"
#include "gfmap/errors.hpp"
#include "gfmap/map_model.hpp"
#include "gfmap/partition.hpp"
#include "oracle.hpp"

using namespace gfmap;

namespace {

MapConfig bimodal(const char* left, const char* middle) {
  MapConfig c;
  c.domain = {-1.0, 1.0};
  c.laps = {{{-1.0, -0.5}, left}, {{-0.5, 0.5}, middle}, {{0.5, 1.0}, "-1+8*(x-0.5)^2"}};
  c.criticals = {{-0.5, 2.0, {}, {}, {}}, {0.5, 2.0, {}, {}, {}}};
  return c;
}

PiecewiseMap upside_down_quadratic() {
  MapConfig c;
  c.domain = {-1.0, 1.0};
  c.laps = {{{-1.0, 0.0}, "-1+2*x^2"}, {{0.0, 1.0}, "-1+2*x^2"}};
  c.criticals = {{0.0, 2.0, {}, {}, {}}};
  return PiecewiseMap::from_config(c);
}

}  // namespace

TEST_CASE("kneading sequences") {
  CHECK(kneading(builtin("tent"), 5).sequences[0].str() == "R L L L L");
  CHECK(kneading(builtin("quadratic"), 5).sequences[0].str() == "R L L L L");
  CHECK(kneading(builtin("neutral_cubic"), 5).sequences[0].str() == "R L L L L");
  CHECK(kneading(builtin("tent"), 20) == kneading(builtin("quadratic"), 20));
  CHECK_FALSE(kneading_difference(kneading(builtin("tent"), 20), kneading(builtin("quadratic"), 20)).has_value());
  CHECK(kneading(upside_down_quadratic(), 5).sequences[0].str() == "L R R R R");

  const auto b = PiecewiseMap::from_config(bimodal("0.5-6*(x+0.5)^2", "3*x^3-2.25*x-0.25"));
  const auto kb = kneading(b, 6);
  REQUIRE(kb.sequences.size() == 2);
  CHECK(kb.sequences[0].str() == "C1 I0 I0 I0 I0 I0");
  CHECK(kb.sequences[1].str() == "I0 I0 I0 I0 I0 I0");
  CHECK(kb.orientations ==
        std::vector<Orientation>{Orientation::increasing, Orientation::decreasing, Orientation::increasing});
  CHECK(std::string(KneadingInvariant::convention()).size() > 0);

  const auto q = builtin("quadratic");
  const auto tower = PartitionTower::build(q, 8);
  CHECK(kneading(q, tower, 8) == kneading(q, 8));
  CHECK_THROWS_AS(kneading(q, tower, 9), PreconditionError);
}

TEST_CASE("an orbit point next to a lap join is ambiguous") {
  const auto m = PiecewiseMap::from_config(
      bimodal("0.500000005-6.00000002*(x+0.5)^2", "3*x^3-2.25*x-0.25+5e-9*(x-0.5)^2*(2*x+2)"));
  CHECK_THROWS_AS(kneading(m, 6), AmbiguousAddress);
}

TEST_CASE("maps with different kneading data are not conjugate") {
  const auto flipped = upside_down_quadratic();
  const auto q = builtin("quadratic");
  const auto diff = kneading_difference(kneading(flipped, 5), kneading(q, 5));
  REQUIRE(diff.has_value());
  CHECK(diff->find("orientation") != std::string::npos);
  CHECK_THROWS_AS(conjugate(flipped, q, 8), KneadingMismatch);
  const auto b = PiecewiseMap::from_config(bimodal("0.5-6*(x+0.5)^2", "3*x^3-2.25*x-0.25"));
  CHECK_THROWS_AS(conjugate(b, q, 8), KneadingMismatch);
}

TEST_CASE("tent to quadratic conjugacy is the sine map") {
  const auto tent = builtin("tent");
  const auto q = builtin("quadratic");
  const auto c = conjugate(tent, q, 14);
  CHECK(c.h.size() == (std::size_t{1} << 14) + 1);
  CHECK(c.h.depth() == 14);
  double err = 0.0;
  for (std::size_t i = 0; i < c.h.size(); ++i) {
    CHECK(c.h.xs()[i] == oracle::tent_endpoints(14)[i]);
    err = std::max(err, std::fabs(c.h.ys()[i] - oracle::sine_conjugacy(c.h.xs()[i])));
  }
  CHECK(err <= 1e-12);
  CHECK(c.test_points == 4097);
  CHECK(c.defect_bound == doctest::Approx(2.0 * PartitionTower::build(q, 14).lambda(14)));
  CHECK(c.defect <= c.defect_bound);
  CHECK(c.defect_ok);

  // Against the analytic conjugacy under the same sampling rule.
  const double want = oracle::qs_sampled(oracle::sine_conjugacy, -1.0, 1.0, 1000, 20);
  CHECK(c.h.qc_estimate == doctest::Approx(want).epsilon(0.1));
  CHECK(c.h.qc_estimate == qs_constant(c.h));
}

TEST_CASE("the defect shrinks with depth") {
  const auto tent = builtin("tent");
  const auto q = builtin("quadratic");
  double prev = conjugate(tent, q, 6).defect;
  for (int depth : {8, 10, 12}) {
    const double d = conjugate(tent, q, depth).defect;
    CHECK(d < prev / 4.0);
    prev = d;
  }
}

TEST_CASE("a map is conjugate to itself by the identity") {
  for (const char* name : {"tent", "quadratic"}) {
    const auto m = builtin(name);
    const auto c = conjugate(m, m, 10);
    CHECK(c.h.xs() == c.h.ys());
    CHECK(c.defect <= 1e-12);
    CHECK(c.h.qc_estimate == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK_NOTHROW(conjugate(builtin("tent"), builtin("neutral_cubic"), 10));
}

TEST_CASE("piecewise-linear homeomorphisms") {
  const PLHomeomorphism affine({-1.0, 1.0}, {0.0, 3.0});
  CHECK(affine(0.0) == 1.5);
  CHECK(affine.inverse(1.5) == 0.0);
  CHECK(qs_constant(affine) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(affine(1.5), OutOfDomain);

  const PLHomeomorphism bent({0.0, 0.5, 1.0}, {0.0, 0.25, 1.0});
  CHECK(bent(0.75) == doctest::Approx(0.625));
  CHECK(bent.inverted()(0.625) == doctest::Approx(0.75));
  CHECK(bent.inverted().inverted().ys() == bent.ys());
  // The worst triple is centred on the kink, slopes 1/2 and 3/2; the grid
  // x = i / 999 only comes close to it.
  CHECK(qs_constant(bent) <= 3.0);
  CHECK(qs_constant(bent) > 2.99);
  CHECK(qs_constant(bent) == doctest::Approx(oracle::qs_sampled([&](double x) { return bent(x); }, 0.0, 1.0, 1000, 20)));

  CHECK_THROWS(PLHomeomorphism({0.0}, {0.0}));
  CHECK_THROWS(PLHomeomorphism({0.0, 1.0}, {1.0, 0.0}));
  CHECK_THROWS(PLHomeomorphism({0.0, 0.5, 1.0}, {0.0, 1.0}));
}
