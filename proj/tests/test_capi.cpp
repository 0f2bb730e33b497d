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

// Uses nothing but the public C header.

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include "gfmap/gfmap.h"

namespace {

const char* kFlipped = R"({"domain": [-1, 1],
  "laps": [{"interval": [-1, 0], "expr": "-1+2*x^2"}, {"interval": [0, 1], "expr": "-1+2*x^2"}],
  "critical_points": [{"c": 0, "gamma": 2}]})";

std::string take(char* s) {
  std::string out = s ? s : "";
  gfm_string_free(s);
  return out;
}

gfm_map* load(const char* name) {
  gfm_map* m = nullptr;
  REQUIRE(gfm_map_builtin(name, &m) == GFM_OK);
  return m;
}

gfm_options opts(int depth) {
  gfm_options o;
  gfm_options_init(&o);
  o.depth = depth;
  o.reproducible = 1;
  return o;
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(gfm_version()) == "0.1.0");
  CHECK(std::string(gfm_status_name(GFM_OK)) == "ok");
  CHECK(std::string(gfm_status_name(GFM_ERR_KNEADING_MISMATCH)).size() > 0);
  gfm_options o;
  gfm_options_init(&o);
  CHECK(o.depth == 0);
  CHECK(o.max_period == 4);
  CHECK(o.reproducible == 0);
}

TEST_CASE("map handles") {
  gfm_map* q = load("quadratic");
  double y = 0.0;
  CHECK(gfm_map_eval(q, 0.5, &y) == GFM_OK);
  CHECK(y == 0.5);
  CHECK(gfm_map_deriv(q, 0.5, 1, &y) == GFM_OK);
  CHECK(y == -2.0);
  CHECK(gfm_map_deriv(q, 0.3, 2, &y) == GFM_OK);
  CHECK(y == -4.0);
  CHECK(gfm_map_schwarzian(q, 0.5, &y) == GFM_OK);
  CHECK(y == doctest::Approx(-6.0));
  size_t laps = 0;
  CHECK(gfm_map_lap_count(q, &laps) == GFM_OK);
  CHECK(laps == 2);

  CHECK(gfm_map_eval(q, 2.0, &y) == GFM_ERR_OUT_OF_DOMAIN);
  CHECK(std::strlen(gfm_last_error()) > 0);
  CHECK(gfm_map_deriv(q, 0.3, 4, &y) != GFM_OK);
  CHECK(gfm_map_eval(q, 0.5, nullptr) == GFM_ERR_INVALID_ARGUMENT);
  CHECK(gfm_map_eval(nullptr, 0.5, &y) == GFM_ERR_INVALID_ARGUMENT);

  char* s = nullptr;
  REQUIRE(gfm_map_hash(q, &s) == GFM_OK);
  const std::string hash = take(s);
  CHECK(hash.size() == 16);
  REQUIRE(gfm_map_dump(q, &s) == GFM_OK);
  const std::string dump = take(s);
  gfm_map* again = nullptr;
  REQUIRE(gfm_map_from_json(dump.c_str(), &again) == GFM_OK);
  REQUIRE(gfm_map_hash(again, &s) == GFM_OK);
  CHECK(take(s) == hash);
  gfm_map_free(again);
  gfm_map_free(q);
  gfm_map_free(nullptr);
}

TEST_CASE("load errors") {
  gfm_map* m = nullptr;
  CHECK(gfm_map_builtin("logistic", &m) == GFM_ERR_CONFIG);
  CHECK(m == nullptr);
  CHECK(std::string(gfm_last_error()).find("logistic") != std::string::npos);
  CHECK(gfm_map_from_file("/nonexistent/map.json", &m) == GFM_ERR_IO);
  CHECK(gfm_map_from_json("{", &m) == GFM_ERR_CONFIG);
  CHECK(gfm_map_from_json(R"({"domain": [-1, 1], "laps": [{"interval": [-1, 1], "expr": "1+*x"}]})", &m) ==
        GFM_ERR_VALIDATION);
  CHECK(std::string(gfm_last_error()).find("parse") != std::string::npos);
  CHECK(gfm_map_from_json(R"({"domain": [-1, 1], "laps": [{"interval": [-1, 1], "expr": "0.9*x"}]})", &m) ==
        GFM_ERR_VALIDATION);
  CHECK(m == nullptr);
  CHECK(gfm_map_builtin(nullptr, &m) == GFM_ERR_INVALID_ARGUMENT);
}

TEST_CASE("analysis through the C API") {
  gfm_map* q = load("quadratic");
  const gfm_options o = opts(10);
  char* json = nullptr;
  gfm_verdict v = GFM_INCONCLUSIVE;
  REQUIRE(gfm_analyze(q, &o, &json, &v) == GFM_OK);
  CHECK(v == GFM_GEOMETRICALLY_FINITE);
  const std::string report = take(json);
  CHECK(report.find("\"geometrically_finite\"") != std::string::npos);
  CHECK(report.find("\"time\"") == std::string::npos);

  const gfm_options shallow = opts(4);
  CHECK(gfm_analyze(q, &shallow, &json, &v) != GFM_OK);

  char* csv = nullptr;
  const gfm_options t = opts(4);
  REQUIRE(gfm_tower_csv(q, &t, &csv) == GFM_OK);
  const std::string tower = take(csv);
  CHECK(tower.find("n,intervals,lambda,bc,nc\n") != std::string::npos);
  CHECK(tower.find("\n4,16,") != std::string::npos);

  char* summary = nullptr;
  gfm_options d = opts(10);
  d.samples = 500;
  REQUIRE(gfm_distortion(q, &d, &csv, &summary) == GFM_OK);
  CHECK(take(csv).find("n,x,y,D,logratio") != std::string::npos);
  CHECK(take(summary).find("\"B\"") != std::string::npos);

  REQUIRE(gfm_periodic_json(q, &o, &json) == GFM_OK);
  CHECK(take(json).find("\"periodic_points\"") != std::string::npos);
  gfm_map_free(q);
}

TEST_CASE("kneading and conjugacy through the C API") {
  gfm_map* tent = load("tent");
  gfm_map* q = load("quadratic");
  gfm_map* flipped = nullptr;
  REQUIRE(gfm_map_from_json(kFlipped, &flipped) == GFM_OK);
  const gfm_options o = opts(8);

  int equal = -1;
  char* json = nullptr;
  REQUIRE(gfm_kneading_compare(tent, q, &o, &equal, &json) == GFM_OK);
  CHECK(equal == 1);
  take(json);
  REQUIRE(gfm_kneading_compare(flipped, q, &o, &equal, &json) == GFM_OK);
  CHECK(equal == 0);
  take(json);
  REQUIRE(gfm_kneading_json(tent, &o, &json) == GFM_OK);
  CHECK(take(json).find("R L L L L L L L") != std::string::npos);

  char* csv = nullptr;
  int ok = 0;
  REQUIRE(gfm_conjugate(tent, q, &o, &csv, &json, &ok) == GFM_OK);
  CHECK(ok == 1);
  const std::string knots = take(csv);
  CHECK(knots.find("\n0,0\n") != std::string::npos);
  CHECK(knots.find("\n-0.5,-0.7071067811865") != std::string::npos);
  take(json);
  CHECK(gfm_conjugate(flipped, q, &o, &csv, &json, &ok) == GFM_ERR_KNEADING_MISMATCH);

  gfm_map_free(flipped);
  gfm_map_free(q);
  gfm_map_free(tent);
}
