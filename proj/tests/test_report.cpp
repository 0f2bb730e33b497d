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

#include <json.hpp>
#include <sstream>

#include "gfmap/conjugacy.hpp"
#include "gfmap/errors.hpp"
#include "gfmap/geometry.hpp"
#include "gfmap/map_model.hpp"
#include "gfmap/partition.hpp"
#include "gfmap/report.hpp"

using namespace gfmap;
using nlohmann::json;

namespace {

const char* kQuadratic = R"({
  "name": "q",
  "domain": [-1, 1],
  "laps": [{"interval": [-1, 0], "expr": "1-2*x^2"}, {"interval": [0, 1], "expr": "1-2*x^2"}],
  "critical_points": [{"c": 0, "gamma": 2}]
})";

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

RunMeta meta(const std::string& command) {
  RunMeta m;
  m.command = command;
  m.seed = 7;
  m.config_hashes = {"0123456789abcdef"};
  m.reproducible = true;
  return m;
}

}  // namespace

TEST_CASE("map configs parse and dump to the same config") {
  const auto c = parse_map_config(kQuadratic);
  CHECK(c.name == "q");
  CHECK(c.alpha == 1.0);
  REQUIRE(c.laps.size() == 2);
  CHECK(c.laps[1].expr == "1-2*x^2");
  REQUIRE(c.criticals.size() == 1);
  CHECK(c.criticals[0].gamma == 2.0);
  CHECK_FALSE(c.criticals[0].coeff_a.has_value());

  const auto dump = dump_map_config(c);
  const auto back = parse_map_config(dump);
  CHECK(dump_map_config(back) == dump);
  CHECK(config_hash(back) == config_hash(c));
  CHECK(config_hash(c).size() == 16);

  for (const char* name : {"tent", "quadratic", "neutral_cubic"}) {
    const auto b = builtin_config(name);
    CHECK(dump_map_config(parse_map_config(dump_map_config(b, false)), false) == dump_map_config(b, false));
  }
  CHECK(config_hash(builtin_config("tent")) != config_hash(builtin_config("quadratic")));
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_map_config(R"({"domain": [-1, 1], "laps": [], "colour": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_map_config("{"), ConfigError);
  CHECK_THROWS_AS(parse_map_config(R"({"domain": [-1], "laps": []})"), ConfigError);
  CHECK_THROWS_AS(parse_map_config(R"({"domain": [-1, 1], "laps": [{"interval": [-1, 1], "expr": 3}]})"), ConfigError);
  try {
    load_map_config("/nonexistent/map.json");
    FAIL("no error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("/nonexistent/map.json") != std::string::npos);
  }
}

TEST_CASE("csv header") {
  auto m = meta("tower");
  CHECK(csv_header(m) == "# gfmap " GFMAP_VERSION " command=tower seed=7 config=0123456789abcdef\n");
  m.config_hashes.push_back("fedcba9876543210");
  CHECK(csv_header(m).find("config=0123456789abcdef,fedcba9876543210") != std::string::npos);
  m.reproducible = false;
  CHECK(csv_header(m).find(" time=") != std::string::npos);
}

TEST_CASE("tower csv") {
  const auto t = PartitionTower::build(builtin("tent"), 5);
  const auto l = lines(tower_csv(t, meta("tower")));
  REQUIRE(l.size() == 2 + 5);
  CHECK(l[0].rfind("# gfmap", 0) == 0);
  CHECK(l[1] == "n,intervals,lambda,bc,nc");
  CHECK(l[2] == "1,2,1,0.5,1");
  CHECK(l[6] == "5,32,0.0625,,1");
}

TEST_CASE("analysis json") {
  const auto map = builtin("quadratic");
  AnalysisOptions o;
  o.depth = 10;
  const auto r = analyze(map, o);
  const auto j = json::parse(analysis_json(map, r, o, meta("analyze")));
  for (const char* key : {"meta", "map", "options", "validation", "orbits", "chains", "tower", "decay", "geometry",
                          "regularity", "schwarzian", "periodic_points"})
    CHECK(j.contains(key));
  CHECK(j["geometry"]["verdict"] == "geometrically_finite");
  CHECK(j["meta"]["seed"] == 7);
  CHECK_FALSE(j["meta"].contains("time"));
  CHECK(j["chains"]["N0"] == 0);
  CHECK(j["geometry"]["constants"]["BC"].get<double>() == doctest::Approx(0.25).epsilon(1e-3));
}

TEST_CASE("knots csv and conjugacy summary") {
  const auto c = conjugate(builtin("tent"), builtin("quadratic"), 4);
  const auto l = lines(knots_csv(c, meta("conjugate")));
  REQUIRE(l.size() == 2 + 17);
  CHECK(l[1] == "x,y");
  CHECK(l[2] == "-1,-1");
  CHECK(l[18] == "1,1");
  const auto j = json::parse(conjugacy_summary_json(c, meta("conjugate")));
  CHECK(j["defect_ok"] == true);
  CHECK(j["knots"] == 17);
}

TEST_CASE("kneading and periodic json") {
  const auto k1 = kneading(builtin("tent"), 5);
  const auto k2 = kneading(builtin("quadratic"), 5);
  const auto j = json::parse(kneading_json({&k1, &k2}, std::nullopt, meta("kneading")));
  CHECK(j["equal"] == true);
  CHECK(j["maps"][0]["sequences"][0]["itinerary"] == "R L L L L");

  const auto map = builtin("tent");
  const auto pts = periodic_points(map, PartitionTower::build(map, 3), 2);
  const auto p = json::parse(periodic_json(pts, 2, meta("periodic")));
  CHECK(p["periodic_points"].size() == 3);
  CHECK(p["periodic_points"][2]["period"] == 2);
  CHECK(p["periodic_points"][2]["class"] == "expanding");
}
