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

#include "gfmap/report.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gfmap/errors.hpp"

namespace gfmap {

using ojson = nlohmann::ordered_json;

namespace {

std::string num(double v) {
  std::array<char, 32> buf{};
  auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), r.ptr);
}

std::string utc_now() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void reject_unknown(const ojson& obj, std::initializer_list<const char*> keys, const std::string& where) {
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

double number_at(const ojson& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError("missing '" + std::string(key) + "' in " + where);
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError("'" + std::string(key) + "' in " + where + " must be a number");
  return v.get<double>();
}

std::optional<double> optional_number(const ojson& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) return std::nullopt;
  return number_at(obj, key, where);
}

Interval pair_at(const ojson& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError("missing '" + std::string(key) + "' in " + where);
  const auto& v = obj.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ConfigError("'" + std::string(key) + "' in " + where + " must be [left, right]");
  return {v[0].get<double>(), v[1].get<double>()};
}

ojson meta_json(const RunMeta& m) {
  ojson j;
  j["tool"] = "gfmap";
  j["version"] = GFMAP_VERSION;
  j["command"] = m.command;
  j["seed"] = m.seed;
  j["config_hash"] = m.config_hashes;
  if (!m.reproducible) j["timestamp"] = utc_now();
  return j;
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

ojson interval_json(Interval i) { return ojson::array({i.left, i.right}); }

ojson decay_fit_json(const DecayFit& f) {
  return {{"K", f.K}, {"mu", f.mu}, {"residual", f.residual}, {"n_min", f.n_min}, {"n_max", f.n_max}};
}

ojson periodic_point_json(const PeriodicPoint& p) {
  return {{"x", p.x},
          {"period", p.period},
          {"eigenvalue", p.eigenvalue},
          {"class", to_string(p.cls)},
          {"cycle", p.cycle}};
}

ojson variation_json(const VariationEstimate& v) {
  return {{"what", v.what},       {"index", v.index},
          {"variation", v.variation}, {"refinements", v.refinements},
          {"grid_points", v.grid_points}, {"stable", v.stable},
          {"holder", v.holder}};
}

const char* orientation_name(Orientation o) { return o == Orientation::increasing ? "increasing" : "decreasing"; }

}  // namespace

MapConfig parse_map_config(std::string_view json_text) {
  ojson j;
  try {
    j = ojson::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("map config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("map config must be a JSON object");
  reject_unknown(j, {"name", "domain", "alpha", "laps", "critical_points"}, "map config");

  MapConfig c;
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw ConfigError("'name' must be a string");
    c.name = j["name"].get<std::string>();
  }
  c.domain = pair_at(j, "domain", "map config");
  c.alpha = optional_number(j, "alpha", "map config").value_or(1.0);

  if (!j.contains("laps") || !j["laps"].is_array()) throw ConfigError("'laps' must be an array");
  for (std::size_t i = 0; i < j["laps"].size(); ++i) {
    const auto& l = j["laps"][i];
    const std::string where = "laps[" + std::to_string(i) + "]";
    if (!l.is_object()) throw ConfigError(where + " must be an object");
    reject_unknown(l, {"interval", "expr"}, where);
    LapConfig lc;
    lc.interval = pair_at(l, "interval", where);
    if (!l.contains("expr") || !l["expr"].is_string()) throw ConfigError("'expr' in " + where + " must be a string");
    lc.expr = l["expr"].get<std::string>();
    c.laps.push_back(std::move(lc));
  }

  if (j.contains("critical_points")) {
    if (!j["critical_points"].is_array()) throw ConfigError("'critical_points' must be an array");
    for (std::size_t i = 0; i < j["critical_points"].size(); ++i) {
      const auto& p = j["critical_points"][i];
      const std::string where = "critical_points[" + std::to_string(i) + "]";
      if (!p.is_object()) throw ConfigError(where + " must be an object");
      reject_unknown(p, {"c", "gamma", "A", "B", "nbhd_radius"}, where);
      CriticalConfig cc;
      cc.c = number_at(p, "c", where);
      cc.gamma = number_at(p, "gamma", where);
      cc.coeff_a = optional_number(p, "A", where);
      cc.coeff_b = optional_number(p, "B", where);
      cc.nbhd_radius = optional_number(p, "nbhd_radius", where);
      c.criticals.push_back(cc);
    }
  }
  return c;
}

MapConfig load_map_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open map config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_map_config(ss.str());
}

std::string dump_map_config(const MapConfig& c, bool pretty) {
  ojson j;
  if (!c.name.empty()) j["name"] = c.name;
  j["domain"] = interval_json(c.domain);
  j["alpha"] = c.alpha;
  j["laps"] = ojson::array();
  for (const auto& l : c.laps) j["laps"].push_back({{"interval", interval_json(l.interval)}, {"expr", l.expr}});
  j["critical_points"] = ojson::array();
  for (const auto& p : c.criticals) {
    ojson q{{"c", p.c}, {"gamma", p.gamma}};
    if (p.coeff_a) q["A"] = *p.coeff_a;
    if (p.coeff_b) q["B"] = *p.coeff_b;
    if (p.nbhd_radius) q["nbhd_radius"] = *p.nbhd_radius;
    j["critical_points"].push_back(std::move(q));
  }
  return pretty ? j.dump(2) + "\n" : j.dump();
}

std::string config_hash(const MapConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : dump_map_config(config, false)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string csv_header(const RunMeta& m) {
  std::string s = std::string("# gfmap ") + GFMAP_VERSION + " command=" + m.command + " seed=" + std::to_string(m.seed) +
                  " config=";
  for (std::size_t i = 0; i < m.config_hashes.size(); ++i) {
    if (i) s += ',';
    s += m.config_hashes[i];
  }
  if (!m.reproducible) s += " time=" + utc_now();
  return s + "\n";
}

std::string analysis_json(const PiecewiseMap& map, const AnalysisReport& r, const AnalysisOptions& o,
                          const RunMeta& meta) {
  ojson j;
  j["meta"] = meta_json(meta);
  j["map"] = ojson::parse(dump_map_config(map.config(), false));
  j["options"] = {{"depth", o.depth},
                  {"max_period", o.max_period},
                  {"window", o.window ? ojson::array({o.window->first, o.window->second}) : ojson()},
                  {"variation_grid", o.variation_grid},
                  {"schwarzian_grid", o.schwarzian_grid}};

  ojson v;
  v["ok"] = r.validation.ok();
  v["issues"] = ojson::array();
  for (const auto& i : r.validation.issues)
    v["issues"].push_back({{"check", i.check}, {"location", i.location}, {"message", i.message}});
  v["critical_points"] = ojson::array();
  for (const auto& c : r.validation.criticals)
    v["critical_points"].push_back({{"c", c.c},
                                    {"gamma", c.gamma},
                                    {"A", c.coeff_a},
                                    {"B", c.coeff_b},
                                    {"tau", c.asymmetry},
                                    {"nbhd_radius", c.nbhd_radius}});
  v["power_law"] = ojson::array();
  for (const auto& t : r.validation.power_law)
    v["power_law"].push_back({{"critical", t.critical},
                              {"side", t.side > 0 ? "right" : "left"},
                              {"limit", t.limit},
                              {"converged", t.converged},
                              {"ratios", t.ratios}});
  j["validation"] = std::move(v);

  ojson orb;
  orb["critically_finite"] = r.orbits.critically_finite;
  orb["all_criticals_nonperiodic"] = r.orbits.all_criticals_nonperiodic;
  orb["orbits"] = ojson::array();
  for (const auto& o2 : r.orbits.orbits)
    orb["orbits"].push_back({{"critical", o2.critical},
                             {"points", o2.points},
                             {"preperiod", o2.preperiod},
                             {"period", o2.period},
                             {"eigenvalue", o2.eigenvalue},
                             {"found_cycle", o2.found_cycle}});
  orb["postcritical"] = r.orbits.postcritical();
  j["orbits"] = std::move(orb);

  if (r.chains) {
    ojson c;
    c["nodes"] = r.chains->nodes;
    c["edges"] = ojson::array();
    for (const auto& e : r.chains->edges) c["edges"].push_back({{"from", e.from}, {"to", e.to}, {"length", e.length}});
    c["N0"] = r.chains->n0;
    c["acyclic"] = r.chains->acyclic;
    c["no_cycle"] = r.chains->no_cycle;
    j["chains"] = std::move(c);
  } else {
    j["chains"] = nullptr;
  }

  if (r.tower) {
    ojson t;
    t["depth"] = r.tower->depth();
    std::vector<std::size_t> counts;
    for (int n = 1; n <= r.tower->depth(); ++n) counts.push_back(r.tower->interval_count(n));
    t["intervals"] = counts;
    t["lambda"] = r.tower->lambdas();
    j["tower"] = std::move(t);
  } else {
    j["tower"] = nullptr;
  }

  const GeometryReport& g = r.geometry;
  if (g.decay) {
    j["decay"] = {{"conclusive", g.decay->conclusive},
                  {"decays", g.decay->decays},
                  {"fit", decay_fit_json(g.decay->main)},
                  {"upper_fit", decay_fit_json(g.decay->upper)},
                  {"drift", g.decay->drift},
                  {"mu_max", kDecayMuMax},
                  {"drift_max", kDecayDriftMax},
                  {"reason", g.decay->reason}};
  } else {
    j["decay"] = nullptr;
  }

  ojson geo;
  geo["verdict"] = to_string(g.verdict);
  geo["reasons"] = g.reasons;
  geo["smooth"] = g.smooth;
  geo["finite"] = g.finite;
  geo["no_cycle"] = g.no_cycle;
  if (g.constants)
    geo["constants"] = {{"BC", g.constants->bc},
                        {"NC", g.constants->nc},
                        {"bc_series", g.constants->bc_series},
                        {"nc_series", g.constants->nc_series}};
  else
    geo["constants"] = nullptr;
  geo["advisory"] = {{"only_expanding_periodic", g.advisory.only_expanding_periodic},
                     {"variation_stable", g.advisory.variation_stable},
                     {"bc_plateau", g.advisory.bc_plateau},
                     {"bc_drift", g.advisory.bc_drift},
                     {"nonpositive_schwarzian", g.advisory.nonpositive_schwarzian
                                                    ? ojson(*g.advisory.nonpositive_schwarzian)
                                                    : ojson()}};
  j["geometry"] = std::move(geo);

  ojson reg;
  reg["laps"] = ojson::array();
  for (const auto& e : r.regularity.laps) reg["laps"].push_back(variation_json(e));
  reg["ratios"] = ojson::array();
  for (const auto& e : r.regularity.ratios) reg["ratios"].push_back(variation_json(e));
  reg["total_variation"] = r.regularity.total_variation;
  reg["beta"] = r.regularity.beta;
  j["regularity"] = std::move(reg);

  if (r.schwarzian)
    j["schwarzian"] = {{"nonpositive", r.schwarzian->nonpositive},
                       {"max_value", r.schwarzian->max_value},
                       {"argmax", r.schwarzian->argmax},
                       {"points", r.schwarzian->points}};
  else
    j["schwarzian"] = nullptr;

  j["periodic_points"] = ojson::array();
  for (const auto& p : r.periodic) j["periodic_points"].push_back(periodic_point_json(p));
  return dump(j);
}

std::string tower_csv(const PartitionTower& tower, const RunMeta& meta) {
  std::optional<GeometryConstants> g;
  if (tower.depth() >= 3) g = geometry_constants(tower);
  std::string s = csv_header(meta) + "n,intervals,lambda,bc,nc\n";
  for (int n = 1; n <= tower.depth(); ++n) {
    s += std::to_string(n) + "," + std::to_string(tower.interval_count(n)) + "," + num(tower.lambda(n)) + ",";
    if (g && n <= static_cast<int>(g->bc_series.size())) s += num(g->bc_series[n - 1]);
    s += ",";
    if (g && n <= static_cast<int>(g->nc_series.size())) s += num(g->nc_series[n - 1]);
    s += "\n";
  }
  return s;
}

std::string distortion_csv(const DistortionFit& fit, const RunMeta& meta) {
  std::string s = csv_header(meta) + "n,x,y,D,logratio\n";
  for (const auto& p : fit.samples)
    s += std::to_string(p.n) + "," + num(p.x) + "," + num(p.y) + "," + num(p.D) + "," + num(p.logratio) + "\n";
  return s;
}

std::string distortion_summary_json(const DistortionFit& fit, const std::vector<DistortionTrendPoint>& trend,
                                    const RunMeta& meta) {
  ojson j;
  j["meta"] = meta_json(meta);
  j["base_level"] = fit.base_level;
  j["depth"] = fit.depth;
  j["samples"] = fit.samples.size();
  j["A"] = fit.A;
  j["B"] = fit.B;
  j["A_tight"] = fit.A_tight;
  j["violations"] = fit.violations;
  j["fresh_samples"] = fit.fresh_samples;
  j["fresh_violations"] = fit.fresh_violations;
  j["fresh_max_excess"] = fit.fresh_max_excess;
  j["bounded"] = fit.bounded;
  j["trend"] = ojson::array();
  for (const auto& t : trend)
    j["trend"].push_back({{"depth", t.depth}, {"A", t.A}, {"B", t.B}, {"max_logratio", t.max_logratio}});
  return dump(j);
}

std::string kneading_json(const std::vector<const KneadingInvariant*>& invariants,
                          std::optional<std::string> difference, const RunMeta& meta) {
  ojson j;
  j["meta"] = meta_json(meta);
  j["convention"] = KneadingInvariant::convention();
  j["maps"] = ojson::array();
  for (const auto* k : invariants) {
    ojson m;
    m["depth"] = k->depth;
    m["orientations"] = ojson::array();
    for (auto o : k->orientations) m["orientations"].push_back(orientation_name(o));
    m["sequences"] = ojson::array();
    for (const auto& s : k->sequences)
      m["sequences"].push_back({{"critical", s.critical}, {"c", s.critical_point}, {"itinerary", s.str()}});
    j["maps"].push_back(std::move(m));
  }
  if (invariants.size() == 2) {
    j["equal"] = !difference.has_value();
    j["difference"] = difference ? ojson(*difference) : ojson();
  }
  return dump(j);
}

std::string periodic_json(const std::vector<PeriodicPoint>& points, int max_period, const RunMeta& meta) {
  ojson j;
  j["meta"] = meta_json(meta);
  j["max_period"] = max_period;
  j["neutral_band"] = kNeutralBand;
  j["periodic_points"] = ojson::array();
  for (const auto& p : points) j["periodic_points"].push_back(periodic_point_json(p));
  return dump(j);
}

std::string knots_csv(const Conjugacy& c, const RunMeta& meta) {
  std::string s = csv_header(meta) + "x,y\n";
  for (std::size_t i = 0; i < c.h.size(); ++i) s += num(c.h.xs()[i]) + "," + num(c.h.ys()[i]) + "\n";
  return s;
}

std::string conjugacy_summary_json(const Conjugacy& c, const RunMeta& meta) {
  ojson j;
  j["meta"] = meta_json(meta);
  j["depth"] = c.h.depth();
  j["knots"] = c.h.size();
  j["defect"] = c.defect;
  j["defect_bound"] = c.defect_bound;
  j["defect_ok"] = c.defect_ok;
  j["test_points"] = c.test_points;
  j["qc_estimate"] = c.h.qc_estimate;
  j["kneading"] = ojson::array();
  for (const auto& s : c.kneading_f.sequences) j["kneading"].push_back(s.str());
  return dump(j);
}

}  // namespace gfmap
