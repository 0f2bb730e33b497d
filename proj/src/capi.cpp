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

#include "gfmap/gfmap.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <stdexcept>
#include <string>

#include "gfmap/conjugacy.hpp"
#include "gfmap/distortion.hpp"
#include "gfmap/errors.hpp"
#include "gfmap/geometry.hpp"
#include "gfmap/map_model.hpp"
#include "gfmap/orbit.hpp"
#include "gfmap/partition.hpp"
#include "gfmap/report.hpp"

struct gfm_map {
  gfmap::PiecewiseMap map;
  std::string hash;
};

namespace {

thread_local std::string last_error;

constexpr int kAnalyzeDepth = 20;
constexpr int kTowerDepth = 12;
constexpr int kDistortionDepth = 14;
constexpr int kKneadingDepth = 20;
constexpr int kConjugateDepth = 14;
constexpr int kMinAnalyzeDepth = 6;

gfm_status fail(gfm_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

template <class F>
gfm_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return GFM_OK;
  } catch (const gfmap::ParseError& e) {
    return fail(GFM_ERR_PARSE, e.what());
  } catch (const gfmap::EvalError& e) {
    return fail(GFM_ERR_EVAL, e.what());
  } catch (const gfmap::ConfigError& e) {
    return fail(GFM_ERR_CONFIG, e.what());
  } catch (const gfmap::ValidationError& e) {
    return fail(GFM_ERR_VALIDATION, e.what());
  } catch (const gfmap::OutOfDomain& e) {
    return fail(GFM_ERR_OUT_OF_DOMAIN, e.what());
  } catch (const gfmap::PreconditionError& e) {
    return fail(GFM_ERR_PRECONDITION, e.what());
  } catch (const gfmap::NotCriticallyFinite& e) {
    return fail(GFM_ERR_NOT_CRITICALLY_FINITE, e.what());
  } catch (const gfmap::CycleDetected& e) {
    return fail(GFM_ERR_CYCLE_DETECTED, e.what());
  } catch (const gfmap::RootBracketFailure& e) {
    return fail(GFM_ERR_ROOT_BRACKET, e.what());
  } catch (const gfmap::NestednessViolation& e) {
    return fail(GFM_ERR_NESTEDNESS, e.what());
  } catch (const gfmap::ResourceLimit& e) {
    return fail(GFM_ERR_RESOURCE_LIMIT, e.what());
  } catch (const gfmap::DegenerateFit& e) {
    return fail(GFM_ERR_DEGENERATE_FIT, e.what());
  } catch (const gfmap::AmbiguousAddress& e) {
    return fail(GFM_ERR_AMBIGUOUS_ADDRESS, e.what());
  } catch (const gfmap::KneadingMismatch& e) {
    return fail(GFM_ERR_KNEADING_MISMATCH, e.what());
  } catch (const gfmap::CardinalityMismatch& e) {
    return fail(GFM_ERR_CARDINALITY_MISMATCH, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(GFM_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(GFM_ERR_RESOURCE_LIMIT, "out of memory");
  } catch (const std::exception& e) {
    return fail(GFM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(GFM_ERR_INTERNAL, "unknown exception");
  }
}

char* copy_out(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void copy_pair(const std::string& a, const std::string& b, char** pa, char** pb) {
  char* x = copy_out(a);
  try {
    *pb = copy_out(b);
  } catch (...) {
    std::free(x);
    throw;
  }
  *pa = x;
}

gfm_options resolve(const gfm_options* o) {
  gfm_options r;
  gfm_options_init(&r);
  if (o) r = *o;
  return r;
}

int depth_or(const gfm_options& o, int fallback) { return o.depth > 0 ? o.depth : fallback; }

gfmap::RunMeta meta_for(const char* command, const gfm_options& o, std::initializer_list<const gfm_map*> maps) {
  gfmap::RunMeta m;
  m.command = command;
  m.seed = o.seed;
  m.reproducible = o.reproducible != 0;
  for (const auto* map : maps) m.config_hashes.push_back(map->hash);
  return m;
}

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

gfm_status adopt(gfmap::MapConfig config, gfm_map** out) {
  return guarded([&] {
    require(out != nullptr, "null output pointer");
    auto map = gfmap::PiecewiseMap::from_config(config);
    *out = new gfm_map{std::move(map), gfmap::config_hash(config)};
  });
}

}  // namespace

extern "C" {

void gfm_options_init(gfm_options* o) {
  if (!o) return;
  o->depth = 0;
  o->max_period = 4;
  o->seed = 0;
  o->samples = 10000;
  o->base_level = 3;
  o->window_lo = 0;
  o->window_hi = 0;
  o->reproducible = 0;
}

const char* gfm_version(void) { return GFMAP_VERSION; }

const char* gfm_status_name(gfm_status s) {
  switch (s) {
    case GFM_OK: return "ok";
    case GFM_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case GFM_ERR_IO: return "io_error";
    case GFM_ERR_PARSE: return "parse_error";
    case GFM_ERR_EVAL: return "eval_error";
    case GFM_ERR_CONFIG: return "config_error";
    case GFM_ERR_VALIDATION: return "validation_error";
    case GFM_ERR_OUT_OF_DOMAIN: return "out_of_domain";
    case GFM_ERR_PRECONDITION: return "precondition_error";
    case GFM_ERR_NOT_CRITICALLY_FINITE: return "not_critically_finite";
    case GFM_ERR_CYCLE_DETECTED: return "cycle_detected";
    case GFM_ERR_ROOT_BRACKET: return "root_bracket_failure";
    case GFM_ERR_NESTEDNESS: return "nestedness_violation";
    case GFM_ERR_RESOURCE_LIMIT: return "resource_limit";
    case GFM_ERR_DEGENERATE_FIT: return "degenerate_fit";
    case GFM_ERR_AMBIGUOUS_ADDRESS: return "ambiguous_address";
    case GFM_ERR_KNEADING_MISMATCH: return "kneading_mismatch";
    case GFM_ERR_CARDINALITY_MISMATCH: return "cardinality_mismatch";
    case GFM_ERR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

const char* gfm_last_error(void) { return last_error.c_str(); }

void gfm_string_free(char* s) { std::free(s); }

gfm_status gfm_map_builtin(const char* name, gfm_map** out) {
  if (!name) return fail(GFM_ERR_INVALID_ARGUMENT, "null builtin name");
  gfmap::MapConfig config;
  const gfm_status s = guarded([&] { config = gfmap::builtin_config(name); });
  return s == GFM_OK ? adopt(std::move(config), out) : s;
}

gfm_status gfm_map_from_json(const char* json, gfm_map** out) {
  if (!json) return fail(GFM_ERR_INVALID_ARGUMENT, "null JSON text");
  gfmap::MapConfig config;
  const gfm_status s = guarded([&] { config = gfmap::parse_map_config(json); });
  return s == GFM_OK ? adopt(std::move(config), out) : s;
}

gfm_status gfm_map_from_file(const char* path, gfm_map** out) {
  if (!path) return fail(GFM_ERR_INVALID_ARGUMENT, "null path");
  gfmap::MapConfig config;
  const gfm_status s = guarded([&] { config = gfmap::load_map_config(path); });
  if (s == GFM_ERR_CONFIG && last_error.rfind("cannot open", 0) == 0) return GFM_ERR_IO;
  return s == GFM_OK ? adopt(std::move(config), out) : s;
}

void gfm_map_free(gfm_map* map) { delete map; }

gfm_status gfm_map_eval(const gfm_map* map, double x, double* y) {
  if (!map || !y) return fail(GFM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *y = map->map(x); });
}

gfm_status gfm_map_deriv(const gfm_map* map, double x, int order, double* y) {
  if (!map || !y) return fail(GFM_ERR_INVALID_ARGUMENT, "null argument");
  if (order < 1 || order > 3) return fail(GFM_ERR_INVALID_ARGUMENT, "derivative order must be 1, 2 or 3");
  return guarded([&] { *y = map->map.deriv(x, order); });
}

gfm_status gfm_map_schwarzian(const gfm_map* map, double x, double* s) {
  if (!map || !s) return fail(GFM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *s = gfmap::schwarzian(map->map, x); });
}

gfm_status gfm_map_lap_count(const gfm_map* map, size_t* count) {
  if (!map || !count) return fail(GFM_ERR_INVALID_ARGUMENT, "null argument");
  *count = map->map.laps().size();
  return GFM_OK;
}

gfm_status gfm_map_dump(const gfm_map* map, char** json) {
  if (!map || !json) return fail(GFM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *json = copy_out(gfmap::dump_map_config(map->map.config())); });
}

gfm_status gfm_map_hash(const gfm_map* map, char** hash) {
  if (!map || !hash) return fail(GFM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *hash = copy_out(map->hash); });
}

gfm_status gfm_analyze(const gfm_map* map, const gfm_options* options, char** json, gfm_verdict* verdict) {
  if (!map || !json) return fail(GFM_ERR_INVALID_ARGUMENT, "null argument");
  const gfm_options o = resolve(options);
  gfmap::AnalysisOptions ao;
  ao.depth = depth_or(o, kAnalyzeDepth);
  ao.max_period = o.max_period;
  if (ao.depth < kMinAnalyzeDepth)
    return fail(GFM_ERR_INVALID_ARGUMENT, "analyze needs depth >= " + std::to_string(kMinAnalyzeDepth));
  if (o.window_lo || o.window_hi) ao.window = std::make_pair(o.window_lo, o.window_hi);
  return guarded([&] {
    const auto report = gfmap::analyze(map->map, ao);
    std::string text = gfmap::analysis_json(map->map, report, ao, meta_for("analyze", o, {map}));
    if (verdict) *verdict = static_cast<gfm_verdict>(report.geometry.verdict);
    *json = copy_out(text);
  });
}

gfm_status gfm_tower_csv(const gfm_map* map, const gfm_options* options, char** csv) {
  if (!map || !csv) return fail(GFM_ERR_INVALID_ARGUMENT, "null argument");
  const gfm_options o = resolve(options);
  return guarded([&] {
    const auto tower = gfmap::PartitionTower::build(map->map, depth_or(o, kTowerDepth));
    *csv = copy_out(gfmap::tower_csv(tower, meta_for("tower", o, {map})));
  });
}

gfm_status gfm_distortion(const gfm_map* map, const gfm_options* options, char** csv, char** summary_json) {
  if (!map || !csv || !summary_json) return fail(GFM_ERR_INVALID_ARGUMENT, "null argument");
  const gfm_options o = resolve(options);
  return guarded([&] {
    const int depth = depth_or(o, kDistortionDepth);
    const auto orbits = gfmap::critical_orbits(map->map);
    const auto tower = gfmap::PartitionTower::build(map->map, orbits, depth);
    const auto fit = gfmap::denjoy_koebe_fit(map->map, tower, orbits, o.base_level, o.samples, o.seed);
    std::vector<int> depths;
    for (int d = o.base_level + 4; d <= depth; d += 2) depths.push_back(d);
    const auto trend = gfmap::distortion_trend(map->map, tower, orbits, o.base_level, o.samples, o.seed, depths);
    const auto meta = meta_for("distortion", o, {map});
    std::string a = gfmap::distortion_csv(fit, meta);
    std::string b = gfmap::distortion_summary_json(fit, trend, meta);
    copy_pair(a, b, csv, summary_json);
  });
}

gfm_status gfm_kneading_json(const gfm_map* map, const gfm_options* options, char** json) {
  if (!map || !json) return fail(GFM_ERR_INVALID_ARGUMENT, "null argument");
  const gfm_options o = resolve(options);
  return guarded([&] {
    const auto k = gfmap::kneading(map->map, depth_or(o, kKneadingDepth));
    *json = copy_out(gfmap::kneading_json({&k}, std::nullopt, meta_for("kneading", o, {map})));
  });
}

gfm_status gfm_kneading_compare(const gfm_map* f, const gfm_map* g, const gfm_options* options, int* equal,
                                char** json) {
  if (!f || !g || !equal || !json) return fail(GFM_ERR_INVALID_ARGUMENT, "null argument");
  const gfm_options o = resolve(options);
  return guarded([&] {
    const int depth = depth_or(o, kKneadingDepth);
    const auto kf = gfmap::kneading(f->map, depth);
    const auto kg = gfmap::kneading(g->map, depth);
    const auto diff = gfmap::kneading_difference(kf, kg);
    *json = copy_out(gfmap::kneading_json({&kf, &kg}, diff, meta_for("kneading", o, {f, g})));
    *equal = diff ? 0 : 1;
  });
}

gfm_status gfm_conjugate(const gfm_map* f, const gfm_map* g, const gfm_options* options, char** knots_csv,
                         char** summary_json, int* defect_ok) {
  if (!f || !g || !knots_csv || !summary_json) return fail(GFM_ERR_INVALID_ARGUMENT, "null argument");
  const gfm_options o = resolve(options);
  return guarded([&] {
    const auto c = gfmap::conjugate(f->map, g->map, depth_or(o, kConjugateDepth));
    const auto meta = meta_for("conjugate", o, {f, g});
    std::string a = gfmap::knots_csv(c, meta);
    std::string b = gfmap::conjugacy_summary_json(c, meta);
    copy_pair(a, b, knots_csv, summary_json);
    if (defect_ok) *defect_ok = c.defect_ok ? 1 : 0;
  });
}

gfm_status gfm_periodic_json(const gfm_map* map, const gfm_options* options, char** json) {
  if (!map || !json) return fail(GFM_ERR_INVALID_ARGUMENT, "null argument");
  const gfm_options o = resolve(options);
  if (o.max_period < 1) return fail(GFM_ERR_INVALID_ARGUMENT, "max period must be at least 1");
  return guarded([&] {
    const auto tower = gfmap::PartitionTower::build(map->map, o.max_period + 1);
    const auto points = gfmap::periodic_points(map->map, tower, o.max_period);
    *json = copy_out(gfmap::periodic_json(points, o.max_period, meta_for("periodic", o, {map})));
  });
}

}  // extern "C"
