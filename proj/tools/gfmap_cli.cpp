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

// gfmap command line front end. Talks to the library only through the C API.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gfmap/gfmap.h"

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kNegative = 1, kInput = 2, kInternal = 3 };

struct MapSource {
  std::string builtin;
  std::string path;
};

struct Settings {
  MapSource first;
  MapSource second;
  std::string positional;
  int depth = 0;
  int max_period = 4;
  std::uint64_t seed = 0;
  std::uint64_t samples = 10000;
  int base_level = 3;
  std::vector<int> window;
  std::string out;
  bool reproducible = false;
  bool dump = false;
};

struct MapDeleter {
  void operator()(gfm_map* m) const { gfm_map_free(m); }
};
using MapPtr = std::unique_ptr<gfm_map, MapDeleter>;

struct StringDeleter {
  void operator()(char* s) const { gfm_string_free(s); }
};
using CString = std::unique_ptr<char, StringDeleter>;

int exit_code(gfm_status s) {
  switch (s) {
    case GFM_OK: return kOk;
    case GFM_ERR_KNEADING_MISMATCH: return kNegative;
    case GFM_ERR_ROOT_BRACKET:
    case GFM_ERR_NESTEDNESS:
    case GFM_ERR_CARDINALITY_MISMATCH:
    case GFM_ERR_INTERNAL: return kInternal;
    default: return kInput;
  }
}

class Failure {
 public:
  Failure(int code, std::string msg) : code(code), message(std::move(msg)) {}
  int code;
  std::string message;
};

void check(gfm_status s, const std::string& what) {
  if (s != GFM_OK)
    throw Failure(exit_code(s), what + ": " + gfm_status_name(s) + ": " + gfm_last_error());
}

MapPtr load(const MapSource& src, const std::string& flag) {
  if (!src.builtin.empty() && !src.path.empty())
    throw Failure(kInput, "give either --builtin" + flag + " or --map" + flag + ", not both");
  gfm_map* m = nullptr;
  if (!src.builtin.empty())
    check(gfm_map_builtin(src.builtin.c_str(), &m), "builtin '" + src.builtin + "'");
  else if (!src.path.empty())
    check(gfm_map_from_file(src.path.c_str(), &m), "map '" + src.path + "'");
  else
    throw Failure(kInput, "no map given (use --builtin" + flag + " NAME or --map" + flag + " PATH)");
  return MapPtr(m);
}

gfm_options options_of(const Settings& s) {
  gfm_options o;
  gfm_options_init(&o);
  o.depth = s.depth;
  o.max_period = s.max_period;
  o.seed = s.seed;
  o.samples = s.samples;
  o.base_level = s.base_level;
  if (!s.window.empty()) {
    if (s.window.size() != 2) throw Failure(kInput, "--window takes two levels a,b");
    o.window_lo = s.window[0];
    o.window_hi = s.window[1];
  }
  o.reproducible = s.reproducible ? 1 : 0;
  return o;
}

// Every file of a command is staged first and renamed into place once all of
// them were written.
class Output {
 public:
  void add(const std::string& path, const char* text) { files_.push_back({path, text}); }

  void commit() {
    std::vector<std::pair<fs::path, fs::path>> staged;
    for (const auto& [path, text] : files_) {
      if (path == "-") continue;
      fs::path target(path);
      fs::path tmp = target;
      tmp += ".partial";
      std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
      f << text;
      f.close();
      if (!f) {
        for (auto& s : staged) fs::remove(s.first);
        fs::remove(tmp);
        throw Failure(kInput, "cannot write '" + path + "'");
      }
      staged.push_back({tmp, target});
    }
    for (auto& [tmp, target] : staged) fs::rename(tmp, target);
    for (const auto& [path, text] : files_)
      if (path == "-") std::cout << text;
  }

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

std::string summary_path(const std::string& out) {
  if (out == "-") return "-";
  fs::path p(out);
  return (p.parent_path() / (p.stem().string() + "_summary.json")).string();
}

void note(const std::string& line) { std::cerr << line << "\n"; }

int run_analyze(const Settings& s) {
  MapPtr map = load(s.first, "");
  if (s.depth != 0 && s.depth < 6) throw Failure(kInput, "analyze needs --depth >= 6");
  const gfm_options o = options_of(s);
  char* json = nullptr;
  gfm_verdict verdict = GFM_INCONCLUSIVE;
  check(gfm_analyze(map.get(), &o, &json, &verdict), "analyze");
  CString j(json);
  Output out;
  const std::string path = s.out.empty() ? "report.json" : s.out;
  out.add(path, j.get());
  out.commit();
  const char* names[] = {"geometrically_finite", "not_geometrically_finite", "inconclusive"};
  note(std::string("verdict: ") + names[verdict] + (path == "-" ? "" : " (" + path + ")"));
  return kOk;
}

int run_tower(const Settings& s) {
  MapPtr map = load(s.first, "");
  const gfm_options o = options_of(s);
  char* csv = nullptr;
  check(gfm_tower_csv(map.get(), &o, &csv), "tower");
  CString c(csv);
  Output out;
  out.add(s.out.empty() ? "tower.csv" : s.out, c.get());
  out.commit();
  return kOk;
}

int run_distortion(const Settings& s) {
  MapPtr map = load(s.first, "");
  const gfm_options o = options_of(s);
  char* csv = nullptr;
  char* json = nullptr;
  check(gfm_distortion(map.get(), &o, &csv, &json), "distortion");
  CString c(csv), j(json);
  const std::string path = s.out.empty() ? "distortion.csv" : s.out;
  Output out;
  out.add(path, c.get());
  out.add(summary_path(path), j.get());
  out.commit();
  return kOk;
}

int run_kneading(const Settings& s) {
  MapPtr f = load(s.first, "");
  const gfm_options o = options_of(s);
  const std::string path = s.out.empty() ? "-" : s.out;
  if (s.second.builtin.empty() && s.second.path.empty()) {
    char* json = nullptr;
    check(gfm_kneading_json(f.get(), &o, &json), "kneading");
    CString j(json);
    Output out;
    out.add(path, j.get());
    out.commit();
    return kOk;
  }
  MapPtr g = load(s.second, "2");
  int equal = 0;
  char* json = nullptr;
  check(gfm_kneading_compare(f.get(), g.get(), &o, &equal, &json), "kneading");
  CString j(json);
  Output out;
  out.add(path, j.get());
  out.commit();
  note(equal ? "kneading invariants equal" : "kneading invariants differ");
  return equal ? kOk : kNegative;
}

int run_conjugate(const Settings& s) {
  MapPtr f = load(s.first, "");
  MapPtr g = load(s.second, "2");
  const gfm_options o = options_of(s);
  char* csv = nullptr;
  char* json = nullptr;
  int defect_ok = 0;
  const gfm_status st = gfm_conjugate(f.get(), g.get(), &o, &csv, &json, &defect_ok);
  if (st == GFM_ERR_KNEADING_MISMATCH) {
    note(std::string("not conjugate: ") + gfm_last_error());
    return kNegative;
  }
  check(st, "conjugate");
  CString c(csv), j(json);
  const std::string path = s.out.empty() ? "knots.csv" : s.out;
  Output out;
  out.add(path, c.get());
  out.add(summary_path(path), j.get());
  out.commit();
  if (!defect_ok) {
    note("conjugacy defect exceeds its bound; see the summary");
    return kInternal;
  }
  return kOk;
}

int run_periodic(const Settings& s) {
  MapPtr map = load(s.first, "");
  const gfm_options o = options_of(s);
  char* json = nullptr;
  check(gfm_periodic_json(map.get(), &o, &json), "periodic");
  CString j(json);
  Output out;
  out.add(s.out.empty() ? "-" : s.out, j.get());
  out.commit();
  return kOk;
}

void add_map_flags(CLI::App* cmd, Settings& s, bool pair) {
  cmd->add_option("--builtin", s.first.builtin, "builtin map: tent, quadratic, neutral_cubic");
  cmd->add_option("--map", s.first.path, "map config JSON file");
  cmd->add_option("config", s.positional, "map config JSON file (same as --map)");
  if (pair) {
    cmd->add_option("--builtin2", s.second.builtin, "second builtin map");
    cmd->add_option("--map2", s.second.path, "second map config JSON file");
  }
  cmd->add_option("--depth", s.depth, "partition depth (0: command default)")->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", s.seed, "random seed");
  cmd->add_option("--out", s.out, "output path, - for stdout");
  cmd->add_flag("--reproducible", s.reproducible, "omit timestamps from outputs");
  cmd->add_flag("--dump", s.dump, "print the parsed map config and exit");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gfmap: geometry of interval maps with power-law critical points"};
  app.set_version_flag("--version", std::string(gfm_version()));
  app.require_subcommand(1);

  Settings s;
  auto* analyze = app.add_subcommand("analyze", "full geometric finiteness analysis to report.json");
  add_map_flags(analyze, s, false);
  analyze->add_option("--max-period", s.max_period, "largest period searched")->check(CLI::PositiveNumber);
  analyze->add_option("--window", s.window, "decay fit window a,b")->delimiter(',')->expected(2);

  auto* tower = app.add_subcommand("tower", "nested partition table as CSV");
  add_map_flags(tower, s, false);

  auto* distortion = app.add_subcommand("distortion", "distortion samples and fitted bound");
  add_map_flags(distortion, s, false);
  distortion->add_option("--samples", s.samples, "fitting sample count")->check(CLI::PositiveNumber);
  distortion->add_option("--base-level", s.base_level, "level of the target intervals")->check(CLI::PositiveNumber);

  auto* kneading = app.add_subcommand("kneading", "kneading invariant; compares when a second map is given");
  add_map_flags(kneading, s, true);

  auto* conjugate = app.add_subcommand("conjugate", "conjugating homeomorphism knots and summary");
  add_map_flags(conjugate, s, true);

  auto* periodic = app.add_subcommand("periodic", "periodic orbits up to --max-period");
  add_map_flags(periodic, s, false);
  periodic->add_option("--max-period", s.max_period, "largest period searched")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInput;
  }

  try {
    if (!s.positional.empty()) {
      if (!s.first.path.empty() || !s.first.builtin.empty())
        throw Failure(kInput, "give the map once (positional path, --map or --builtin)");
      s.first.path = s.positional;
    }
    if (s.dump) {
      MapPtr map = load(s.first, "");
      char* json = nullptr;
      check(gfm_map_dump(map.get(), &json), "dump");
      CString j(json);
      std::cout << j.get();
      return kOk;
    }
    if (analyze->parsed()) return run_analyze(s);
    if (tower->parsed()) return run_tower(s);
    if (distortion->parsed()) return run_distortion(s);
    if (kneading->parsed()) return run_kneading(s);
    if (conjugate->parsed()) return run_conjugate(s);
    if (periodic->parsed()) return run_periodic(s);
    return kInput;
  } catch (const Failure& f) {
    std::cerr << "gfmap: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "gfmap: " << e.what() << "\n";
    return kInternal;
  }
}
