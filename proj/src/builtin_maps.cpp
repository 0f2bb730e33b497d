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

#include "gfmap/errors.hpp"
#include "gfmap/map_model.hpp"

namespace gfmap {

namespace {

MapConfig unimodal(std::string name, std::string left, std::string right, double gamma) {
  MapConfig config;
  config.name = std::move(name);
  config.domain = {-1.0, 1.0};
  config.alpha = 1.0;
  config.laps = {{{-1.0, 0.0}, std::move(left)}, {{0.0, 1.0}, std::move(right)}};
  CriticalConfig c;
  c.c = 0.0;
  c.gamma = gamma;
  config.criticals = {c};
  return config;
}

}  // namespace

std::vector<std::string> builtin_names() { return {"tent", "quadratic", "neutral_cubic"}; }

MapConfig builtin_config(std::string_view name) {
  if (name == "tent") return unimodal("tent", "1+2*x", "1-2*x", 1.0);
  if (name == "quadratic") return unimodal("quadratic", "1-2*x^2", "1-2*x^2", 2.0);
  // p(-1) = -1, p'(-1) = 1, p(0) = 1, p'(0) = 0 on the left, mirrored on the right.
  if (name == "neutral_cubic")
    return unimodal("neutral_cubic", "-3*x^3-5*x^2+1", "3*x^3-5*x^2+1", 2.0);
  throw ConfigError("unknown builtin map '" + std::string(name) +
                    "' (expected tent, quadratic or neutral_cubic)");
}

PiecewiseMap builtin(std::string_view name) { return PiecewiseMap::from_config(builtin_config(name)); }

}  // namespace gfmap
