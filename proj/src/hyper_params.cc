// Copyright 2026 The swalk Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "swalk/hyper_params.h"

#include <fmt/format.h>

#include <cmath>
#include <map>

#include "swalk/error.h"

namespace swalk {

void HyperParams::Validate() const {
  auto fail = [](const char* name, double value, const char* range) {
    throw ConfigError(
        fmt::format("hyperparameter {}={} outside {}", name, value, range));
  };
  if (!(lambda > 0) || !std::isfinite(lambda))
    fail("lambda", lambda, "(0, inf)");
  if (!(xi >= 0)) fail("xi", xi, "[0, inf]");
  if (!(alpha > 0 && alpha < 1)) fail("alpha", alpha, "(0, 1)");
  if (!(beta > 0 && beta <= 1)) fail("beta", beta, "(0, 1]");
  if (!(delta_pos > 0)) fail("delta_pos", delta_pos, "(0, inf]");
  if (!(delta_inf > 0)) fail("delta_inf", delta_inf, "(0, inf]");
  if (epsilon && !(*epsilon > 0)) fail("epsilon", *epsilon, "(0, inf)");
  if (max_steps < 1) fail("max_steps", max_steps, "[1, inf)");
  if (!(keep_ratio > 0 && keep_ratio <= 1)) {
    fail("keep_ratio", keep_ratio, "(0, 1]");
  }
}

double HyperParams::ResolvedEpsilon(std::size_t num_items) const {
  return epsilon ? *epsilon : 1e-3 * static_cast<double>(num_items);
}

namespace {

// JSON has no infinity; "inf" strings stand in for it.
nlohmann::json Number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double ReadNumber(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity") return kInfinity;
    throw ConfigError(fmt::format("'{}' must be a number, got '{}'", key, s));
  }
  if (!v.is_number()) {
    throw ConfigError(fmt::format("'{}' must be a number", key));
  }
  return v.get<double>();
}

}  // namespace

nlohmann::json HyperParams::ToJson() const {
  nlohmann::json j = {{"lambda", Number(lambda)},
                      {"xi", Number(xi)},
                      {"alpha", alpha},
                      {"beta", beta},
                      {"delta_pos", Number(delta_pos)},
                      {"delta_inf", Number(delta_inf)},
                      {"max_steps", max_steps},
                      {"keep_ratio", keep_ratio}};
  j["epsilon"] = epsilon ? nlohmann::json(*epsilon) : nlohmann::json(nullptr);
  return j;
}

void HyperParams::MergeJson(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("hyperparameters must be an object");
  if (j.contains("lambda")) lambda = ReadNumber(j, "lambda");
  if (j.contains("xi")) xi = ReadNumber(j, "xi");
  if (j.contains("alpha")) alpha = ReadNumber(j, "alpha");
  if (j.contains("beta")) beta = ReadNumber(j, "beta");
  if (j.contains("delta_pos")) delta_pos = ReadNumber(j, "delta_pos");
  if (j.contains("delta_inf")) delta_inf = ReadNumber(j, "delta_inf");
  if (j.contains("epsilon")) {
    if (j["epsilon"].is_null()) {
      epsilon.reset();
    } else {
      epsilon = ReadNumber(j, "epsilon");
    }
  }
  if (j.contains("max_steps")) {
    max_steps = static_cast<int>(ReadNumber(j, "max_steps"));
  }
  if (j.contains("keep_ratio")) keep_ratio = ReadNumber(j, "keep_ratio");
}

namespace {

HyperParams Profile(double alpha, double beta, double lambda, double delta_pos,
                    double delta_inf) {
  HyperParams p;
  p.alpha = alpha;
  p.beta = beta;
  p.lambda = lambda;
  p.delta_pos = delta_pos;
  p.delta_inf = delta_inf;
  return p;
}

const std::map<std::string, HyperParams>& Profiles() {
  static const auto* profiles = new std::map<std::string, HyperParams>{
      {"yc-1/4", Profile(0.5, 0.7, 10, 1, 1)},
      {"digi1", Profile(0.5, 0.9, 10, 0.5, 2)},
      {"yc5", Profile(0.5, 0.7, 10, 1, 1)},
      {"digi5", Profile(0.7, 0.7, 10, 0.5, 4)},
      {"rr", Profile(0.5, 0.9, 10, 0.25, 4)},
      {"nowp", Profile(0.5, 0.9, 10, 1, 1)},
  };
  return *profiles;
}

}  // namespace

std::optional<HyperParams> ProfileDefaults(const std::string& name) {
  const auto& profiles = Profiles();
  auto it = profiles.find(name);
  if (it == profiles.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> ProfileNames() {
  std::vector<std::string> names;
  for (const auto& [name, p] : Profiles()) names.push_back(name);
  return names;
}

}  // namespace swalk
