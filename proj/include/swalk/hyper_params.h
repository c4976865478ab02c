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

#ifndef SWALK_HYPER_PARAMS_H_
#define SWALK_HYPER_PARAMS_H_

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace swalk {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct HyperParams {
  double lambda = 10.0;    // ridge weight, > 0
  double xi = kInfinity;   // bound on diag(B_tele), [0, inf]
  double alpha = 0.5;      // damping, (0, 1)
  double beta = 0.7;       // self-loop mix, (0, 1]
  double delta_pos = 1.0;  // position decay in partial sessions, > 0
  double delta_inf = 1.0;  // position decay at inference, > 0
  // Convergence tolerance on the entrywise L1 change of the walk. Unset means
  // 1e-3 * n, resolved once the item count is known.
  std::optional<double> epsilon;
  int max_steps = 10;
  double keep_ratio = 1.0;  // (0, 1]

  // Throws ConfigError naming the first out-of-range field.
  void Validate() const;
  double ResolvedEpsilon(std::size_t num_items) const;

  nlohmann::json ToJson() const;
  // Missing keys keep their current values; unknown keys are ignored.
  void MergeJson(const nlohmann::json& j);
};

// Per-dataset defaults. Names: yc-1/4, digi1, yc5, digi5, rr, nowp.
std::optional<HyperParams> ProfileDefaults(const std::string& name);
std::vector<std::string> ProfileNames();

}  // namespace swalk

#endif  // SWALK_HYPER_PARAMS_H_
