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

#ifndef SWALK_SYNTHETIC_H_
#define SWALK_SYNTHETIC_H_

#include <cstdint>

#include "swalk/corpus.h"

namespace swalk {

// Clustered session generator with planted sequential and co-occurrence
// structure. Items are grouped into clusters and each cluster is cut into
// bundles. Bundles have planted successor bundles and items have planted
// successor items, all inside their cluster. A session starts in a random
// bundle of one cluster and at every step either
//   - jumps to a uniformly random item (noise_prob),
//   - repeats one of its earlier items (repeat_prob),
//   - follows a planted successor of the previous item (successor_prob),
//   - moves to a successor bundle and draws from it (bundle_move_prob),
//   - or draws another item of its current bundle (the remainder).
// Draws inside a bundle follow a Zipf law over the bundle's items and avoid
// items the session already holds.
struct SyntheticConfig {
  int num_items = 5000;
  int num_sessions = 50000;
  int cluster_size = 100;
  int bundle_size = 20;      // must divide cluster_size; 0 = whole cluster
  double mean_length = 5.0;  // lengths are 2 + geometric
  int max_length = 40;
  int successors = 2;             // planted successors per item
  double successor_decay = 0.43;  // weight ratio between ranked successors
  int bundle_successors = 4;      // planted successors per bundle
  double noise_prob = 0.0;
  double repeat_prob = 0.05;
  double successor_prob = 0.2;
  double bundle_move_prob = 0.3;
  double cluster_skew = 0.8;  // Zipf exponent over clusters
  double item_skew = 1.0;     // Zipf exponent within a bundle
  int span_days = 30;

  void Validate() const;
};

// Deterministic for a given (config, seed) on one standard library.
EventLog GenerateSyntheticLog(const SyntheticConfig& config,
                              std::uint64_t seed);

}  // namespace swalk

#endif  // SWALK_SYNTHETIC_H_
