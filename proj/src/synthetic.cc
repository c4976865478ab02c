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

#include "swalk/synthetic.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "swalk/error.h"

namespace swalk {

void SyntheticConfig::Validate() const {
  if (num_items < 2 || num_sessions < 1 || cluster_size < 2 ||
      cluster_size > num_items) {
    throw ConfigError("synthetic corpus needs num_items >= cluster_size >= 2");
  }
  if (bundle_size < 0 || bundle_size > cluster_size ||
      (bundle_size > 0 && cluster_size % bundle_size != 0)) {
    throw ConfigError("bundle_size must divide cluster_size");
  }
  const int bundles = bundle_size == 0 ? 1 : cluster_size / bundle_size;
  if (successors < 0 || successors >= cluster_size ||
      (successor_prob > 0 && successors == 0)) {
    throw ConfigError("successors must be in [1, cluster_size)");
  }
  if (bundle_successors < 0 || bundle_successors >= std::max(bundles, 1) ||
      (bundle_move_prob > 0 && bundle_successors == 0)) {
    throw ConfigError("bundle_successors must be in [1, bundles per cluster)");
  }
  if (!(successor_decay > 0 && successor_decay <= 1)) {
    throw ConfigError("successor_decay must be in (0, 1]");
  }
  if (!(mean_length >= 2) || max_length < 2) {
    throw ConfigError("mean_length and max_length must be >= 2");
  }
  const double total =
      noise_prob + repeat_prob + successor_prob + bundle_move_prob;
  if (noise_prob < 0 || repeat_prob < 0 || successor_prob < 0 ||
      bundle_move_prob < 0 || total > 1) {
    throw ConfigError("step probabilities must be >= 0 and sum to <= 1");
  }
  if (span_days < 1) throw ConfigError("span_days must be >= 1");
}

namespace {

std::vector<double> ZipfWeights(int count, double skew) {
  std::vector<double> w(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) w[i] = std::pow(i + 1.0, -skew);
  return w;
}

// `count` distinct values from [0, range) other than `self`.
std::vector<int> DrawOthers(int self, int range, int count,
                            std::mt19937_64& rng) {
  std::vector<int> pool(static_cast<std::size_t>(range));
  std::iota(pool.begin(), pool.end(), 0);
  std::swap(pool[self], pool.back());
  pool.pop_back();
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(static_cast<std::size_t>(count));
  return pool;
}

}  // namespace

EventLog GenerateSyntheticLog(const SyntheticConfig& config,
                              std::uint64_t seed) {
  config.Validate();
  std::mt19937_64 rng(seed);
  const int n = config.num_items;
  const int size = config.cluster_size;
  const int clusters = n / size;  // leftover items only appear as noise
  const int bundle = config.bundle_size == 0 ? size : config.bundle_size;
  const int bundles = size / bundle;

  // Item ids are shuffled so cluster membership is not visible in them.
  // Within a cluster, slot s of bundle b is item label[c*size + b*bundle + s]
  // and slot order is popularity order.
  std::vector<int> label(static_cast<std::size_t>(n));
  std::iota(label.begin(), label.end(), 0);
  std::shuffle(label.begin(), label.end(), rng);
  auto item_at = [&](int cluster, int slot) {
    return label[static_cast<std::size_t>(cluster * size + slot)];
  };

  std::vector<std::vector<int>> item_succ(static_cast<std::size_t>(n));
  std::vector<std::vector<int>> bundle_succ(
      static_cast<std::size_t>(clusters * bundles));
  for (int c = 0; c < clusters; ++c) {
    for (int s = 0; s < size; ++s) {
      item_succ[c * size + s] = DrawOthers(s, size, config.successors, rng);
    }
    for (int b = 0; b < bundles; ++b) {
      bundle_succ[c * bundles + b] =
          DrawOthers(b, bundles, config.bundle_successors, rng);
    }
  }

  auto cluster_weights = ZipfWeights(clusters, config.cluster_skew);
  std::shuffle(cluster_weights.begin(), cluster_weights.end(), rng);
  std::discrete_distribution<int> cluster_dist(cluster_weights.begin(),
                                               cluster_weights.end());
  std::uniform_int_distribution<int> bundle_dist(0, bundles - 1);
  const auto slot_weights = ZipfWeights(bundle, config.item_skew);
  std::discrete_distribution<int> slot_dist(slot_weights.begin(),
                                            slot_weights.end());
  std::vector<double> succ_weights(
      static_cast<std::size_t>(std::max(config.successors, 1)));
  for (std::size_t k = 0; k < succ_weights.size(); ++k) {
    succ_weights[k] = std::pow(config.successor_decay, static_cast<double>(k));
  }
  std::discrete_distribution<int> succ_dist(succ_weights.begin(),
                                            succ_weights.end());
  std::uniform_int_distribution<int> bundle_succ_dist(
      0, std::max(config.bundle_successors, 1) - 1);
  std::geometric_distribution<int> extra_length(1.0 /
                                                (config.mean_length - 1.0));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> any_item(0, n - 1);
  const std::int64_t span =
      static_cast<std::int64_t>(config.span_days) * kSecondsPerDay;
  std::uniform_int_distribution<std::int64_t> start_time(0, span - 1);
  std::uniform_int_distribution<int> dwell(20, 300);

  const double p_repeat = config.noise_prob + config.repeat_prob;
  const double p_successor = p_repeat + config.successor_prob;
  const double p_move = p_successor + config.bundle_move_prob;

  EventLog log;
  std::vector<int> slots;  // cluster slot per event, -1 for noise
  std::vector<int> items;
  for (int sid = 0; sid < config.num_sessions; ++sid) {
    const int c = cluster_dist(rng);
    int b = bundle_dist(rng);
    // Fresh items only; repeats come from repeat_prob. Gives up after a few
    // tries so small bundles cannot stall the session.
    auto draw_in_bundle = [&] {
      int slot = b * bundle + slot_dist(rng);
      for (int tries = 0; tries < 8 && std::find(slots.begin(), slots.end(),
                                                 slot) != slots.end();
           ++tries) {
        slot = b * bundle + slot_dist(rng);
      }
      return slot;
    };
    const int length = std::min(config.max_length, 2 + extra_length(rng));
    slots.clear();
    slots.push_back(draw_in_bundle());
    items.assign(1, item_at(c, slots[0]));
    while (static_cast<int>(items.size()) < length) {
      const double u = unit(rng);
      int slot;
      if (u < config.noise_prob) {
        slots.push_back(-1);
        items.push_back(any_item(rng));
        continue;
      } else if (u < p_repeat) {
        std::uniform_int_distribution<std::size_t> back(0, items.size() - 1);
        const std::size_t j = back(rng);
        slots.push_back(slots[j]);
        items.push_back(items[j]);
        continue;
      } else if (u < p_successor && slots.back() >= 0) {
        slot = item_succ[c * size + slots.back()][succ_dist(rng)];
      } else if (u >= p_successor && u < p_move) {
        b = bundle_succ[c * bundles + b][bundle_succ_dist(rng)];
        slot = draw_in_bundle();
      } else {
        slot = draw_in_bundle();
      }
      slots.push_back(slot);
      items.push_back(item_at(c, slot));
    }
    std::int64_t t = start_time(rng);
    const std::string session_id = fmt::format("s{}", sid);
    for (int item : items) {
      log.records.push_back({session_id, fmt::format("i{}", item), t});
      t += dwell(rng);
    }
  }
  return log;
}

}  // namespace swalk
