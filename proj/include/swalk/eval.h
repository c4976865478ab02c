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

#ifndef SWALK_EVAL_H_
#define SWALK_EVAL_H_

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "swalk/corpus.h"
#include "swalk/recommender.h"

namespace swalk {

struct MetricsAtK {
  int k = 0;
  double hr = 0;
  double mrr = 0;
  double recall = 0;
  double map = 0;
};

struct EvalReport {
  std::vector<MetricsAtK> metrics;  // ascending k
  std::size_t events = 0;           // scored prediction events
  std::size_t sessions = 0;
  std::size_t skipped_events = 0;  // prefixes with no known item
  double wall_time_s = 0;
  nlohmann::json model_meta;

  // Throws std::out_of_range for a cutoff that was not evaluated.
  const MetricsAtK& At(int k) const;
  nlohmann::json ToJson() const;
  std::string ToTable() const;
};

// Ranked next-item candidates for a prefix, best first, at most max_k items.
// Prefix entries < 0 are items unknown to the model.
using Scorer = std::function<std::vector<ItemIndex>(
    std::span<const ItemIndex> prefix, std::size_t max_k)>;

Scorer MakeScorer(const Recommender& recommender);

struct EvalOptions {
  std::vector<int> cutoffs{5, 10, 20, 50, 100};
  int threads = 1;
  // Optional per-event rows: session, t, target, rank (0 = miss), relevant.
  std::ostream* per_event_dump = nullptr;
};

// Iterative revealing: for each session s and t = 1..|s|-1 the prefix
// s_1..s_t is scored. HR/MRR judge s_{t+1}; Recall/MAP judge the deduplicated
// remainder {s_{t+1}..s_|s|} with
//   Recall@k = |top-k & rel| / |rel|,
//   MAP@k    = 1/min(k, |rel|) * sum_{j<=k} Prec(j) rel(j).
// Averages are over prediction events. Unknown targets are misses; prefixes
// without any known item are skipped and counted.
EvalReport Evaluate(const Scorer& scorer,
                    std::span<const std::vector<ItemIndex>> sessions,
                    const EvalOptions& options = {});

struct MappedSessions {
  std::vector<std::vector<ItemIndex>> sessions;
  std::size_t events = 0;
  std::size_t oov_events = 0;

  double OovFraction() const {
    return events == 0 ? 0.0 : static_cast<double>(oov_events) / events;
  }
};

// Re-expresses test sessions in a model's index space. Items the model does
// not know get distinct negative ids (one per external id) so relevant sets
// still deduplicate correctly.
MappedSessions MapSessionsToVocab(const SessionDataset& test,
                                  const ItemVocab& model_vocab);
MappedSessions MapSessionsToVocab(const SessionDataset& test,
                                  const std::vector<std::string>& model_vocab);

// Keeps the most recent ceil(fraction * m) sessions by end time, in
// chronological order, with a compacted vocabulary.
SessionDataset SubsampleTrain(const SessionDataset& train, double fraction);

struct LengthBuckets {
  EvalReport short_sessions;  // |s| <= threshold
  EvalReport long_sessions;   // |s| > threshold
};

LengthBuckets LengthBucketReport(
    const Scorer& scorer, std::span<const std::vector<ItemIndex>> sessions,
    const EvalOptions& options = {}, std::size_t threshold = 5);

}  // namespace swalk

#endif  // SWALK_EVAL_H_
