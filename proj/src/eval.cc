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

#include "swalk/eval.h"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "swalk/error.h"
#include "swalk/model_store.h"

namespace swalk {

const MetricsAtK& EvalReport::At(int k) const {
  for (const auto& m : metrics) {
    if (m.k == k) return m;
  }
  throw std::out_of_range(fmt::format("cutoff {} was not evaluated", k));
}

nlohmann::json EvalReport::ToJson() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& m : metrics) {
    rows.push_back({{"k", m.k},
                    {"hr", m.hr},
                    {"mrr", m.mrr},
                    {"recall", m.recall},
                    {"map", m.map}});
  }
  return {{"metrics", rows},
          {"events", events},
          {"sessions", sessions},
          {"skipped_events", skipped_events},
          {"wall_time_s", wall_time_s},
          {"model", model_meta}};
}

std::string EvalReport::ToTable() const {
  std::string out = fmt::format("{:>6} {:>9} {:>9} {:>9} {:>9}\n", "k", "HR",
                                "MRR", "Recall", "MAP");
  for (const auto& m : metrics) {
    out += fmt::format("{:>6} {:>9.4f} {:>9.4f} {:>9.4f} {:>9.4f}\n", m.k, m.hr,
                       m.mrr, m.recall, m.map);
  }
  out += fmt::format("events={} sessions={} skipped={} wall_time={:.2f}s\n",
                     events, sessions, skipped_events, wall_time_s);
  return out;
}

Scorer MakeScorer(const Recommender& recommender) {
  return [&recommender](std::span<const ItemIndex> prefix, std::size_t max_k) {
    return recommender.Recommend(prefix, max_k).items;
  };
}

namespace {

constexpr int kMetricsPerCutoff = 4;  // hr, mrr, recall, map

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void Add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0;
  double carry_ = 0;
};

struct SessionOutcome {
  std::vector<double> sums;  // cutoff-major, kMetricsPerCutoff per cutoff
  std::size_t events = 0;
  std::size_t skipped = 0;
  std::string dump;
};

SessionOutcome EvaluateSession(const Scorer& scorer,
                               std::span<const ItemIndex> session,
                               std::size_t session_index,
                               const std::vector<int>& cutoffs,
                               bool want_dump) {
  SessionOutcome out;
  out.sums.assign(cutoffs.size() * kMetricsPerCutoff, 0.0);
  const auto max_k = static_cast<std::size_t>(cutoffs.back());
  std::vector<ItemIndex> relevant;
  bool any_known = false;
  for (std::size_t t = 1; t < session.size(); ++t) {
    any_known = any_known || session[t - 1] >= 0;
    if (!any_known) {
      ++out.skipped;
      continue;
    }
    ++out.events;
    const ItemIndex target = session[t];
    relevant.assign(session.begin() + static_cast<std::ptrdiff_t>(t),
                    session.end());
    std::sort(relevant.begin(), relevant.end());
    relevant.erase(std::unique(relevant.begin(), relevant.end()),
                   relevant.end());
    auto is_relevant = [&](ItemIndex item) {
      return item >= 0 &&
             std::binary_search(relevant.begin(), relevant.end(), item);
    };

    std::vector<ItemIndex> ranked = scorer(session.first(t), max_k);
    if (ranked.size() > max_k) ranked.resize(max_k);
    std::size_t target_rank = 0;  // 1-based; 0 = absent
    for (std::size_t j = 0; j < ranked.size(); ++j) {
      if (target >= 0 && ranked[j] == target) {
        target_rank = j + 1;
        break;
      }
    }

    // One pass over the list, closing out each cutoff as it is reached.
    const double rel_count = static_cast<double>(relevant.size());
    std::size_t hits = 0;
    double precision_sum = 0;
    std::size_t c = 0;
    for (std::size_t j = 1; j <= max_k && c < cutoffs.size(); ++j) {
      if (j <= ranked.size() && is_relevant(ranked[j - 1])) {
        ++hits;
        precision_sum += static_cast<double>(hits) / static_cast<double>(j);
      }
      while (c < cutoffs.size() && static_cast<std::size_t>(cutoffs[c]) == j) {
        const auto k = static_cast<std::size_t>(cutoffs[c]);
        double* s = &out.sums[c * kMetricsPerCutoff];
        const bool hit = target_rank != 0 && target_rank <= k;
        s[0] += hit ? 1.0 : 0.0;
        s[1] += hit ? 1.0 / static_cast<double>(target_rank) : 0.0;
        s[2] += static_cast<double>(hits) / rel_count;
        s[3] +=
            precision_sum / static_cast<double>(std::min(k, relevant.size()));
        ++c;
      }
    }
    if (want_dump) {
      out.dump += fmt::format("{}\t{}\t{}\t{}\t{}\n", session_index, t, target,
                              target_rank, relevant.size());
    }
  }
  return out;
}

void CheckInvariants(const EvalReport& report) {
  const MetricsAtK* prev = nullptr;
  for (const auto& m : report.metrics) {
    for (double v : {m.hr, m.mrr, m.recall, m.map}) {
      if (!(v >= -1e-12 && v <= 1 + 1e-12)) {
        throw NumericError(fmt::format("metric outside [0, 1] at k={}", m.k));
      }
    }
    if (m.mrr > m.hr + 1e-12) {
      throw NumericError(fmt::format("MRR exceeds HR at k={}", m.k));
    }
    if (prev && (m.hr + 1e-12 < prev->hr || m.recall + 1e-12 < prev->recall ||
                 m.mrr + 1e-12 < prev->mrr)) {
      throw NumericError(fmt::format(
          "HR/MRR/Recall decreased from k={} to k={}", prev->k, m.k));
    }
    prev = &m;
  }
}

}  // namespace

EvalReport Evaluate(const Scorer& scorer,
                    std::span<const std::vector<ItemIndex>> sessions,
                    const EvalOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<int> cutoffs = options.cutoffs;
  std::sort(cutoffs.begin(), cutoffs.end());
  cutoffs.erase(std::unique(cutoffs.begin(), cutoffs.end()), cutoffs.end());
  if (cutoffs.empty() || cutoffs.front() < 1) {
    throw ConfigError("cutoffs must be a non-empty list of positive integers");
  }
  for (const auto& s : sessions) {
    if (s.size() < 2) throw DataError("test sessions must have length >= 2");
  }

  const bool want_dump = options.per_event_dump != nullptr;
  std::vector<SessionOutcome> outcomes(sessions.size());
  const std::size_t threads = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::max(options.threads, 1)), 1,
      std::max<std::size_t>(sessions.size(), 1));
  auto work = [&](std::size_t worker) {
    for (std::size_t i = worker; i < sessions.size(); i += threads) {
      outcomes[i] = EvaluateSession(scorer, sessions[i], i, cutoffs, want_dump);
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  // Session-order reduction keeps results independent of the thread count.
  EvalReport report;
  report.sessions = sessions.size();
  std::vector<CompensatedSum> totals(cutoffs.size() * kMetricsPerCutoff);
  for (const auto& o : outcomes) {
    report.events += o.events;
    report.skipped_events += o.skipped;
    for (std::size_t m = 0; m < o.sums.size(); ++m) totals[m].Add(o.sums[m]);
    if (want_dump) *options.per_event_dump << o.dump;
  }
  const double denom =
      report.events == 0 ? 1.0 : static_cast<double>(report.events);
  for (std::size_t c = 0; c < cutoffs.size(); ++c) {
    const auto* t = &totals[c * kMetricsPerCutoff];
    report.metrics.push_back(
        MetricsAtK{cutoffs[c], t[0].value() / denom, t[1].value() / denom,
                   t[2].value() / denom, t[3].value() / denom});
  }
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  CheckInvariants(report);
  return report;
}

namespace {

template <typename Lookup>
MappedSessions MapSessions(const SessionDataset& test, Lookup&& lookup) {
  MappedSessions out;
  std::unordered_map<std::string, ItemIndex> unknown;
  out.sessions.reserve(test.num_sessions());
  for (const auto& s : test.sessions) {
    std::vector<ItemIndex> mapped;
    mapped.reserve(s.size());
    for (ItemIndex i : s) {
      const std::string& id = test.vocab.Id(i);
      ++out.events;
      if (auto found = lookup(id)) {
        mapped.push_back(*found);
      } else {
        ++out.oov_events;
        auto [it, inserted] = unknown.try_emplace(
            id, -static_cast<ItemIndex>(unknown.size()) - 1);
        mapped.push_back(it->second);
      }
    }
    out.sessions.push_back(std::move(mapped));
  }
  return out;
}

}  // namespace

MappedSessions MapSessionsToVocab(const SessionDataset& test,
                                  const ItemVocab& model_vocab) {
  return MapSessions(
      test, [&](const std::string& id) { return model_vocab.Find(id); });
}

MappedSessions MapSessionsToVocab(const SessionDataset& test,
                                  const std::vector<std::string>& model_vocab) {
  const ItemVocab vocab(model_vocab);
  return MapSessionsToVocab(test, vocab);
}

SessionDataset SubsampleTrain(const SessionDataset& train, double fraction) {
  if (!(fraction > 0 && fraction <= 1)) {
    throw ConfigError(
        fmt::format("fraction must be in (0, 1], got {}", fraction));
  }
  const std::size_t m = train.num_sessions();
  const std::size_t keep = std::min(m, KeepCount(fraction, m));
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return train.session_end_times[a] < train.session_end_times[b];
  });
  std::vector<std::size_t> rows(order.end() - static_cast<std::ptrdiff_t>(keep),
                                order.end());
  return CompactVocabulary(SelectSessions(train, rows));
}

LengthBuckets LengthBucketReport(
    const Scorer& scorer, std::span<const std::vector<ItemIndex>> sessions,
    const EvalOptions& options, std::size_t threshold) {
  std::vector<std::vector<ItemIndex>> short_sessions;
  std::vector<std::vector<ItemIndex>> long_sessions;
  for (const auto& s : sessions) {
    (s.size() <= threshold ? short_sessions : long_sessions).push_back(s);
  }
  EvalOptions bucket_options = options;
  bucket_options.per_event_dump = nullptr;
  return LengthBuckets{Evaluate(scorer, short_sessions, bucket_options),
                       Evaluate(scorer, long_sessions, bucket_options)};
}

}  // namespace swalk
