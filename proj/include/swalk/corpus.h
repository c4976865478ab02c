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

#ifndef SWALK_CORPUS_H_
#define SWALK_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "swalk/types.h"

namespace swalk {

// Raw event logs -------------------------------------------------------------

struct EventRecord {
  std::string session_id;
  std::string item_id;
  std::int64_t time = 0;  // seconds since epoch, fractional part truncated
};

struct EventLog {
  std::vector<EventRecord> records;
  std::size_t rejected_rows = 0;
  std::vector<std::string> warnings;
};

enum class TextFormat { kTsv, kCsv };

struct ColumnMap {
  std::string session = "SessionId";
  std::string item = "ItemId";
  std::string time = "Time";
};

// Parses delimiter-separated text with a header row. Rows with a wrong field
// count, an empty id, or a non-numeric time are counted in rejected_rows.
// Throws DataError when a required column is missing from the header.
EventLog ParseEvents(std::istream& in, TextFormat format,
                     const ColumnMap& columns = {});
// Throws IoError when the file cannot be read.
EventLog LoadEvents(const std::filesystem::path& path, TextFormat format,
                    const ColumnMap& columns = {});

// Writes the canonical tab-separated form (SessionId, ItemId, Time).
void WriteEvents(std::ostream& out, const EventLog& log);

// Session datasets -----------------------------------------------------------

// Sessions ordered by end time; ties keep first-appearance order.
struct SessionDataset {
  std::vector<std::vector<ItemIndex>> sessions;
  std::vector<std::string> session_ids;
  std::vector<std::int64_t> session_end_times;
  ItemVocab vocab;

  std::size_t num_sessions() const { return sessions.size(); }
  std::size_t num_items() const { return vocab.size(); }
  std::size_t num_events() const;
};

struct PreprocessOptions {
  std::size_t min_session_length = 2;
  std::size_t min_item_support = 5;
  // Repeat the item and session filters until nothing changes. Off by
  // default: one item pass followed by one session pass.
  bool iterate_to_fixpoint = false;
};

struct PreprocessReport {
  std::size_t input_records = 0;
  std::size_t rejected_rows = 0;
  std::size_t dropped_items = 0;
  std::size_t dropped_item_events = 0;
  std::size_t dropped_sessions = 0;
  std::size_t passes = 0;
  std::size_t sessions = 0;
  std::size_t items = 0;
  std::size_t events = 0;

  nlohmann::json ToJson() const;
};

// Sorts each session by time (stable), drops items with fewer than
// min_item_support occurrences, then drops sessions shorter than
// min_session_length. Throws DataError("empty dataset") if nothing survives.
SessionDataset Preprocess(const EventLog& log,
                          const PreprocessOptions& options = {},
                          PreprocessReport* report = nullptr);

// Keeps the given sessions (in the given order) and the full vocabulary.
SessionDataset SelectSessions(const SessionDataset& ds,
                              const std::vector<std::size_t>& rows);

// Rebuilds the vocabulary over items that actually occur, in first-appearance
// order, and reindexes the sessions.
SessionDataset CompactVocabulary(const SessionDataset& ds);

// Chronological splitting ----------------------------------------------------

struct SplitMode {
  enum class Kind { kLastNDays, kFiveFold };
  Kind kind = Kind::kLastNDays;
  int test_days = 1;

  static SplitMode LastNDays(int days) { return {Kind::kLastNDays, days}; }
  static SplitMode FiveFold(int days) { return {Kind::kFiveFold, days}; }
};

inline constexpr std::int64_t kSecondsPerDay = 86400;

// One train/test split. validation is the time-ordered tail of train with as
// many sessions as test; tuning_train is train without that tail. All four
// share the parent vocabulary.
struct DataSplit {
  SessionDataset train;
  SessionDataset test;
  SessionDataset validation;
  SessionDataset tuning_train;
};

// Sessions ending within the last test_days days of a fold (strictly after
// fold_end - test_days * 86400) form its test set. Five-fold mode first cuts
// the time span into five equal, contiguous windows. Throws DataError when
// test_days does not fit inside the (fold) time span.
std::vector<DataSplit> ChronologicalSplit(const SessionDataset& ds,
                                          SplitMode mode);

// Training matrices ----------------------------------------------------------

// X[s][i] = 1 iff item i occurs in session s.
SparseMatrix BuildBinaryMatrix(const SessionDataset& ds);

// exp(-gap / delta_pos). Throws ConfigError unless delta_pos > 0.
double PositionWeight(double gap, double delta_pos);

struct PartialSessionMatrices {
  SparseMatrix past;    // Y
  SparseMatrix future;  // Z
};

// One (past, future) row pair per split point t = 2..|s|. Past weights decay
// from position t-1, future weights from position t; an item repeated inside
// one part keeps its largest weight.
PartialSessionMatrices BuildPartialMatrices(const SessionDataset& ds,
                                            double delta_pos);

}  // namespace swalk

#endif  // SWALK_CORPUS_H_
