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

#include "swalk/corpus.h"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <string_view>
#include <unordered_map>

#include "swalk/error.h"
#include "swalk/log.h"

namespace swalk {

ItemVocab::ItemVocab(std::vector<std::string> ids) {
  for (auto& id : ids) {
    if (Find(id)) throw DataError(fmt::format("duplicate item id '{}'", id));
    Intern(id);
  }
}

ItemIndex ItemVocab::Intern(std::string_view id) {
  auto it = index_.find(std::string(id));
  if (it != index_.end()) return it->second;
  const auto index = static_cast<ItemIndex>(ids_.size());
  ids_.emplace_back(id);
  index_.emplace(ids_.back(), index);
  return index;
}

std::optional<ItemIndex> ItemVocab::Find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

std::vector<std::string_view> SplitFields(std::string_view line, char delim) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    s = s.substr(1, s.size() - 2);
  }
  return s;
}

// Integer or fractional seconds; the fractional part is truncated.
std::optional<std::int64_t> ParseTime(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::int64_t whole = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, whole);
  if (ec == std::errc() && ptr == end) return whole;
  double value = 0;
  auto [dptr, dec] = std::from_chars(text.data(), end, value);
  if (dec != std::errc() || dptr != end || !std::isfinite(value)) {
    return std::nullopt;
  }
  return static_cast<std::int64_t>(std::trunc(value));
}

}  // namespace

EventLog ParseEvents(std::istream& in, TextFormat format,
                     const ColumnMap& columns) {
  const char delim = format == TextFormat::kTsv ? '\t' : ',';
  EventLog log;
  std::string line;
  if (!std::getline(in, line)) {
    log.warnings.push_back("input is empty; no events loaded");
    Warn(log.warnings.back());
    return log;
  }
  const auto header = SplitFields(line, delim);
  auto column_index = [&](const std::string& name) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (Trim(header[i]) == name) return i;
    }
    throw DataError(fmt::format("missing column '{}' in header", name));
  };
  const std::size_t session_col = column_index(columns.session);
  const std::size_t item_col = column_index(columns.item);
  const std::size_t time_col = column_index(columns.time);
  const std::size_t needed = std::max({session_col, item_col, time_col}) + 1;

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto fields = SplitFields(line, delim);
    if (fields.size() < needed) {
      ++log.rejected_rows;
      continue;
    }
    const auto session = Trim(fields[session_col]);
    const auto item = Trim(fields[item_col]);
    const auto time = ParseTime(Trim(fields[time_col]));
    if (session.empty() || item.empty() || !time) {
      ++log.rejected_rows;
      continue;
    }
    log.records.push_back(
        EventRecord{std::string(session), std::string(item), *time});
  }
  if (log.records.empty()) {
    log.warnings.push_back("no events loaded");
    Warn(log.warnings.back());
  }
  if (log.rejected_rows > 0) {
    log.warnings.push_back(
        fmt::format("rejected {} malformed rows", log.rejected_rows));
    Warn(log.warnings.back());
  }
  return log;
}

EventLog LoadEvents(const std::filesystem::path& path, TextFormat format,
                    const ColumnMap& columns) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot read '{}'", path.string()));
  return ParseEvents(in, format, columns);
}

void WriteEvents(std::ostream& out, const EventLog& log) {
  out << "SessionId\tItemId\tTime\n";
  for (const auto& r : log.records) {
    out << r.session_id << '\t' << r.item_id << '\t' << r.time << '\n';
  }
}

std::size_t SessionDataset::num_events() const {
  std::size_t total = 0;
  for (const auto& s : sessions) total += s.size();
  return total;
}

nlohmann::json PreprocessReport::ToJson() const {
  return {{"input_records", input_records},
          {"rejected_rows", rejected_rows},
          {"dropped_items", dropped_items},
          {"dropped_item_events", dropped_item_events},
          {"dropped_sessions", dropped_sessions},
          {"passes", passes},
          {"sessions", sessions},
          {"items", items},
          {"events", events}};
}

namespace {

struct RawSession {
  std::string id;
  std::vector<std::pair<std::int64_t, std::uint32_t>> events;  // time, item
};

}  // namespace

SessionDataset Preprocess(const EventLog& log, const PreprocessOptions& options,
                          PreprocessReport* report) {
  PreprocessReport local;
  local.input_records = log.records.size();
  local.rejected_rows = log.rejected_rows;

  // Group by session in first-appearance order; intern raw item ids.
  std::vector<RawSession> raw;
  std::unordered_map<std::string, std::size_t> session_index;
  ItemVocab raw_items;
  for (const auto& r : log.records) {
    auto [it, inserted] = session_index.try_emplace(r.session_id, raw.size());
    if (inserted) raw.push_back(RawSession{r.session_id, {}});
    raw[it->second].events.emplace_back(
        r.time, static_cast<std::uint32_t>(raw_items.Intern(r.item_id)));
  }
  for (auto& s : raw) {
    std::stable_sort(
        s.events.begin(), s.events.end(),
        [](const auto& a, const auto& b) { return a.first < b.first; });
  }

  std::vector<bool> item_alive(raw_items.size(), true);
  std::vector<bool> session_alive(raw.size(), true);
  bool changed = true;
  while (changed) {
    changed = false;
    ++local.passes;
    std::vector<std::size_t> support(raw_items.size(), 0);
    for (std::size_t s = 0; s < raw.size(); ++s) {
      if (!session_alive[s]) continue;
      for (const auto& [t, item] : raw[s].events) {
        if (item_alive[item]) ++support[item];
      }
    }
    for (std::size_t i = 0; i < support.size(); ++i) {
      if (item_alive[i] && support[i] < options.min_item_support) {
        item_alive[i] = false;
        ++local.dropped_items;
        local.dropped_item_events += support[i];
        changed = true;
      }
    }
    for (std::size_t s = 0; s < raw.size(); ++s) {
      if (!session_alive[s]) continue;
      std::size_t length = 0;
      for (const auto& [t, item] : raw[s].events) length += item_alive[item];
      if (length < options.min_session_length) {
        session_alive[s] = false;
        ++local.dropped_sessions;
        changed = true;
      }
    }
    if (!options.iterate_to_fixpoint) break;
  }

  struct Kept {
    std::size_t raw_index;
    std::int64_t end_time;
  };
  std::vector<Kept> kept;
  for (std::size_t s = 0; s < raw.size(); ++s) {
    if (!session_alive[s]) continue;
    std::int64_t end = raw[s].events.front().first;
    for (const auto& [t, item] : raw[s].events) {
      if (item_alive[item]) end = std::max(end, t);
    }
    kept.push_back({s, end});
  }
  if (kept.empty()) throw DataError("empty dataset");
  std::stable_sort(kept.begin(), kept.end(), [](const Kept& a, const Kept& b) {
    return a.end_time < b.end_time;
  });

  SessionDataset ds;
  ds.sessions.reserve(kept.size());
  for (const auto& k : kept) {
    std::vector<ItemIndex> items;
    for (const auto& [t, item] : raw[k.raw_index].events) {
      if (item_alive[item])
        items.push_back(
            ds.vocab.Intern(raw_items.Id(static_cast<ItemIndex>(item))));
    }
    ds.sessions.push_back(std::move(items));
    ds.session_ids.push_back(raw[k.raw_index].id);
    ds.session_end_times.push_back(k.end_time);
  }
  local.sessions = ds.num_sessions();
  local.items = ds.num_items();
  local.events = ds.num_events();
  if (report) *report = local;
  return ds;
}

SessionDataset SelectSessions(const SessionDataset& ds,
                              const std::vector<std::size_t>& rows) {
  SessionDataset out;
  out.vocab = ds.vocab;
  out.sessions.reserve(rows.size());
  for (std::size_t r : rows) {
    out.sessions.push_back(ds.sessions.at(r));
    out.session_ids.push_back(ds.session_ids.at(r));
    out.session_end_times.push_back(ds.session_end_times.at(r));
  }
  return out;
}

SessionDataset CompactVocabulary(const SessionDataset& ds) {
  SessionDataset out;
  out.session_ids = ds.session_ids;
  out.session_end_times = ds.session_end_times;
  out.sessions.reserve(ds.sessions.size());
  for (const auto& s : ds.sessions) {
    std::vector<ItemIndex> items;
    items.reserve(s.size());
    for (ItemIndex i : s) items.push_back(out.vocab.Intern(ds.vocab.Id(i)));
    out.sessions.push_back(std::move(items));
  }
  return out;
}

namespace {

DataSplit SplitLastDays(const SessionDataset& ds,
                        const std::vector<std::size_t>& rows, int test_days) {
  if (rows.empty()) throw DataError("cannot split an empty fold");
  std::int64_t first = ds.session_end_times[rows.front()];
  std::int64_t last = first;
  for (std::size_t r : rows) {
    first = std::min(first, ds.session_end_times[r]);
    last = std::max(last, ds.session_end_times[r]);
  }
  const std::int64_t window = std::int64_t{test_days} * kSecondsPerDay;
  if (test_days < 1 || window > last - first) {
    throw DataError(fmt::format(
        "test window of {} days does not fit in a time span of {:.2f} days",
        test_days, static_cast<double>(last - first) / kSecondsPerDay));
  }
  const std::int64_t threshold = last - window;
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  for (std::size_t r : rows) {
    (ds.session_end_times[r] > threshold ? test : train).push_back(r);
  }
  if (train.empty() || test.empty()) {
    throw DataError("chronological split produced an empty side");
  }
  const std::size_t valid_size = std::min(test.size(), train.size() - 1);
  std::vector<std::size_t> tuning(train.begin(), train.end() - valid_size);
  std::vector<std::size_t> valid(train.end() - valid_size, train.end());
  return DataSplit{SelectSessions(ds, train), SelectSessions(ds, test),
                   SelectSessions(ds, valid), SelectSessions(ds, tuning)};
}

}  // namespace

std::vector<DataSplit> ChronologicalSplit(const SessionDataset& ds,
                                          SplitMode mode) {
  if (ds.session_end_times.size() != ds.sessions.size()) {
    throw DataError("session end times are missing");
  }
  // Rows in end-time order (stable).
  std::vector<std::size_t> order(ds.num_sessions());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return ds.session_end_times[a] < ds.session_end_times[b];
  });
  if (mode.kind == SplitMode::Kind::kLastNDays) {
    return {SplitLastDays(ds, order, mode.test_days)};
  }
  if (order.empty()) throw DataError("empty dataset");
  const std::int64_t first = ds.session_end_times[order.front()];
  const std::int64_t span = ds.session_end_times[order.back()] - first;
  constexpr int kFolds = 5;
  std::vector<std::vector<std::size_t>> folds(kFolds);
  for (std::size_t r : order) {
    const std::int64_t offset = ds.session_end_times[r] - first;
    int fold = span == 0 ? 0 : static_cast<int>((offset * kFolds) / span);
    folds[std::min(fold, kFolds - 1)].push_back(r);
  }
  std::vector<DataSplit> splits;
  for (const auto& rows : folds) {
    splits.push_back(SplitLastDays(ds, rows, mode.test_days));
  }
  return splits;
}

SparseMatrix BuildBinaryMatrix(const SessionDataset& ds) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(ds.num_events());
  std::vector<ItemIndex> row;
  for (std::size_t s = 0; s < ds.sessions.size(); ++s) {
    row = ds.sessions[s];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    for (ItemIndex i : row) {
      triplets.emplace_back(static_cast<int>(s), i, 1.0);
    }
  }
  SparseMatrix x(static_cast<Eigen::Index>(ds.num_sessions()),
                 static_cast<Eigen::Index>(ds.num_items()));
  x.setFromTriplets(triplets.begin(), triplets.end());
  return x;
}

double PositionWeight(double gap, double delta_pos) {
  if (!(delta_pos > 0)) {
    throw ConfigError(fmt::format("delta_pos must be > 0, got {}", delta_pos));
  }
  return std::exp(-gap / delta_pos);
}

PartialSessionMatrices BuildPartialMatrices(const SessionDataset& ds,
                                            double delta_pos) {
  PositionWeight(0.0, delta_pos);  // validates delta_pos
  std::size_t rows = 0;
  std::size_t past_nnz = 0;
  for (const auto& s : ds.sessions) {
    const std::size_t len = s.size();
    if (len >= 2) {
      rows += len - 1;
      past_nnz += len * (len - 1) / 2;
    }
  }
  std::vector<Eigen::Triplet<double>> past;
  std::vector<Eigen::Triplet<double>> future;
  past.reserve(past_nnz);
  future.reserve(past_nnz);

  // Weight by distance from the boundary, so weights only depend on the gap.
  std::vector<double> decay;
  std::vector<ItemIndex> seen;
  auto add_unique = [&](std::vector<Eigen::Triplet<double>>& out, int row,
                        ItemIndex item, double weight) {
    // First occurrence walking away from the boundary has the largest weight.
    if (std::find(seen.begin(), seen.end(), item) != seen.end()) return;
    seen.push_back(item);
    out.emplace_back(row, item, weight);
  };

  int row = 0;
  for (const auto& s : ds.sessions) {
    const std::size_t len = s.size();
    if (decay.size() < len) {
      decay.resize(len);
      for (std::size_t g = 0; g < len; ++g) {
        decay[g] = PositionWeight(static_cast<double>(g), delta_pos);
      }
    }
    // t is the 1-based position of the first future item.
    for (std::size_t t = 2; t <= len; ++t, ++row) {
      seen.clear();
      for (std::size_t p = t - 1; p >= 1; --p) {
        add_unique(past, row, s[p - 1], decay[(t - 1) - p]);
      }
      seen.clear();
      for (std::size_t p = t; p <= len; ++p) {
        add_unique(future, row, s[p - 1], decay[p - t]);
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(ds.num_items());
  PartialSessionMatrices out{SparseMatrix(static_cast<Eigen::Index>(rows), n),
                             SparseMatrix(static_cast<Eigen::Index>(rows), n)};
  out.past.setFromTriplets(past.begin(), past.end());
  out.future.setFromTriplets(future.begin(), future.end());
  return out;
}

}  // namespace swalk
