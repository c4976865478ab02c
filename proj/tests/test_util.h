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

// Small fixtures shared by the unit tests.

#ifndef SWALK_TESTS_TEST_UTIL_H_
#define SWALK_TESTS_TEST_UTIL_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "swalk/corpus.h"
#include "swalk/error.h"
#include "swalk/log.h"
#include "swalk/types.h"

namespace swalk::testing {

// Sessions of item names; session i ends at time i.
inline SessionDataset MakeDataset(
    const std::vector<std::vector<std::string>>& sessions) {
  SessionDataset ds;
  for (std::size_t i = 0; i < sessions.size(); ++i) {
    std::vector<ItemIndex> items;
    for (const auto& id : sessions[i]) items.push_back(ds.vocab.Intern(id));
    ds.sessions.push_back(std::move(items));
    ds.session_ids.push_back("s" + std::to_string(i));
    ds.session_end_times.push_back(static_cast<std::int64_t>(i));
  }
  return ds;
}

// Random sessions over n items with lengths in [2, max_len].
inline SessionDataset RandomDataset(std::size_t n, std::size_t m,
                                    std::size_t max_len, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> item(0, n - 1);
  std::uniform_int_distribution<std::size_t> len(2, max_len);
  std::vector<std::vector<std::string>> sessions(m);
  for (auto& s : sessions) {
    const std::size_t l = len(rng);
    for (std::size_t j = 0; j < l; ++j) s.push_back(std::to_string(item(rng)));
  }
  // Every item appears at least once so the vocabulary has exactly n ids.
  for (std::size_t i = 0; i < n; ++i) {
    sessions[i % m].push_back(std::to_string(i));
  }
  return MakeDataset(sessions);
}

// Kind of the swalk::Error thrown by f; nullopt when nothing is thrown.
template <typename F>
std::optional<ErrorKind> ThrownKind(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

// Unique scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("swalk_test_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Mutes library warnings for the lifetime of the object.
class QuietScope {
 public:
  QuietScope() : previous_(SetWarningsMuted(true)) {}
  ~QuietScope() { SetWarningsMuted(previous_); }

 private:
  bool previous_;
};

}  // namespace swalk::testing

#endif  // SWALK_TESTS_TEST_UTIL_H_
