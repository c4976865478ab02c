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

#include "swalk/log.h"

#include <atomic>
#include <cstdio>
#include <mutex>

namespace swalk {
namespace {

std::atomic<bool> g_muted{false};
std::mutex g_mutex;

}  // namespace

void Warn(std::string_view message) {
  if (g_muted.load()) return;
  std::lock_guard<std::mutex> lock(g_mutex);
  std::fprintf(stderr, "[swalk] warning: %.*s\n",
               static_cast<int>(message.size()), message.data());
}

bool SetWarningsMuted(bool muted) { return g_muted.exchange(muted); }

}  // namespace swalk
