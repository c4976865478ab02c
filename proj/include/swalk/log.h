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

#ifndef SWALK_LOG_H_
#define SWALK_LOG_H_

#include <string_view>

namespace swalk {

// Writes a warning line to stderr unless warnings are muted.
void Warn(std::string_view message);

// Returns the previous setting. Tests mute warnings for noisy fixtures.
bool SetWarningsMuted(bool muted);

}  // namespace swalk

#endif  // SWALK_LOG_H_
