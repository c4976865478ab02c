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

#ifndef SWALK_MODEL_STORE_H_
#define SWALK_MODEL_STORE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "swalk/hyper_params.h"
#include "swalk/types.h"

namespace swalk {

// Compressed sparse rows of an n x n item-item matrix, f32 values, columns
// strictly increasing within each row.
struct CsrMatrix {
  std::size_t n = 0;
  std::vector<std::uint64_t> row_ptr{0};
  std::vector<std::uint32_t> cols;
  std::vector<float> values;

  std::size_t nnz() const { return values.size(); }
  std::span<const std::uint32_t> RowCols(std::size_t row) const {
    return {cols.data() + row_ptr[row], cols.data() + row_ptr[row + 1]};
  }
  std::span<const float> RowValues(std::size_t row) const {
    return {values.data() + row_ptr[row], values.data() + row_ptr[row + 1]};
  }
  DenseMatrix<float> ToDense() const;
};

inline constexpr std::uint32_t kModelFormatVersion = 1;

struct ModelMeta {
  std::uint32_t format_version = kModelFormatVersion;
  HyperParams hyper;
  std::string composition = "rwr";     // rwr | kstep | first_step
  int kstep = 0;                       // k for composition == "kstep"
  std::string transition = "ours";     // ours | sr | identity
  std::string teleportation = "ours";  // ours | ar | identity
  std::string created_at;              // ISO-8601 UTC
  nlohmann::json extra = nlohmann::json::object();  // config, trace, ...
};

struct ModelArtifact {
  CsrMatrix matrix;
  std::vector<std::string> vocab;  // external id per item index
  ModelMeta meta;
};

// Number of entries kept out of `total` at keep_ratio: ceil(ratio * total),
// with products within 1e-9 of an integer snapped to it.
std::size_t KeepCount(double keep_ratio, std::size_t total);

// Global magnitude pruning: keeps the KeepCount(keep_ratio, n*n) entries of
// largest |value| (zeros are never kept). Ties at the threshold keep the
// entries that come first in (row, col) order.
template <typename Scalar>
CsrMatrix PruneMagnitude(const DenseMatrix<Scalar>& m, double keep_ratio);
CsrMatrix PruneMagnitude(const CsrMatrix& m, double keep_ratio);

// Writes <prefix>.meta.json and <prefix>.coo.bin.
void SaveModel(const ModelArtifact& artifact,
               const std::filesystem::path& prefix);
ModelArtifact LoadModel(const std::filesystem::path& prefix);

std::filesystem::path MetaPath(const std::filesystem::path& prefix);
std::filesystem::path MatrixPath(const std::filesystem::path& prefix);

// Binary body alone, for tests and tooling.
std::vector<std::uint8_t> EncodeMatrix(const CsrMatrix& m);
CsrMatrix DecodeMatrix(std::span<const std::uint8_t> bytes);

std::string UtcTimestamp();

}  // namespace swalk

#endif  // SWALK_MODEL_STORE_H_
