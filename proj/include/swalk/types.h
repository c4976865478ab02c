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

#ifndef SWALK_TYPES_H_
#define SWALK_TYPES_H_

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace swalk {

// Dense item index in [0, n). Negative values mark items unknown to a model.
using ItemIndex = std::int32_t;

// n x n item-item matrix. Row-major so that per-item rows are contiguous.
template <typename Scalar>
using DenseMatrix =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Rows are sessions or partial sessions, columns are items.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Bijection between external item ids and contiguous indices.
class ItemVocab {
 public:
  ItemVocab() = default;
  explicit ItemVocab(std::vector<std::string> ids);

  // Returns the existing index or appends a new one.
  ItemIndex Intern(std::string_view id);
  std::optional<ItemIndex> Find(std::string_view id) const;
  const std::string& Id(ItemIndex index) const { return ids_[index]; }
  const std::vector<std::string>& ids() const { return ids_; }
  std::size_t size() const { return ids_.size(); }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, ItemIndex> index_;
};

}  // namespace swalk

#endif  // SWALK_TYPES_H_
