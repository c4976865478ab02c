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

#ifndef SWALK_RECOMMENDER_H_
#define SWALK_RECOMMENDER_H_

#include <cstddef>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "swalk/model_store.h"
#include "swalk/types.h"

namespace swalk {

struct SparseVector {
  std::vector<ItemIndex> indices;  // ascending
  std::vector<double> values;

  std::size_t size() const { return indices.size(); }
};

struct RankedList {
  std::vector<ItemIndex> items;
  std::vector<double> scores;
};

// Inference weights exp(-(|s| - p) / delta_inf) where p is the 1-based
// position of the item's latest occurrence. Indices outside [0, n) are
// skipped and counted in *skipped; they still occupy a position.
SparseVector SessionVector(std::span<const ItemIndex> prefix, double delta_inf,
                           std::size_t n, std::size_t* skipped = nullptr);

// x M as a dense score vector. Consumed items are not excluded.
template <typename Scalar>
std::vector<double> Score(const SparseVector& x, const DenseMatrix<Scalar>& m);
std::vector<double> Score(const SparseVector& x, const CsrMatrix& m);

// The n highest nonzero scores, descending; ties go to the lower index.
RankedList TopN(std::span<const double> scores, std::size_t n);

// Scores session prefixes against a dense or pruned item-item matrix. Holds a
// reference to the matrix; safe to share across threads.
class Recommender {
 public:
  Recommender(const CsrMatrix& m, double delta_inf);
  Recommender(const DenseMatrix<float>& m, double delta_inf);
  Recommender(const DenseMatrix<double>& m, double delta_inf);
  Recommender(CsrMatrix&&, double) = delete;
  Recommender(DenseMatrix<float>&&, double) = delete;
  Recommender(DenseMatrix<double>&&, double) = delete;

  std::size_t num_items() const { return n_; }
  double delta_inf() const { return delta_inf_; }

  RankedList Recommend(std::span<const ItemIndex> prefix, std::size_t n,
                       std::size_t* skipped = nullptr) const;

 private:
  std::variant<const CsrMatrix*, const DenseMatrix<float>*,
               const DenseMatrix<double>*>
      model_;
  std::size_t n_;
  double delta_inf_;
};

}  // namespace swalk

#endif  // SWALK_RECOMMENDER_H_
