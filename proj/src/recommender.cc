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

#include "swalk/recommender.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "swalk/error.h"

namespace swalk {

SparseVector SessionVector(std::span<const ItemIndex> prefix, double delta_inf,
                           std::size_t n, std::size_t* skipped) {
  if (prefix.empty()) throw DataError("session prefix is empty");
  if (!(delta_inf > 0)) {
    throw ConfigError(fmt::format("delta_inf must be > 0, got {}", delta_inf));
  }
  const std::size_t len = prefix.size();
  // Latest 1-based position per in-vocabulary item.
  std::vector<std::pair<ItemIndex, std::size_t>> latest;
  std::size_t oov = 0;
  for (std::size_t p = 1; p <= len; ++p) {
    const ItemIndex item = prefix[p - 1];
    if (item < 0 || static_cast<std::size_t>(item) >= n) {
      ++oov;
      continue;
    }
    latest.emplace_back(item, p);
  }
  std::stable_sort(
      latest.begin(), latest.end(),
      [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVector x;
  for (std::size_t k = 0; k < latest.size(); ++k) {
    // Within a run of equal items the last entry has the latest position.
    if (k + 1 < latest.size() && latest[k + 1].first == latest[k].first) {
      continue;
    }
    const double gap = static_cast<double>(len - latest[k].second);
    x.indices.push_back(latest[k].first);
    x.values.push_back(std::exp(-gap / delta_inf));
  }
  if (skipped) *skipped += oov;
  return x;
}

template <typename Scalar>
std::vector<double> Score(const SparseVector& x, const DenseMatrix<Scalar>& m) {
  std::vector<double> scores(static_cast<std::size_t>(m.cols()), 0.0);
  for (std::size_t k = 0; k < x.size(); ++k) {
    const Scalar* row = m.row(x.indices[k]).data();
    const double w = x.values[k];
    for (std::size_t j = 0; j < scores.size(); ++j) {
      scores[j] += w * static_cast<double>(row[j]);
    }
  }
  return scores;
}

template std::vector<double> Score(const SparseVector&,
                                   const DenseMatrix<float>&);
template std::vector<double> Score(const SparseVector&,
                                   const DenseMatrix<double>&);

std::vector<double> Score(const SparseVector& x, const CsrMatrix& m) {
  std::vector<double> scores(m.n, 0.0);
  for (std::size_t k = 0; k < x.size(); ++k) {
    const auto cols = m.RowCols(static_cast<std::size_t>(x.indices[k]));
    const auto vals = m.RowValues(static_cast<std::size_t>(x.indices[k]));
    const double w = x.values[k];
    for (std::size_t e = 0; e < cols.size(); ++e) {
      scores[cols[e]] += w * static_cast<double>(vals[e]);
    }
  }
  return scores;
}

RankedList TopN(std::span<const double> scores, std::size_t n) {
  if (n == 0) throw ConfigError("N must be >= 1");
  std::vector<ItemIndex> candidates;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] != 0.0) candidates.push_back(static_cast<ItemIndex>(i));
  }
  auto better = [&](ItemIndex a, ItemIndex b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  };
  const std::size_t keep = std::min(n, candidates.size());
  std::partial_sort(candidates.begin(),
                    candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                    candidates.end(), better);
  candidates.resize(keep);
  RankedList out;
  out.scores.reserve(keep);
  for (ItemIndex i : candidates) out.scores.push_back(scores[i]);
  out.items = std::move(candidates);
  return out;
}

Recommender::Recommender(const CsrMatrix& m, double delta_inf)
    : model_(&m), n_(m.n), delta_inf_(delta_inf) {}

Recommender::Recommender(const DenseMatrix<float>& m, double delta_inf)
    : model_(&m),
      n_(static_cast<std::size_t>(m.rows())),
      delta_inf_(delta_inf) {}

Recommender::Recommender(const DenseMatrix<double>& m, double delta_inf)
    : model_(&m),
      n_(static_cast<std::size_t>(m.rows())),
      delta_inf_(delta_inf) {}

RankedList Recommender::Recommend(std::span<const ItemIndex> prefix,
                                  std::size_t n, std::size_t* skipped) const {
  const SparseVector x = SessionVector(prefix, delta_inf_, n_, skipped);
  if (x.size() == 0) return {};
  const auto scores =
      std::visit([&](const auto* m) { return Score(x, *m); }, model_);
  return TopN(scores, n);
}

}  // namespace swalk
