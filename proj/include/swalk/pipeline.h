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

#ifndef SWALK_PIPELINE_H_
#define SWALK_PIPELINE_H_

#include <string>
#include <string_view>

#include "json.hpp"
#include "swalk/corpus.h"
#include "swalk/hyper_params.h"
#include "swalk/model_store.h"
#include "swalk/types.h"
#include "swalk/walk.h"

namespace swalk {

enum class Composition { kRwr, kKStep, kFirstStep };
enum class TransitionSource { kOurs, kSr, kIdentity };
enum class TeleportationSource { kOurs, kAr, kIdentity };
enum class Precision { kFloat32, kFloat64 };

std::string_view ToString(Composition c);
std::string_view ToString(TransitionSource s);
std::string_view ToString(TeleportationSource s);
std::string_view ToString(Precision p);
// Throw ConfigError on unknown names.
Composition ParseComposition(std::string_view name);
TransitionSource ParseTransitionSource(std::string_view name);
TeleportationSource ParseTeleportationSource(std::string_view name);
Precision ParsePrecision(std::string_view name);

struct TrainOptions {
  HyperParams hyper;
  Composition composition = Composition::kRwr;
  int kstep = 1;
  TransitionSource transition = TransitionSource::kOurs;
  TeleportationSource teleportation = TeleportationSource::kOurs;
  int sr_window = 10;
  Precision precision = Precision::kFloat64;

  void Validate() const;
  nlohmann::json ToJson() const;
  void MergeJson(const nlohmann::json& j);
};

// Row-stochastic item transition matrix from the configured source.
DenseMatrix<double> BuildTransitionMatrix(const SessionDataset& train,
                                          const TrainOptions& options);
// Row-stochastic item teleportation matrix, self-loop mix included.
DenseMatrix<double> BuildTeleportationMatrix(const SessionDataset& train,
                                             const TrainOptions& options);

template <typename Scalar>
struct TrainedModel {
  DenseMatrix<Scalar> m;
  WalkTrace trace;
  double transition_seconds = 0;
  double teleportation_seconds = 0;
  double compose_seconds = 0;

  double total_seconds() const {
    return transition_seconds + teleportation_seconds + compose_seconds;
  }
};

// Composes prebuilt R and T according to options.composition. T is ignored
// for k-step composition.
template <typename Scalar>
TrainedModel<Scalar> ComposeModel(const DenseMatrix<double>& r,
                                  const DenseMatrix<double>& t,
                                  const TrainOptions& options);

template <typename Scalar>
TrainedModel<Scalar> TrainModel(const SessionDataset& train,
                                const TrainOptions& options);

// Prunes to options.hyper.keep_ratio and fills the meta block.
template <typename Scalar>
ModelArtifact MakeArtifact(const TrainedModel<Scalar>& model,
                           const ItemVocab& vocab, const TrainOptions& options);

}  // namespace swalk

#endif  // SWALK_PIPELINE_H_
