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

#include "swalk/pipeline.h"

#include <fmt/format.h>

#include <chrono>
#include <cmath>

#include "swalk/error.h"
#include "swalk/linear_models.h"

namespace swalk {

namespace {

template <typename Enum, std::size_t N>
Enum ParseName(std::string_view name, const char* what,
               const std::pair<std::string_view, Enum> (&table)[N]) {
  for (const auto& [key, value] : table) {
    if (key == name) return value;
  }
  std::string allowed;
  for (const auto& entry : table) {
    if (!allowed.empty()) allowed += ", ";
    allowed += entry.first;
  }
  throw ConfigError(fmt::format("unknown {} '{}' (expected one of: {})", what,
                                name, allowed));
}

template <typename Enum, std::size_t N>
std::string_view NameOf(Enum value,
                        const std::pair<std::string_view, Enum> (&table)[N]) {
  for (const auto& [key, v] : table) {
    if (v == value) return key;
  }
  return "?";
}

constexpr std::pair<std::string_view, Composition> kCompositions[] = {
    {"rwr", Composition::kRwr},
    {"kstep", Composition::kKStep},
    {"first_step", Composition::kFirstStep}};
constexpr std::pair<std::string_view, TransitionSource> kTransitions[] = {
    {"ours", TransitionSource::kOurs},
    {"sr", TransitionSource::kSr},
    {"identity", TransitionSource::kIdentity}};
constexpr std::pair<std::string_view, TeleportationSource> kTeleports[] = {
    {"ours", TeleportationSource::kOurs},
    {"ar", TeleportationSource::kAr},
    {"identity", TeleportationSource::kIdentity}};
constexpr std::pair<std::string_view, Precision> kPrecisions[] = {
    {"f32", Precision::kFloat32}, {"f64", Precision::kFloat64}};

double SecondsSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

std::string_view ToString(Composition c) { return NameOf(c, kCompositions); }
std::string_view ToString(TransitionSource s) {
  return NameOf(s, kTransitions);
}
std::string_view ToString(TeleportationSource s) {
  return NameOf(s, kTeleports);
}
std::string_view ToString(Precision p) { return NameOf(p, kPrecisions); }

Composition ParseComposition(std::string_view name) {
  return ParseName(name, "composition", kCompositions);
}
TransitionSource ParseTransitionSource(std::string_view name) {
  return ParseName(name, "transition source", kTransitions);
}
TeleportationSource ParseTeleportationSource(std::string_view name) {
  return ParseName(name, "teleportation source", kTeleports);
}
Precision ParsePrecision(std::string_view name) {
  return ParseName(name, "precision", kPrecisions);
}

void TrainOptions::Validate() const {
  hyper.Validate();
  if (composition == Composition::kKStep && kstep < 1) {
    throw ConfigError(fmt::format("kstep must be >= 1, got {}", kstep));
  }
  if (sr_window < 1) {
    throw ConfigError(fmt::format("sr_window must be >= 1, got {}", sr_window));
  }
}

nlohmann::json TrainOptions::ToJson() const {
  return {{"hyperparameters", hyper.ToJson()},
          {"composition", ToString(composition)},
          {"kstep", kstep},
          {"transition", ToString(transition)},
          {"teleportation", ToString(teleportation)},
          {"sr_window", sr_window},
          {"precision", ToString(precision)}};
}

void TrainOptions::MergeJson(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("train options must be a JSON object");
  try {
    if (j.contains("hyperparameters")) hyper.MergeJson(j["hyperparameters"]);
    if (j.contains("composition")) {
      composition = ParseComposition(j["composition"].get<std::string>());
    }
    if (j.contains("kstep")) kstep = j["kstep"].get<int>();
    if (j.contains("transition")) {
      transition = ParseTransitionSource(j["transition"].get<std::string>());
    }
    if (j.contains("teleportation")) {
      teleportation =
          ParseTeleportationSource(j["teleportation"].get<std::string>());
    }
    if (j.contains("sr_window")) sr_window = j["sr_window"].get<int>();
    if (j.contains("precision")) {
      precision = ParsePrecision(j["precision"].get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("bad train options: {}", e.what()));
  }
}

DenseMatrix<double> BuildTransitionMatrix(const SessionDataset& train,
                                          const TrainOptions& options) {
  const auto n = static_cast<Eigen::Index>(train.num_items());
  switch (options.transition) {
    case TransitionSource::kIdentity:
      return DenseMatrix<double>::Identity(n, n);
    case TransitionSource::kSr:
      return RowNormalize(BaselineSr(train, options.sr_window));
    case TransitionSource::kOurs: {
      const auto partial = BuildPartialMatrices(train, options.hyper.delta_pos);
      return RowNormalize(ClampNonnegative(
          SolveTransition(partial.past, partial.future, options.hyper.lambda)));
    }
  }
  throw ConfigError("unhandled transition source");
}

DenseMatrix<double> BuildTeleportationMatrix(const SessionDataset& train,
                                             const TrainOptions& options) {
  const auto n = static_cast<Eigen::Index>(train.num_items());
  switch (options.teleportation) {
    case TeleportationSource::kIdentity:
      return DenseMatrix<double>::Identity(n, n);
    case TeleportationSource::kAr:
      return MixSelfLoop(RowNormalize(BaselineAr(BuildBinaryMatrix(train))),
                         options.hyper.beta);
    case TeleportationSource::kOurs: {
      const auto x = BuildBinaryMatrix(train);
      return MixSelfLoop(RowNormalize(ClampNonnegative(SolveTeleportation(
                             x, options.hyper.lambda, options.hyper.xi))),
                         options.hyper.beta);
    }
  }
  throw ConfigError("unhandled teleportation source");
}

template <typename Scalar>
TrainedModel<Scalar> ComposeModel(const DenseMatrix<double>& r,
                                  const DenseMatrix<double>& t,
                                  const TrainOptions& options) {
  options.Validate();
  TrainedModel<Scalar> out;
  const auto start = std::chrono::steady_clock::now();
  const HyperParams& h = options.hyper;
  const double epsilon = h.ResolvedEpsilon(static_cast<std::size_t>(r.rows()));
  switch (options.composition) {
    case Composition::kKStep:
      out.m = ComposeKStep<Scalar>(r.template cast<Scalar>(), options.kstep);
      out.trace.steps_taken = options.kstep;
      break;
    case Composition::kFirstStep:
    case Composition::kRwr: {
      const int steps =
          options.composition == Composition::kFirstStep ? 1 : h.max_steps;
      auto walk = ComposeRwr<Scalar>(r.template cast<Scalar>(),
                                     t.template cast<Scalar>(), h.alpha,
                                     epsilon, steps);
      out.m = std::move(walk.m);
      out.trace = std::move(walk.trace);
      break;
    }
  }
  if (!out.m.allFinite()) {
    throw NumericError("composed model contains non-finite values");
  }
  out.compose_seconds = SecondsSince(start);
  return out;
}

template <typename Scalar>
TrainedModel<Scalar> TrainModel(const SessionDataset& train,
                                const TrainOptions& options) {
  options.Validate();
  if (train.num_items() == 0) throw DataError("training set has no items");
  auto start = std::chrono::steady_clock::now();
  const DenseMatrix<double> r = BuildTransitionMatrix(train, options);
  const double transition_seconds = SecondsSince(start);
  DenseMatrix<double> t;
  start = std::chrono::steady_clock::now();
  if (options.composition != Composition::kKStep) {
    t = BuildTeleportationMatrix(train, options);
  }
  const double teleportation_seconds = SecondsSince(start);
  auto out = ComposeModel<Scalar>(r, t, options);
  out.transition_seconds = transition_seconds;
  out.teleportation_seconds = teleportation_seconds;
  return out;
}

template <typename Scalar>
ModelArtifact MakeArtifact(const TrainedModel<Scalar>& model,
                           const ItemVocab& vocab,
                           const TrainOptions& options) {
  if (static_cast<std::size_t>(model.m.rows()) != vocab.size()) {
    throw DataError(fmt::format("model has {} items but vocabulary has {}",
                                model.m.rows(), vocab.size()));
  }
  ModelArtifact artifact;
  artifact.matrix = PruneMagnitude(model.m, options.hyper.keep_ratio);
  artifact.vocab = vocab.ids();
  ModelMeta& meta = artifact.meta;
  meta.hyper = options.hyper;
  meta.composition = std::string(ToString(options.composition));
  meta.kstep = options.composition == Composition::kKStep ? options.kstep : 0;
  meta.transition = std::string(ToString(options.transition));
  meta.teleportation = std::string(ToString(options.teleportation));
  meta.created_at = UtcTimestamp();
  meta.extra["train_options"] = options.ToJson();
  meta.extra["trace"] = model.trace.ToJson();
  meta.extra["timing_s"] = {{"transition", model.transition_seconds},
                            {"teleportation", model.teleportation_seconds},
                            {"compose", model.compose_seconds}};
  return artifact;
}

#define SWALK_INSTANTIATE(S)                                           \
  template TrainedModel<S> ComposeModel<S>(const DenseMatrix<double>&, \
                                           const DenseMatrix<double>&, \
                                           const TrainOptions&);       \
  template TrainedModel<S> TrainModel<S>(const SessionDataset&,        \
                                         const TrainOptions&);         \
  template ModelArtifact MakeArtifact<S>(                              \
      const TrainedModel<S>&, const ItemVocab&, const TrainOptions&);
SWALK_INSTANTIATE(float)
SWALK_INSTANTIATE(double)
#undef SWALK_INSTANTIATE

}  // namespace swalk
