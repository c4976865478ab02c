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

// Command-line driver: prepare, train, prune, eval, recommend, sweep, synth.

#include <fmt/format.h>

#include <Eigen/Core>
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"
#include "swalk/corpus.h"
#include "swalk/error.h"
#include "swalk/eval.h"
#include "swalk/hyper_params.h"
#include "swalk/linear_models.h"
#include "swalk/log.h"
#include "swalk/model_store.h"
#include "swalk/pipeline.h"
#include "swalk/recommender.h"
#include "swalk/synthetic.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace swalk {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig:
    case ErrorKind::kIo:
      return kExitUsage;
    case ErrorKind::kData:
      return kExitData;
    case ErrorKind::kNumeric:
      return kExitNumeric;
  }
  return kExitUsage;
}

void ApplyThreads(int threads) {
  if (threads <= 0) {
    threads =
        static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }
  Eigen::setNbThreads(threads);
#ifdef _OPENMP
  omp_set_num_threads(threads);
#endif
}

std::string DefaultDataDir() {
  const char* env = std::getenv("SWALK_DATA_DIR");
  return env ? env : "";
}

json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path));
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("{}: {}", path, e.what()));
  }
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  out << text;
  if (!out) throw IoError(fmt::format("write failed for '{}'", path.string()));
}

std::vector<int> ParseCutoffs(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      const int k = std::stoi(part, &used);
      if (used != part.size() || k < 1) throw std::invalid_argument(part);
      out.push_back(k);
    } catch (const std::exception&) {
      throw ConfigError(fmt::format("bad cutoff '{}'", part));
    }
  }
  if (out.empty()) throw ConfigError("no cutoffs given");
  return out;
}

// Prepared data directory ----------------------------------------------------

fs::path EventsPath(const fs::path& dir) { return dir / "events.tsv"; }
fs::path FoldPath(const fs::path& dir, int fold, const char* part) {
  return dir / fmt::format("fold{}.{}.ids", fold, part);
}

void WriteIds(const fs::path& path, const SessionDataset& ds) {
  std::string text;
  for (const auto& id : ds.session_ids) (text += id) += '\n';
  WriteText(path, text);
}

SessionDataset LoadPrepared(const fs::path& dir) {
  if (dir.empty()) {
    throw ConfigError("no data directory (pass --data or set SWALK_DATA_DIR)");
  }
  const fs::path events = EventsPath(dir);
  if (!fs::exists(events)) {
    throw IoError(fmt::format("'{}' not found; run 'swalk prepare' first",
                              events.string()));
  }
  const EventLog log = LoadEvents(events, TextFormat::kTsv);
  PreprocessOptions keep_all;
  keep_all.min_session_length = 1;
  keep_all.min_item_support = 1;
  return Preprocess(log, keep_all);
}

SessionDataset LoadFold(const SessionDataset& ds, const fs::path& dir, int fold,
                        const char* part) {
  const fs::path path = FoldPath(dir, fold, part);
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
  std::unordered_map<std::string, std::size_t> row_of;
  for (std::size_t i = 0; i < ds.session_ids.size(); ++i) {
    row_of.emplace(ds.session_ids[i], i);
  }
  std::vector<std::size_t> rows;
  std::string id;
  while (std::getline(in, id)) {
    if (id.empty()) continue;
    auto it = row_of.find(id);
    if (it == row_of.end()) {
      throw DataError(
          fmt::format("{}: unknown session '{}'", path.string(), id));
    }
    rows.push_back(it->second);
  }
  if (rows.empty()) throw DataError(fmt::format("{} is empty", path.string()));
  return SelectSessions(ds, rows);
}

SessionDataset WithoutSessions(const SessionDataset& ds,
                               const SessionDataset& drop) {
  const std::unordered_set<std::string> dropped(drop.session_ids.begin(),
                                                drop.session_ids.end());
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < ds.num_sessions(); ++i) {
    if (!dropped.contains(ds.session_ids[i])) rows.push_back(i);
  }
  return SelectSessions(ds, rows);
}

// prepare --------------------------------------------------------------------

struct PrepareArgs {
  std::string input;
  std::string format = "tsv";
  std::string session_col = "SessionId";
  std::string item_col = "ItemId";
  std::string time_col = "Time";
  std::size_t min_session_length = 2;
  std::size_t min_item_support = 5;
  bool fixpoint = false;
  std::string split = "last_days";
  int test_days = 1;
  std::string out;
};

int RunPrepare(const PrepareArgs& a) {
  if (!fs::exists(a.input)) {
    throw IoError(fmt::format("input '{}' does not exist", a.input));
  }
  const TextFormat format =
      a.format == "csv" ? TextFormat::kCsv : TextFormat::kTsv;
  const EventLog log = LoadEvents(
      a.input, format, ColumnMap{a.session_col, a.item_col, a.time_col});
  PreprocessOptions options;
  options.min_session_length = a.min_session_length;
  options.min_item_support = a.min_item_support;
  options.iterate_to_fixpoint = a.fixpoint;
  PreprocessReport report;
  const SessionDataset ds = Preprocess(log, options, &report);

  const SplitMode mode = a.split == "five_fold"
                             ? SplitMode::FiveFold(a.test_days)
                             : SplitMode::LastNDays(a.test_days);
  const std::vector<DataSplit> splits = ChronologicalSplit(ds, mode);

  const fs::path dir(a.out);
  fs::create_directories(dir);

  // Surviving events, grouped by session in dataset order and time-sorted.
  std::unordered_map<std::string, std::vector<const EventRecord*>> by_session;
  for (const auto& r : log.records) {
    if (ds.vocab.Find(r.item_id)) by_session[r.session_id].push_back(&r);
  }
  EventLog kept;
  for (const auto& sid : ds.session_ids) {
    auto& records = by_session.at(sid);
    std::stable_sort(records.begin(), records.end(),
                     [](auto* x, auto* y) { return x->time < y->time; });
    for (const auto* r : records) kept.records.push_back(*r);
  }
  {
    std::ostringstream text;
    WriteEvents(text, kept);
    WriteText(EventsPath(dir), text.str());
  }

  json folds = json::array();
  for (std::size_t k = 0; k < splits.size(); ++k) {
    const int fold = static_cast<int>(k);
    WriteIds(FoldPath(dir, fold, "train"), splits[k].train);
    WriteIds(FoldPath(dir, fold, "test"), splits[k].test);
    WriteIds(FoldPath(dir, fold, "valid"), splits[k].validation);
    folds.push_back({{"fold", fold},
                     {"train_sessions", splits[k].train.num_sessions()},
                     {"test_sessions", splits[k].test.num_sessions()},
                     {"valid_sessions", splits[k].validation.num_sessions()}});
  }
  const json summary = {
      {"input", fs::path(a.input).filename().string()},
      {"preprocess", report.ToJson()},
      {"split",
       {{"mode", a.split}, {"test_days", a.test_days}, {"folds", folds}}}};
  WriteText(dir / "prepare_report.json", summary.dump(2) + "\n");
  fmt::print("prepared {} sessions, {} items, {} events into {} ({} fold(s))\n",
             ds.num_sessions(), ds.num_items(), ds.num_events(), dir.string(),
             splits.size());
  return kExitOk;
}

// Shared training configuration
// ------------------------------------------------

struct TrainFlags {
  std::string config;
  std::string profile;
  std::optional<double> lambda, xi, alpha, beta, delta_pos, delta_inf, epsilon,
      keep_ratio;
  std::optional<int> max_steps, kstep, sr_window;
  std::optional<std::string> composition, transition, teleportation, precision;

  void Register(CLI::App* cmd) {
    cmd->add_option("--config", config, "JSON config file");
    cmd->add_option("--profile", profile, "hyperparameter profile")
        ->check(CLI::IsMember(ProfileNames()));
    cmd->add_option("--lambda", lambda, "ridge weight");
    cmd->add_option("--xi", xi, "bound on the teleportation diagonal");
    cmd->add_option("--alpha", alpha, "damping factor");
    cmd->add_option("--beta", beta, "self-loop mix");
    cmd->add_option("--delta-pos", delta_pos, "position decay for training");
    cmd->add_option("--delta-inf", delta_inf, "position decay at inference");
    cmd->add_option("--epsilon", epsilon, "walk tolerance (default 1e-3 * n)");
    cmd->add_option("--max-steps", max_steps, "walk step cap");
    cmd->add_option("--keep-ratio", keep_ratio, "fraction of entries kept");
    cmd->add_option("--composition", composition, "rwr | kstep | first_step");
    cmd->add_option("--kstep", kstep, "k for kstep composition");
    cmd->add_option("--transition", transition, "ours | sr | identity");
    cmd->add_option("--teleportation", teleportation, "ours | ar | identity");
    cmd->add_option("--sr-window", sr_window, "window for the sr baseline");
    cmd->add_option("--precision", precision, "f64 | f32 composition");
  }

  // Defaults, then profile, then the config file, then flags.
  TrainOptions Resolve(json* config_out) const {
    json file = json::object();
    if (!config.empty()) file = ReadJsonFile(config);
    if (!file.is_object()) throw ConfigError("config must be a JSON object");
    std::string chosen = profile;
    if (chosen.empty() && file.contains("profile")) {
      chosen = file["profile"].get<std::string>();
    }
    TrainOptions options;
    if (!chosen.empty()) {
      auto defaults = ProfileDefaults(chosen);
      if (!defaults)
        throw ConfigError(fmt::format("unknown profile '{}'", chosen));
      options.hyper = *defaults;
    }
    if (file.contains("train")) options.MergeJson(file["train"]);
    HyperParams& h = options.hyper;
    if (lambda) h.lambda = *lambda;
    if (xi) h.xi = *xi;
    if (alpha) h.alpha = *alpha;
    if (beta) h.beta = *beta;
    if (delta_pos) h.delta_pos = *delta_pos;
    if (delta_inf) h.delta_inf = *delta_inf;
    if (epsilon) h.epsilon = *epsilon;
    if (keep_ratio) h.keep_ratio = *keep_ratio;
    if (max_steps) h.max_steps = *max_steps;
    if (kstep) options.kstep = *kstep;
    if (sr_window) options.sr_window = *sr_window;
    if (composition) options.composition = ParseComposition(*composition);
    if (transition) options.transition = ParseTransitionSource(*transition);
    if (teleportation) {
      options.teleportation = ParseTeleportationSource(*teleportation);
    }
    if (precision) options.precision = ParsePrecision(*precision);
    options.Validate();
    if (config_out) {
      *config_out = file;
      (*config_out)["profile"] = chosen;
      (*config_out)["train"] = options.ToJson();
    }
    return options;
  }
};

struct DataFlags {
  std::string data = DefaultDataDir();
  int fold = 0;

  void Register(CLI::App* cmd) {
    cmd->add_option("--data", data,
                    "prepared data directory (default $SWALK_DATA_DIR)");
    cmd->add_option("--fold", fold, "fold index")
        ->check(CLI::NonNegativeNumber);
  }
};

// train ----------------------------------------------------------------------

struct TrainArgs {
  DataFlags data;
  TrainFlags flags;
  bool tuning = false;
  double train_fraction = 1.0;
  std::string out;
  std::string trace;
};

template <typename Scalar>
ModelArtifact TrainArtifact(const SessionDataset& train,
                            const TrainOptions& options) {
  const TrainedModel<Scalar> model = TrainModel<Scalar>(train, options);
  fmt::print("trained n={} in {:.1f}s (walk: {} step(s){})\n",
             train.num_items(), model.total_seconds(), model.trace.steps_taken,
             model.trace.converged ? ", converged" : "");
  return MakeArtifact(model, train.vocab, options);
}

int RunTrain(const TrainArgs& a) {
  json config;
  const TrainOptions options = a.flags.Resolve(&config);
  const SessionDataset all = LoadPrepared(a.data.data);
  SessionDataset train = LoadFold(all, a.data.data, a.data.fold, "train");
  if (a.tuning) {
    // The validation tail is held out from tuning runs.
    train = WithoutSessions(train,
                            LoadFold(all, a.data.data, a.data.fold, "valid"));
  }
  train = a.train_fraction < 1.0 ? SubsampleTrain(train, a.train_fraction)
                                 : CompactVocabulary(train);

  ModelArtifact artifact = options.precision == Precision::kFloat32
                               ? TrainArtifact<float>(train, options)
                               : TrainArtifact<double>(train, options);
  config["data"] = {{"fold", a.data.fold},
                    {"tuning", a.tuning},
                    {"train_fraction", a.train_fraction},
                    {"train_sessions", train.num_sessions()}};
  artifact.meta.extra["config"] = config;
  SaveModel(artifact, a.out);
  if (!a.trace.empty()) {
    WriteText(a.trace, artifact.meta.extra["trace"].dump(2) + "\n");
  }
  fmt::print("saved {} ({} nonzeros)\n", a.out, artifact.matrix.nnz());
  return kExitOk;
}

// prune ----------------------------------------------------------------------

struct PruneArgs {
  std::string model;
  double keep_ratio = 1.0;
  std::string out;
};

int RunPrune(const PruneArgs& a) {
  ModelArtifact artifact = LoadModel(a.model);
  const std::size_t before = artifact.matrix.nnz();
  artifact.matrix = PruneMagnitude(artifact.matrix, a.keep_ratio);
  artifact.meta.hyper.keep_ratio = a.keep_ratio;
  SaveModel(artifact, a.out);
  fmt::print("pruned {} -> {} nonzeros, saved {}\n", before,
             artifact.matrix.nnz(), a.out);
  return kExitOk;
}

// eval -----------------------------------------------------------------------

struct EvalArgs {
  std::string model;
  DataFlags data;
  std::string part = "test";
  std::string cutoffs = "5,10,20,50,100";
  std::string report;
  std::string per_event_dump;
  bool length_buckets = false;
  int threads = 0;
};

constexpr double kMaxOovFraction = 0.5;

MappedSessions MapChecked(const SessionDataset& test,
                          const std::vector<std::string>& vocab) {
  MappedSessions mapped = MapSessionsToVocab(test, vocab);
  if (mapped.OovFraction() > kMaxOovFraction) {
    throw DataError(fmt::format(
        "{:.1f}% of test events are unknown to the model; wrong model or data?",
        100 * mapped.OovFraction()));
  }
  return mapped;
}

int RunEval(const EvalArgs& a) {
  const ModelArtifact artifact = LoadModel(a.model);
  const SessionDataset all = LoadPrepared(a.data.data);
  const SessionDataset test = LoadFold(all, a.data.data, a.data.fold,
                                       a.part == "valid" ? "valid" : "test");
  const MappedSessions mapped = MapChecked(test, artifact.vocab);

  const Recommender recommender(artifact.matrix, artifact.meta.hyper.delta_inf);
  EvalOptions options;
  options.cutoffs = ParseCutoffs(a.cutoffs);
  options.threads =
      a.threads > 0
          ? a.threads
          : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::ofstream dump;
  if (!a.per_event_dump.empty()) {
    dump.open(a.per_event_dump);
    if (!dump)
      throw IoError(fmt::format("cannot write '{}'", a.per_event_dump));
    dump << "session\tt\ttarget\trank\trelevant\n";
    options.per_event_dump = &dump;
  }
  EvalReport report =
      Evaluate(MakeScorer(recommender), mapped.sessions, options);
  report.model_meta = {{"composition", artifact.meta.composition},
                       {"transition", artifact.meta.transition},
                       {"teleportation", artifact.meta.teleportation},
                       {"hyperparameters", artifact.meta.hyper.ToJson()},
                       {"nnz", artifact.matrix.nnz()},
                       {"oov_events", mapped.oov_events}};
  json out = report.ToJson();
  fmt::print("{}", report.ToTable());
  if (a.length_buckets) {
    options.per_event_dump = nullptr;
    const LengthBuckets buckets =
        LengthBucketReport(MakeScorer(recommender), mapped.sessions, options);
    out["short_sessions"] = buckets.short_sessions.ToJson();
    out["long_sessions"] = buckets.long_sessions.ToJson();
    fmt::print("short sessions (<= 5 items):\n{}",
               buckets.short_sessions.ToTable());
    fmt::print("long sessions (> 5 items):\n{}",
               buckets.long_sessions.ToTable());
  }
  const std::string path = a.report.empty() ? a.model + ".eval.json" : a.report;
  WriteText(path, out.dump(2) + "\n");
  return kExitOk;
}

// recommend ------------------------------------------------------------------

struct RecommendArgs {
  std::string model;
  std::string input = "-";
  std::size_t n = 20;
};

int RunRecommend(const RecommendArgs& a) {
  const ModelArtifact artifact = LoadModel(a.model);
  const ItemVocab vocab(artifact.vocab);
  const Recommender recommender(artifact.matrix, artifact.meta.hyper.delta_inf);
  std::ifstream file;
  if (a.input != "-") {
    file.open(a.input);
    if (!file) throw IoError(fmt::format("cannot open '{}'", a.input));
  }
  std::istream& in = a.input == "-" ? std::cin : file;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    std::vector<std::string> ids;
    std::vector<ItemIndex> prefix;
    for (std::string id; fields >> id;) {
      ids.push_back(id);
      auto index = vocab.Find(id);
      prefix.push_back(index ? *index : -1);
      if (!index) Warn(fmt::format("line {}: unknown item '{}'", line_no, id));
    }
    if (ids.empty()) continue;
    json out = {
        {"input", ids}, {"items", json::array()}, {"scores", json::array()}};
    if (std::any_of(prefix.begin(), prefix.end(),
                    [](ItemIndex i) { return i >= 0; })) {
      const RankedList ranked = recommender.Recommend(prefix, a.n);
      for (std::size_t j = 0; j < ranked.items.size(); ++j) {
        out["items"].push_back(artifact.vocab[ranked.items[j]]);
        out["scores"].push_back(ranked.scores[j]);
      }
    } else {
      Warn(fmt::format("line {}: no known items, nothing to recommend",
                       line_no));
    }
    std::cout << out.dump() << '\n';
  }
  return kExitOk;
}

// sweep ----------------------------------------------------------------------

struct SweepArgs {
  DataFlags data;
  TrainFlags flags;
  std::vector<double> alphas, betas, delta_pos, delta_inf;
  std::string part = "valid";
  std::string cutoffs = "20";
  std::string out;
  int threads = 0;
};

int RunSweep(const SweepArgs& a) {
  const TrainOptions base = a.flags.Resolve(nullptr);
  const SessionDataset all = LoadPrepared(a.data.data);
  SessionDataset train = LoadFold(all, a.data.data, a.data.fold, "train");
  const bool on_valid = a.part != "test";
  const SessionDataset test =
      LoadFold(all, a.data.data, a.data.fold, on_valid ? "valid" : "test");
  if (on_valid) {
    train = WithoutSessions(train, test);
  }
  train = CompactVocabulary(train);
  const MappedSessions mapped = MapChecked(test, train.vocab.ids());

  auto or_base = [](const std::vector<double>& v, double b) {
    return v.empty() ? std::vector<double>{b} : v;
  };
  const auto alphas = or_base(a.alphas, base.hyper.alpha);
  const auto betas = or_base(a.betas, base.hyper.beta);
  const auto pos = or_base(a.delta_pos, base.hyper.delta_pos);
  const auto inf = or_base(a.delta_inf, base.hyper.delta_inf);

  EvalOptions eval_options;
  eval_options.cutoffs = ParseCutoffs(a.cutoffs);
  eval_options.threads =
      a.threads > 0
          ? a.threads
          : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw IoError(fmt::format("cannot write '{}'", a.out));
  }
  std::ostream& out = a.out.empty() ? std::cout : file;

  // The unmixed teleportation matrix depends on none of the swept values.
  TrainOptions unmixed = base;
  unmixed.hyper.beta = 1.0;
  const DenseMatrix<double> t_unmixed =
      BuildTeleportationMatrix(train, unmixed);
  for (double dp : pos) {
    TrainOptions for_r = base;
    for_r.hyper.delta_pos = dp;
    const DenseMatrix<double> r = BuildTransitionMatrix(train, for_r);
    for (double beta : betas) {
      const DenseMatrix<double> t = MixSelfLoop(t_unmixed, beta);
      for (double alpha : alphas) {
        TrainOptions point = for_r;
        point.hyper.alpha = alpha;
        point.hyper.beta = beta;
        const auto model =
            point.precision == Precision::kFloat32
                ? ComposeModel<float>(r, t, point).m.cast<double>().eval()
                : ComposeModel<double>(r, t, point).m;
        for (double di : inf) {
          const Recommender recommender(model, di);
          const EvalReport report =
              Evaluate(MakeScorer(recommender), mapped.sessions, eval_options);
          json row = {{"alpha", alpha},
                      {"beta", beta},
                      {"delta_pos", dp},
                      {"delta_inf", di},
                      {"metrics", report.ToJson()["metrics"]}};
          out << row.dump() << '\n';
          out.flush();
        }
      }
    }
  }
  return kExitOk;
}

// synth ----------------------------------------------------------------------

struct SynthArgs {
  SyntheticConfig config;
  std::uint64_t seed = 1;
  std::string out;
};

int RunSynth(const SynthArgs& a) {
  const EventLog log = GenerateSyntheticLog(a.config, a.seed);
  std::ostringstream text;
  WriteEvents(text, log);
  WriteText(a.out, text.str());
  fmt::print("wrote {} events to {}\n", log.records.size(), a.out);
  return kExitOk;
}

int Main(int argc, char** argv) {
  CLI::App app{"swalk: session-based recommendation with item random walks"};
  app.require_subcommand(1);
  int threads = 0;
  bool quiet = false;
  app.add_option("--threads", threads, "worker threads (default: all cores)");
  app.add_flag("--quiet", quiet, "suppress warnings");

  PrepareArgs prepare;
  auto* prep = app.add_subcommand("prepare", "filter events and write splits");
  prep->add_option("--input", prepare.input, "raw event file")->required();
  prep->add_option("--format", prepare.format, "tsv | csv")
      ->check(CLI::IsMember({"tsv", "csv"}));
  prep->add_option("--session-column", prepare.session_col);
  prep->add_option("--item-column", prepare.item_col);
  prep->add_option("--time-column", prepare.time_col);
  prep->add_option("--min-session-length", prepare.min_session_length);
  prep->add_option("--min-item-support", prepare.min_item_support);
  prep->add_flag("--fixpoint", prepare.fixpoint,
                 "repeat the filters until nothing changes");
  prep->add_option("--split", prepare.split, "last_days | five_fold")
      ->check(CLI::IsMember({"last_days", "five_fold"}));
  prep->add_option("--test-days", prepare.test_days)
      ->check(CLI::PositiveNumber);
  prep->add_option("--out", prepare.out, "output directory")->required();

  TrainArgs train;
  auto* tr = app.add_subcommand("train", "train and save a model");
  train.data.Register(tr);
  train.flags.Register(tr);
  tr->add_flag("--tuning", train.tuning, "hold out the validation tail");
  tr->add_option("--train-fraction", train.train_fraction,
                 "keep the most recent fraction of training sessions")
      ->check(CLI::Range(0.0, 1.0));
  tr->add_option("--out", train.out, "model path prefix")->required();
  tr->add_option("--trace", train.trace, "write the walk trace as JSON");

  PruneArgs prune;
  auto* pr = app.add_subcommand("prune", "magnitude-prune a saved model");
  pr->add_option("--model", prune.model, "model path prefix")->required();
  pr->add_option("--keep-ratio", prune.keep_ratio)->required();
  pr->add_option("--out", prune.out, "output path prefix")->required();

  EvalArgs eval;
  auto* ev = app.add_subcommand("eval", "evaluate a saved model");
  ev->add_option("--model", eval.model, "model path prefix")->required();
  eval.data.Register(ev);
  ev->add_option("--part", eval.part, "test | valid")
      ->check(CLI::IsMember({"test", "valid"}));
  ev->add_option("--cutoffs", eval.cutoffs, "comma-separated list");
  ev->add_option("--report", eval.report, "JSON report path");
  ev->add_option("--per-event-dump", eval.per_event_dump, "TSV of every event");
  ev->add_flag("--length-buckets", eval.length_buckets,
               "also report short and long sessions");

  RecommendArgs rec;
  auto* rc = app.add_subcommand("recommend", "recommend for session prefixes");
  rc->add_option("--model", rec.model, "model path prefix")->required();
  rc->add_option("--input", rec.input, "one prefix per line ('-' = stdin)");
  rc->add_option("-n,--top", rec.n, "list length")->check(CLI::PositiveNumber);

  SweepArgs sweep;
  auto* sw = app.add_subcommand("sweep", "grid over alpha, beta and decays");
  sweep.data.Register(sw);
  sweep.flags.Register(sw);
  sw->add_option("--alphas", sweep.alphas)->delimiter(',');
  sw->add_option("--betas", sweep.betas)->delimiter(',');
  sw->add_option("--delta-pos-values", sweep.delta_pos)->delimiter(',');
  sw->add_option("--delta-inf-values", sweep.delta_inf)->delimiter(',');
  sw->add_option("--part", sweep.part, "valid | test")
      ->check(CLI::IsMember({"test", "valid"}));
  sw->add_option("--cutoffs", sweep.cutoffs, "comma-separated list");
  sw->add_option("--out", sweep.out, "JSON lines output (default stdout)");

  SynthArgs synth;
  auto* sy = app.add_subcommand("synth", "write a synthetic event log");
  SyntheticConfig& sc = synth.config;
  sy->add_option("--out", synth.out, "output TSV")->required();
  sy->add_option("--seed", synth.seed);
  sy->add_option("--items", sc.num_items);
  sy->add_option("--sessions", sc.num_sessions);
  sy->add_option("--cluster-size", sc.cluster_size);
  sy->add_option("--bundle-size", sc.bundle_size);
  sy->add_option("--mean-length", sc.mean_length);
  sy->add_option("--successors", sc.successors);
  sy->add_option("--bundle-successors", sc.bundle_successors);
  sy->add_option("--successor-prob", sc.successor_prob);
  sy->add_option("--bundle-move-prob", sc.bundle_move_prob);
  sy->add_option("--repeat-prob", sc.repeat_prob);
  sy->add_option("--noise-prob", sc.noise_prob);
  sy->add_option("--span-days", sc.span_days);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  SetWarningsMuted(quiet);
  ApplyThreads(threads);
  eval.threads = sweep.threads = threads;

  try {
    if (*prep) return RunPrepare(prepare);
    if (*tr) return RunTrain(train);
    if (*pr) return RunPrune(prune);
    if (*ev) return RunEval(eval);
    if (*rc) return RunRecommend(rec);
    if (*sw) return RunSweep(sweep);
    if (*sy) return RunSynth(synth);
  } catch (const Error& e) {
    fmt::print(stderr, "swalk: {}\n", e.what());
    return ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    fmt::print(stderr, "swalk: {}\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace
}  // namespace swalk

int main(int argc, char** argv) { return swalk::Main(argc, argv); }
