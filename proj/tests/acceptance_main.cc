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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. The benchmark check runs only when
// SWALK_DIGI1_EVENTS names a canonical event file (SessionId, ItemId, Time).

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numeric>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "metric_scenarios.h"
#include "oracles.h"
#include "swalk/corpus.h"
#include "swalk/error.h"
#include "swalk/eval.h"
#include "swalk/linear_models.h"
#include "swalk/log.h"
#include "swalk/model_store.h"
#include "swalk/pipeline.h"
#include "swalk/recommender.h"
#include "swalk/synthetic.h"
#include "swalk/walk.h"
#include "test_util.h"

namespace swalk {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

double Mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) /
         static_cast<double>(v.size());
}

double SampleStdDev(const std::vector<double>& v) {
  const double mean = Mean(v);
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

int Threads() {
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

// Random instances -----------------------------------------------------------

SparseMatrix RandomSparse(Eigen::Index rows, Eigen::Index cols, double density,
                          bool binary, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Eigen::Triplet<double>> entries;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (unit(rng) < density) {
        entries.emplace_back(i, j, binary ? 1.0 : 0.05 + unit(rng));
      }
    }
  }
  // Every column is used at least once.
  std::uniform_int_distribution<Eigen::Index> row(0, rows - 1);
  for (Eigen::Index j = 0; j < cols; ++j)
    entries.emplace_back(row(rng), j, 1.0);
  SparseMatrix m(rows, cols);
  m.setFromTriplets(entries.begin(), entries.end(),
                    [](double a, double) { return a; });
  return m;
}

struct Instance {
  Eigen::Index n;
  Eigen::Index m;
  double lambda;
};

std::vector<Instance> Instances(std::mt19937_64& rng) {
  std::uniform_int_distribution<Eigen::Index> n_dist(2, 200);
  std::uniform_int_distribution<Eigen::Index> m_dist(1, 500);
  const double lambdas[] = {0.1, 1.0, 10.0};
  std::vector<Instance> out;
  for (int i = 0; i < 50; ++i) {
    out.push_back({n_dist(rng), m_dist(rng), lambdas[i % 3]});
  }
  return out;
}

oracle::Grid Densify(const SparseMatrix& s) {
  return oracle::ToGrid(DenseMatrix<double>(s));
}

// Criteria -------------------------------------------------------------------

Outcome SolverMatchesRidgeOracle() {
  std::mt19937_64 rng(101);
  double worst = 0;
  double solve_seconds = 0;
  for (const Instance& in : Instances(rng)) {
    const SparseMatrix y = RandomSparse(in.m, in.n, 0.05, false, rng);
    const SparseMatrix z = RandomSparse(in.m, in.n, 0.05, false, rng);
    const auto start = std::chrono::steady_clock::now();
    const DenseMatrix<double> b = SolveTransition(y, z, in.lambda);
    solve_seconds += Seconds(start);
    const oracle::Grid want = oracle::Ridge(Densify(y), Densify(z), in.lambda);
    worst = std::max(worst, oracle::RelativeError(oracle::ToGrid(b), want));
  }
  return {worst <= 1e-8 && solve_seconds < 10.0,
          fmt::format("max relative Frobenius error {:.2e} (<= 1e-8), "
                      "solver time {:.2f}s (< 10s)",
                      worst, solve_seconds)};
}

Outcome TeleportationMatchesEase() {
  std::mt19937_64 rng(202);
  double worst_ease = 0;
  double worst_diag = 0;
  double worst_free = 0;
  for (const Instance& in : Instances(rng)) {
    const SparseMatrix x = RandomSparse(in.m, in.n, 0.05, true, rng);
    const oracle::Grid xg = Densify(x);
    const DenseMatrix<double> zero = SolveTeleportation(x, in.lambda, 0.0);
    worst_ease = std::max(
        worst_ease,
        oracle::MaxAbsDiff(oracle::ToGrid(zero), oracle::Ease(xg, in.lambda)));
    worst_diag = std::max(worst_diag, zero.diagonal().cwiseAbs().maxCoeff());
    const DenseMatrix<double> free =
        SolveTeleportation(x, in.lambda, kInfinity);
    const oracle::Grid want =
        oracle::Add(oracle::Identity(static_cast<std::size_t>(in.n)),
                    oracle::GramInverse(xg, in.lambda), -in.lambda);
    worst_free =
        std::max(worst_free, oracle::MaxAbsDiff(oracle::ToGrid(free), want));
  }
  return {worst_ease <= 1e-10 && worst_diag <= 1e-9 && worst_free <= 1e-10,
          fmt::format("xi=0 vs EASE {:.2e} (<= 1e-10), |diag| {:.2e} "
                      "(<= 1e-9), xi=inf vs I - lambda P {:.2e} (<= 1e-10)",
                      worst_ease, worst_diag, worst_free)};
}

DenseMatrix<double> RandomStochastic(Eigen::Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  DenseMatrix<double> m = DenseMatrix<double>::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (unit(rng) < 0.3) m(i, j) = unit(rng);
    }
    m(i, (i + 1) % n) += 0.1;
    m.row(i) /= m.row(i).sum();
  }
  return m;
}

Outcome PowerMethodMatchesExpansion() {
  std::mt19937_64 rng(303);
  std::uniform_int_distribution<Eigen::Index> n_dist(2, 100);
  const double alphas[] = {0.3, 0.5, 0.7};
  double worst_expansion = 0;
  double worst_ratio = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = n_dist(rng);
    const double alpha = alphas[trial % 3];
    const DenseMatrix<double> r = RandomStochastic(n, rng);
    const DenseMatrix<double> t = RandomStochastic(n, rng);
    const oracle::Grid rg = oracle::ToGrid(r);
    const oracle::Grid tg = oracle::ToGrid(t);
    for (int k = 1; k <= 6; ++k) {
      const auto walk = ComposeRwr<double>(r, t, alpha, 0.0, k);
      worst_expansion =
          std::max(worst_expansion,
                   oracle::MaxAbsDiff(oracle::ToGrid(walk.m),
                                      oracle::RwrExpansion(rg, tg, alpha, k)));
    }
    const auto walk = ComposeRwr<double>(r, t, alpha, 0.0, 10);
    const auto& res = walk.trace.residuals;
    for (std::size_t s = 1; s < res.size(); ++s) {
      if (res[s - 1] > 1e-300) {
        worst_ratio = std::max(worst_ratio, res[s] / res[s - 1] / alpha);
      }
    }
  }
  return {worst_expansion <= 1e-10 && worst_ratio <= 1.1,
          fmt::format("max |M(k) - expansion| {:.2e} (<= 1e-10), worst "
                      "residual ratio {:.3f} alpha (<= 1.1 alpha)",
                      worst_expansion, worst_ratio)};
}

// Synthetic corpus -----------------------------------------------------------

struct Corpus {
  SessionDataset train;
  MappedSessions test;
};

Corpus MakeCorpus(std::uint64_t seed) {
  const SyntheticConfig config;
  const SessionDataset ds = Preprocess(GenerateSyntheticLog(config, seed));
  const auto splits = ChronologicalSplit(ds, SplitMode::LastNDays(1));
  Corpus c;
  c.train = CompactVocabulary(splits[0].train);
  c.test = MapSessionsToVocab(splits[0].test, c.train.vocab);
  return c;
}

template <typename Model>
double RecallAt20(const Model& m, double delta_inf, const Corpus& c) {
  const Recommender rec(m, delta_inf);
  EvalOptions options;
  options.cutoffs = {20};
  options.threads = Threads();
  return Evaluate(MakeScorer(rec), c.test.sessions, options).At(20).recall;
}

TrainOptions SyntheticOptions() {
  TrainOptions o;
  o.hyper = *ProfileDefaults("yc5");
  o.precision = Precision::kFloat32;
  return o;
}

// Everything measured on one synthetic seed.
struct SeedRun {
  std::size_t items = 0;
  std::size_t test_sessions = 0;
  WalkTrace trace;
  double train_seconds = 0;
  double ours = 0;
  double ours_identity = 0;
  double sr_ours = 0;
  DenseMatrix<float> model;  // ours/ours, kept for the first seed only
  DenseMatrix<double> r;     // kept for the first seed only
};

SeedRun RunSeed(const Corpus& c, bool keep) {
  const TrainOptions o = SyntheticOptions();
  const double d = o.hyper.delta_inf;
  SeedRun run;
  run.items = c.train.num_items();
  run.test_sessions = c.test.sessions.size();
  auto start = std::chrono::steady_clock::now();
  DenseMatrix<double> r = BuildTransitionMatrix(c.train, o);
  const DenseMatrix<double> t = BuildTeleportationMatrix(c.train, o);
  auto ours = ComposeModel<float>(r, t, o);
  run.train_seconds = Seconds(start);
  run.trace = ours.trace;
  run.ours = RecallAt20(ours.m, d, c);

  const auto n = static_cast<Eigen::Index>(run.items);
  const DenseMatrix<double> identity = DenseMatrix<double>::Identity(n, n);
  run.ours_identity = RecallAt20(ComposeModel<float>(r, identity, o).m, d, c);

  TrainOptions sr = o;
  sr.transition = TransitionSource::kSr;
  run.sr_ours = RecallAt20(
      ComposeModel<float>(BuildTransitionMatrix(c.train, sr), t, o).m, d, c);
  if (keep) {
    run.model = std::move(ours.m);
    run.r = std::move(r);
  }
  return run;
}

Outcome ConvergesInFewSteps(const SeedRun& run) {
  const int steps = run.trace.steps_taken;
  std::string residuals;
  for (double x : run.trace.residuals) {
    residuals += fmt::format(" {:.3g}", x / static_cast<double>(run.items));
  }
  return {run.trace.converged && steps >= 3 && steps <= 5 &&
              run.train_seconds < 300,
          fmt::format("n={} steps={} (3-5) converged={} train={:.1f}s (< 300s) "
                      "residual/n:{}",
                      run.items, steps, run.trace.converged, run.train_seconds,
                      residuals)};
}

Outcome PruningIsRobust(const SeedRun& run, const Corpus& c) {
  const double d = SyntheticOptions().hyper.delta_inf;
  const double full = run.ours;
  const double magnitude = RecallAt20(PruneMagnitude(run.model, 0.01), d, c);
  const double random =
      RecallAt20(oracle::RandomPrune(run.model, 0.01, 7), d, c);
  const double mag_drop = (full - magnitude) / full;
  const double rand_drop = (full - random) / full;
  return {
      std::abs(mag_drop) <= 0.05 && rand_drop > mag_drop,
      fmt::format("R@20 full {:.4f}, magnitude {:.4f} ({:+.2f}%), random "
                  "{:.4f} ({:+.2f}%)",
                  full, magnitude, -100 * mag_drop, random, -100 * rand_drop)};
}

Outcome RwrBeatsKStep(const SeedRun& run, const Corpus& c) {
  const double d = SyntheticOptions().hyper.delta_inf;
  const DenseMatrix<float> rf = run.r.cast<float>();
  std::vector<double> kstep;
  for (int k = 1; k <= 5; ++k) {
    kstep.push_back(RecallAt20(ComposeKStep<float>(rf, k), d, c));
  }
  bool pass = true;
  for (std::size_t k = 1; k < kstep.size(); ++k) {
    pass = pass && kstep[k] < kstep[0] && run.ours > kstep[k];
  }
  std::string values;
  for (double v : kstep) values += fmt::format(" {:.4f}", v);
  return {pass,
          fmt::format("k-step R@20 k=1..5:{}; RWR {:.4f}", values, run.ours)};
}

Outcome AblationOrdering(const std::vector<SeedRun>& runs) {
  std::vector<double> ours, identity, sr;
  for (const auto& r : runs) {
    ours.push_back(r.ours);
    identity.push_back(r.ours_identity);
    sr.push_back(r.sr_ours);
  }
  const double noise = SampleStdDev(ours);
  const double m_ours = Mean(ours);
  const double m_identity = Mean(identity);
  const double m_sr = Mean(sr);
  return {m_ours >= m_identity - noise && m_ours >= m_sr - noise,
          fmt::format("mean R@20 over {} seeds: ours/ours {:.4f}, ours/I "
                      "{:.4f}, SR/ours {:.4f}; noise (seed std dev) {:.4f}",
                      runs.size(), m_ours, m_identity, m_sr, noise)};
}

Outcome Benchmark(const std::string& path) {
  const auto start = std::chrono::steady_clock::now();
  const SessionDataset ds = Preprocess(LoadEvents(path, TextFormat::kTsv));
  const auto splits = ChronologicalSplit(ds, SplitMode::LastNDays(7));
  const SessionDataset train = CompactVocabulary(splits[0].train);
  const MappedSessions test = MapSessionsToVocab(splits[0].test, train.vocab);
  TrainOptions o;
  o.hyper = *ProfileDefaults("digi1");
  o.precision = Precision::kFloat32;
  const auto model = TrainModel<float>(train, o);
  const Recommender rec(model.m, o.hyper.delta_inf);
  EvalOptions options;
  options.cutoffs = {20};
  options.threads = Threads();
  const MetricsAtK m = Evaluate(MakeScorer(rec), test.sessions, options).At(20);
  return {std::abs(m.hr - 0.542) <= 0.03 && std::abs(m.mrr - 0.193) <= 0.015,
          fmt::format("HR@20 {:.4f} (0.542 +- 0.03), MRR@20 {:.4f} "
                      "(0.193 +- 0.015), n={}, train {:.0f}s, total {:.0f}s",
                      m.hr, m.mrr, train.num_items(), model.total_seconds(),
                      Seconds(start))};
}

// Serialization --------------------------------------------------------------

ModelArtifact RandomArtifact(std::size_t n, double keep, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  DenseMatrix<double> m(static_cast<Eigen::Index>(n),
                        static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = normal(rng);
  }
  ModelArtifact a;
  a.matrix = PruneMagnitude(m, keep);
  for (std::size_t i = 0; i < n; ++i) a.vocab.push_back(fmt::format("i{}", i));
  a.meta.hyper.keep_ratio = keep;
  a.meta.created_at = UtcTimestamp();
  a.meta.extra["note"] = "random";
  return a;
}

bool SameArtifact(const ModelArtifact& a, const ModelArtifact& b) {
  return a.matrix.n == b.matrix.n && a.matrix.row_ptr == b.matrix.row_ptr &&
         a.matrix.cols == b.matrix.cols && a.matrix.values == b.matrix.values &&
         a.vocab == b.vocab && a.meta.hyper.ToJson() == b.meta.hyper.ToJson() &&
         a.meta.composition == b.meta.composition &&
         a.meta.kstep == b.meta.kstep &&
         a.meta.transition == b.meta.transition &&
         a.meta.teleportation == b.meta.teleportation &&
         a.meta.created_at == b.meta.created_at && a.meta.extra == b.meta.extra;
}

std::string DecodeError(const std::vector<std::uint8_t>& bytes) {
  try {
    DecodeMatrix(bytes);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

void PutU32(std::vector<std::uint8_t>& b, std::size_t offset, std::uint32_t v) {
  for (int i = 0; i < 4; ++i)
    b[offset + i] = static_cast<std::uint8_t>(v >> (8 * i));
}

Outcome SerializationRoundTrips() {
  std::mt19937_64 rng(909);
  testing::TempDir dir;
  int exact = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const ModelArtifact a = RandomArtifact(
        4 + 7 * static_cast<std::size_t>(trial), 0.02 + 0.049 * trial, rng);
    const auto prefix = dir.path() / fmt::format("m{}", trial);
    SaveModel(a, prefix);
    exact += SameArtifact(a, LoadModel(prefix)) ? 1 : 0;
  }

  const ModelArtifact base = RandomArtifact(8, 0.5, rng);
  const std::vector<std::uint8_t> good = EncodeMatrix(base.matrix);
  struct Case {
    const char* name;
    std::vector<std::uint8_t> bytes;
    std::string expected;
  };
  std::vector<Case> cases;
  {
    auto b = good;
    b[1] = '?';
    cases.push_back({"magic", b, "bad magic at offset 0"});
  }
  {
    auto b = good;
    PutU32(b, 4, 99);
    cases.push_back({"version", b, "version mismatch"});
  }
  cases.push_back(
      {"header", {good.begin(), good.begin() + 20}, "truncated header"});
  {
    auto b = good;
    b.resize(b.size() - 3);
    cases.push_back(
        {"records", b, fmt::format("at offset {}", good.size() - 12)});
  }
  {
    auto b = good;
    b.push_back(1);
    cases.push_back({"trailing", b, "trailing bytes"});
  }
  {
    auto b = good;
    std::swap_ranges(b.begin() + 24, b.begin() + 36, b.begin() + 36);
    cases.push_back({"order", b, "unsorted triples at offset 36"});
  }
  {
    auto b = good;
    PutU32(b, 24 + 12 * 2 + 4, 1000);
    cases.push_back({"index", b, "out of range"});
  }
  {
    auto b = good;
    PutU32(b, 24 + 12 * 3 + 8, 0x7fc00000u);  // NaN
    cases.push_back(
        {"nan", b,
         fmt::format("non-finite value at offset {}", 24 + 12 * 3 + 8)});
  }
  std::string failures;
  for (const auto& c : cases) {
    const std::string msg = DecodeError(c.bytes);
    if (msg.find(c.expected) == std::string::npos) {
      failures += fmt::format(" {}('{}')", c.name, msg);
    }
  }
  return {exact == 20 && failures.empty(),
          fmt::format(
              "{}/20 exact round trips, {}/{} corruptions diagnosed{}", exact,
              cases.size() - std::count(failures.begin(), failures.end(), '('),
              cases.size(), failures)};
}

Outcome MetricScenariosMatch() {
  const auto scenarios = testing::MetricScenarios();
  int matched = 0;
  std::string failures;
  for (const auto& s : scenarios) {
    const std::string diff =
        testing::CompareScenario(s, testing::RunScenario(s));
    if (diff.empty()) {
      ++matched;
    } else {
      failures += fmt::format(" {}: {};", s.name, diff);
    }
  }
  return {matched == 25 && scenarios.size() == 25,
          fmt::format("{}/{} scenarios exact{}", matched, scenarios.size(),
                      failures)};
}

// Driver ---------------------------------------------------------------------

bool Report(int id, const char* name, const std::function<Outcome()>& check) {
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, fmt::format("error: {}", e.what())};
  }
  fmt::print("criterion {:>2} [{}]: {}  {}\n", id, name,
             o.pass ? "PASS" : "FAIL", o.detail);
  std::fflush(stdout);
  return o.pass;
}

int Main() {
  SetWarningsMuted(true);
  bool ok = true;
  ok &=
      Report(1, "transition solver vs ridge oracle", SolverMatchesRidgeOracle);
  ok &= Report(2, "teleportation vs EASE", TeleportationMatchesEase);
  ok &= Report(3, "power method vs closed expansion",
               PowerMethodMatchesExpansion);

  std::vector<Corpus> corpora;
  std::vector<SeedRun> runs;
  std::string synthetic_error;
  try {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      corpora.push_back(MakeCorpus(seed));
      runs.push_back(RunSeed(corpora.back(), seed == 1));
    }
  } catch (const std::exception& e) {
    synthetic_error = e.what();
  }
  auto synthetic = [&](auto check) -> std::function<Outcome()> {
    return [&, check]() -> Outcome {
      if (runs.size() < 3)
        return {false, "synthetic run failed: " + synthetic_error};
      return check();
    };
  };
  ok &= Report(4, "convergence in few steps",
               synthetic([&] { return ConvergesInFewSteps(runs[0]); }));
  ok &= Report(5, "pruning robustness",
               synthetic([&] { return PruningIsRobust(runs[0], corpora[0]); }));
  ok &= Report(6, "RWR vs k-step",
               synthetic([&] { return RwrBeatsKStep(runs[0], corpora[0]); }));
  ok &= Report(7, "ablation ordering",
               synthetic([&] { return AblationOrdering(runs); }));
  runs.clear();
  corpora.clear();

  const char* digi = std::getenv("SWALK_DIGI1_EVENTS");
  if (digi != nullptr && *digi != '\0') {
    ok &= Report(8, "DIGI1 benchmark", [&] { return Benchmark(digi); });
  } else {
    fmt::print(
        "criterion  8 [DIGI1 benchmark]: SKIP  SWALK_DIGI1_EVENTS not "
        "set\n");
  }
  ok &= Report(9, "serialization", SerializationRoundTrips);
  ok &= Report(10, "metric scenarios", MetricScenariosMatch);
  return ok ? 0 : 1;
}

}  // namespace
}  // namespace swalk

int main() { return swalk::Main(); }
