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

#include "swalk/walk.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.h"
#include "swalk/error.h"
#include "test_util.h"

namespace swalk {
namespace {

DenseMatrix<double> RandomStochastic(Eigen::Index n, std::mt19937_64& rng,
                                     double density = 0.3) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  DenseMatrix<double> m = DenseMatrix<double>::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (unit(rng) < density) m(i, j) = unit(rng);
    }
    m(i, (i + 1) % n) += 0.1;
    m.row(i) /= m.row(i).sum();
  }
  return m;
}

DenseMatrix<double> Swap() {
  DenseMatrix<double> r(2, 2);
  r << 0, 1, 1, 0;
  return r;
}

TEST(ComposeRwrTest, SwapChainConvergesToGeometricSplit) {
  const DenseMatrix<double> t = DenseMatrix<double>::Identity(2, 2);
  const auto out = ComposeRwr<double>(Swap(), t, 0.5, 1e-12, 200);
  EXPECT_TRUE(out.trace.converged);
  EXPECT_NEAR(out.m(0, 0), 2.0 / 3, 1e-10);
  EXPECT_NEAR(out.m(0, 1), 1.0 / 3, 1e-10);
  EXPECT_NEAR(out.m(1, 0), 1.0 / 3, 1e-10);
  EXPECT_NEAR(out.m(1, 1), 2.0 / 3, 1e-10);
}

TEST(ComposeRwrTest, SingleStepIsFirstStepVariant) {
  std::mt19937_64 rng(1);
  const auto r = RandomStochastic(12, rng);
  const auto t = RandomStochastic(12, rng);
  testing::QuietScope quiet;
  const auto out = ComposeRwr<double>(r, t, 0.3, 1e-12, 1);
  EXPECT_EQ(out.trace.steps_taken, 1);
  EXPECT_LE((out.m - (0.3 * r + 0.7 * t)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ComposeRwrTest, MatchesClosedExpansionForEveryStepCount) {
  std::mt19937_64 rng(7);
  for (double alpha : {0.3, 0.5, 0.7}) {
    const auto r = RandomStochastic(15, rng);
    const auto t = RandomStochastic(15, rng);
    testing::QuietScope quiet;
    for (int k = 1; k <= 6; ++k) {
      const auto out = ComposeRwr<double>(r, t, alpha, 1e-300, k);
      const auto want =
          oracle::RwrExpansion(oracle::ToGrid(r), oracle::ToGrid(t), alpha, k);
      EXPECT_LE(oracle::MaxAbsDiff(oracle::ToGrid(out.m), want), 1e-10)
          << "alpha=" << alpha << " k=" << k;
    }
  }
}

TEST(ComposeRwrTest, ResidualsDecayGeometrically) {
  std::mt19937_64 rng(3);
  const auto r = RandomStochastic(40, rng);
  const auto t = RandomStochastic(40, rng);
  const double alpha = 0.5;
  const auto out = ComposeRwr<double>(r, t, alpha, 1e-10, 60);
  ASSERT_TRUE(out.trace.converged);
  const auto& res = out.trace.residuals;
  for (std::size_t k = 1; k < res.size(); ++k) {
    EXPECT_LE(res[k], alpha * 1.1 * res[k - 1]);
    EXPECT_LT(res[k], res[k - 1]);
  }
  EXPECT_LE(res.back(), 1e-10);
}

TEST(ComposeRwrTest, RowsStayStochastic) {
  std::mt19937_64 rng(9);
  const auto r = RandomStochastic(30, rng);
  const auto t = RandomStochastic(30, rng);
  const auto out = ComposeRwr<double>(r, t, 0.7, 1e-3 * 30, 10);
  EXPECT_LE((out.m.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-6);
  EXPECT_GE(out.m.minCoeff(), 0.0);
}

TEST(ComposeRwrTest, IsDeterministic) {
  std::mt19937_64 rng(12);
  const auto r = RandomStochastic(50, rng);
  const auto t = RandomStochastic(50, rng);
  const auto a =
      ComposeRwr<float>(r.cast<float>(), t.cast<float>(), 0.5, 0.05, 10);
  const auto b =
      ComposeRwr<float>(r.cast<float>(), t.cast<float>(), 0.5, 0.05, 10);
  EXPECT_EQ(a.m, b.m);
  EXPECT_EQ(a.trace.residuals, b.trace.residuals);
}

TEST(ComposeRwrTest, NonStochasticInputIsRejected) {
  DenseMatrix<double> bad = Swap();
  bad(0, 1) = 0.9;
  const DenseMatrix<double> t = DenseMatrix<double>::Identity(2, 2);
  try {
    ComposeRwr<double>(bad, t, 0.5, 1e-6, 10);
    FAIL() << "expected NumericError";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNumeric);
  }
  DenseMatrix<double> negative = Swap();
  negative(0, 0) = -0.5;
  negative(0, 1) = 1.5;
  EXPECT_THROW(ComposeRwr<double>(negative, t, 0.5, 1e-6, 10), Error);
}

TEST(ComposeRwrTest, StepCapIsNotAnError) {
  std::mt19937_64 rng(4);
  const auto r = RandomStochastic(10, rng);
  const auto t = RandomStochastic(10, rng);
  testing::QuietScope quiet;
  const auto out = ComposeRwr<double>(r, t, 0.9, 1e-14, 3);
  EXPECT_FALSE(out.trace.converged);
  EXPECT_EQ(out.trace.steps_taken, 3);
  EXPECT_EQ(out.trace.residuals.size(), 3u);
}

TEST(ComposeKStepTest, Examples) {
  std::mt19937_64 rng(6);
  const auto r = RandomStochastic(9, rng);
  EXPECT_EQ(ComposeKStep<double>(r, 1), r);
  EXPECT_EQ(ComposeKStep<double>(Swap(), 2),
            (DenseMatrix<double>::Identity(2, 2)));
  EXPECT_LE((ComposeKStep<double>(r, 3) - r * r * r).cwiseAbs().maxCoeff(),
            1e-14);
  EXPECT_THROW(ComposeKStep<double>(r, 0), Error);
}

TEST(WalkTraceTest, JsonCarriesResiduals) {
  std::mt19937_64 rng(8);
  const auto r = RandomStochastic(6, rng);
  const auto out = ComposeRwr<double>(r, r, 0.5, 1e-3, 10);
  const auto j = out.trace.ToJson();
  EXPECT_EQ(j.at("steps").get<int>(), out.trace.steps_taken);
  EXPECT_EQ(j.at("residuals").size(), out.trace.residuals.size());
  EXPECT_EQ(j.at("converged").get<bool>(), out.trace.converged);
}

}  // namespace
}  // namespace swalk
