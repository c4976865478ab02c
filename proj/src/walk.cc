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

#include <fmt/format.h>

#include <cmath>
#include <utility>

#include "swalk/error.h"
#include "swalk/linear_models.h"
#include "swalk/log.h"

namespace swalk {
namespace {

constexpr double kStochasticTolerance = 1e-6;

template <typename Scalar>
void RequireStochastic(const DenseMatrix<Scalar>& m, const char* name) {
  if (m.rows() != m.cols()) {
    throw NumericError(
        fmt::format("{} is not square ({}x{})", name, m.rows(), m.cols()));
  }
  const double deviation = StochasticDeviation(m);
  if (!(deviation <= kStochasticTolerance)) {
    throw NumericError(fmt::format(
        "{} is not row-stochastic (deviation {:.3g})", name, deviation));
  }
}

template <typename Scalar>
double EntrywiseL1Distance(const DenseMatrix<Scalar>& a,
                           const DenseMatrix<Scalar>& b) {
  double total = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    double row = 0;
    const Scalar* pa = a.row(i).data();
    const Scalar* pb = b.row(i).data();
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      row += std::abs(static_cast<double>(pa[j]) - static_cast<double>(pb[j]));
    }
    total += row;
  }
  return total;
}

}  // namespace

nlohmann::json WalkTrace::ToJson() const {
  return {{"steps", steps_taken},
          {"residuals", residuals},
          {"converged", converged},
          {"epsilon", epsilon}};
}

template <typename Scalar>
WalkResult<Scalar> ComposeRwr(const DenseMatrix<Scalar>& r,
                              const DenseMatrix<Scalar>& t, double alpha,
                              double epsilon, int max_steps) {
  RequireStochastic(r, "transition matrix");
  RequireStochastic(t, "teleportation matrix");
  if (r.rows() != t.rows()) {
    throw NumericError(
        fmt::format("transition/teleportation size mismatch: "
                    "{} vs {}",
                    r.rows(), t.rows()));
  }
  if (!(alpha > 0 && alpha < 1)) {
    throw ConfigError(fmt::format("alpha must be in (0, 1), got {}", alpha));
  }
  if (max_steps < 1) throw ConfigError("max_steps must be >= 1");

  const auto a = static_cast<Scalar>(alpha);
  const auto restart = static_cast<Scalar>(1.0 - alpha);
  WalkResult<Scalar> out;
  out.trace.epsilon = epsilon;
  DenseMatrix<Scalar> prev = DenseMatrix<Scalar>::Identity(r.rows(), r.cols());
  DenseMatrix<Scalar> next(r.rows(), r.cols());
  for (int k = 1; k <= max_steps; ++k) {
    next.noalias() = prev * r;
    next = a * next + restart * t;
    const double residual = EntrywiseL1Distance(next, prev);
    out.trace.residuals.push_back(residual);
    out.trace.steps_taken = k;
    std::swap(prev, next);
    if (residual <= epsilon) {
      out.trace.converged = true;
      break;
    }
  }
  if (!out.trace.converged && max_steps > 1) {
    Warn(
        fmt::format("random walk did not converge in {} steps (residual "
                    "{:.4g} > epsilon {:.4g})",
                    max_steps, out.trace.residuals.back(), epsilon));
  }
  out.m = std::move(prev);
  return out;
}

template <typename Scalar>
DenseMatrix<Scalar> ComposeKStep(const DenseMatrix<Scalar>& r, int k) {
  if (k < 1) throw ConfigError(fmt::format("k must be >= 1, got {}", k));
  RequireStochastic(r, "transition matrix");
  DenseMatrix<Scalar> power = r;
  DenseMatrix<Scalar> scratch(r.rows(), r.cols());
  for (int step = 2; step <= k; ++step) {
    scratch.noalias() = power * r;
    std::swap(power, scratch);
  }
  return power;
}

template WalkResult<float> ComposeRwr(const DenseMatrix<float>&,
                                      const DenseMatrix<float>&, double, double,
                                      int);
template WalkResult<double> ComposeRwr(const DenseMatrix<double>&,
                                       const DenseMatrix<double>&, double,
                                       double, int);
template DenseMatrix<float> ComposeKStep(const DenseMatrix<float>&, int);
template DenseMatrix<double> ComposeKStep(const DenseMatrix<double>&, int);

}  // namespace swalk
