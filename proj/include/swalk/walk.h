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

#ifndef SWALK_WALK_H_
#define SWALK_WALK_H_

#include <vector>

#include "json.hpp"
#include "swalk/types.h"

namespace swalk {

struct WalkTrace {
  int steps_taken = 0;
  // residuals[k-1] = ||M(k) - M(k-1)||_1, entrywise absolute sum.
  std::vector<double> residuals;
  bool converged = false;
  double epsilon = 0;

  nlohmann::json ToJson() const;
};

template <typename Scalar>
struct WalkResult {
  DenseMatrix<Scalar> m;
  WalkTrace trace;
};

// Random walk with restart by the power method:
//   M(0) = I,  M(k) = alpha * M(k-1) R + (1 - alpha) * T,
// stopping once the entrywise L1 change is <= epsilon or after max_steps.
// max_steps = 1 gives alpha R + (1 - alpha) T. Throws NumericError when R or
// T is not row-stochastic (row sums off by more than 1e-6, or negative
// entries); hitting max_steps only logs a warning.
template <typename Scalar>
WalkResult<Scalar> ComposeRwr(const DenseMatrix<Scalar>& r,
                              const DenseMatrix<Scalar>& t, double alpha,
                              double epsilon, int max_steps);

// k-step landing probabilities R^k, k >= 1.
template <typename Scalar>
DenseMatrix<Scalar> ComposeKStep(const DenseMatrix<Scalar>& r, int k);

}  // namespace swalk

#endif  // SWALK_WALK_H_
