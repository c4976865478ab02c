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

#ifndef SWALK_LINEAR_MODELS_H_
#define SWALK_LINEAR_MODELS_H_

#include <Eigen/Cholesky>
#include <cstddef>

#include "swalk/corpus.h"
#include "swalk/types.h"

namespace swalk {

// Cholesky factorization of (W^T W + lambda I) for a weighted interaction
// matrix W. The Gram matrix is accumulated densely and factored in place.
class RegularizedGram {
 public:
  RegularizedGram(const SparseMatrix& weighted, double lambda);
  RegularizedGram(const RegularizedGram&) = delete;
  RegularizedGram& operator=(const RegularizedGram&) = delete;

  std::size_t size() const { return static_cast<std::size_t>(gram_.rows()); }
  double lambda() const { return lambda_; }

  // rhs <- (W^T W + lambda I)^{-1} rhs
  void SolveInPlace(DenseMatrix<double>& rhs) const;
  // P = (W^T W + lambda I)^{-1}
  DenseMatrix<double> Inverse() const;
  // diag(P) from the factor: P_jj = sum_i (L^{-1})_ij^2.
  Eigen::VectorXd DiagonalOfInverse() const;

 private:
  double lambda_;
  DenseMatrix<double> gram_;  // holds the factor after construction
  Eigen::LLT<Eigen::Ref<DenseMatrix<double>>> llt_;
};

// Dense W^T W (symmetric), accumulated row by row.
DenseMatrix<double> DenseGram(const SparseMatrix& w);
// Dense A^T B for matrices with identical row counts.
DenseMatrix<double> DenseCross(const SparseMatrix& a, const SparseMatrix& b);

// argmin ||Z - Y B||_F^2 + lambda ||B||_F^2 = (Y^T Y + lambda I)^{-1} Y^T Z.
DenseMatrix<double> SolveTransition(const SparseMatrix& past,
                                    const SparseMatrix& future, double lambda);

// argmin ||X - X B||_F^2 + lambda ||B||_F^2 s.t. diag(B) <= xi, as
// I - P diag(gamma) with gamma_j = lambda if 1 - lambda P_jj <= xi and
// (1 - xi) / P_jj otherwise. xi = kInfinity lifts the bound.
DenseMatrix<double> SolveTeleportation(const SparseMatrix& x, double lambda,
                                       double xi);

template <typename Scalar>
DenseMatrix<Scalar> ClampNonnegative(DenseMatrix<Scalar> b);

// Divides each row by its sum; all-zero rows become the unit row e_i.
template <typename Scalar>
DenseMatrix<Scalar> RowNormalize(DenseMatrix<Scalar> b);

// beta * T' + (1 - beta) * I.
template <typename Scalar>
DenseMatrix<Scalar> MixSelfLoop(DenseMatrix<Scalar> t, double beta);

// Co-occurrence counts X^T X with a zeroed diagonal (not normalized).
DenseMatrix<double> BaselineAr(const SparseMatrix& x);

// Sequential rule weights: S[a][b] += 1 / (q - p) for every a at position p
// followed by b at position q with q - p <= window (not normalized).
DenseMatrix<double> BaselineSr(const SessionDataset& ds, int window = 10);

// Largest |row sum - 1| and most negative entry; used by input checks.
template <typename Scalar>
double StochasticDeviation(const DenseMatrix<Scalar>& m);

}  // namespace swalk

#endif  // SWALK_LINEAR_MODELS_H_
