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

#include "swalk/linear_models.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "swalk/error.h"

namespace swalk {

DenseMatrix<double> DenseGram(const SparseMatrix& w) {
  const Eigen::Index n = w.cols();
  DenseMatrix<double> gram = DenseMatrix<double>::Zero(n, n);
  for (Eigen::Index r = 0; r < w.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator a(w, r); a; ++a) {
      double* out = gram.row(a.col()).data();
      const double va = a.value();
      for (SparseMatrix::InnerIterator b(w, r); b; ++b) {
        out[b.col()] += va * b.value();
      }
    }
  }
  return gram;
}

DenseMatrix<double> DenseCross(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows() != b.rows()) {
    throw NumericError(
        fmt::format("row count mismatch: {} vs {}", a.rows(), b.rows()));
  }
  DenseMatrix<double> cross = DenseMatrix<double>::Zero(a.cols(), b.cols());
  for (Eigen::Index r = 0; r < a.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator ia(a, r); ia; ++ia) {
      double* out = cross.row(ia.col()).data();
      const double va = ia.value();
      for (SparseMatrix::InnerIterator ib(b, r); ib; ++ib) {
        out[ib.col()] += va * ib.value();
      }
    }
  }
  return cross;
}

namespace {

DenseMatrix<double> RidgeGram(const SparseMatrix& w, double lambda) {
  if (!(lambda > 0) || !std::isfinite(lambda)) {
    throw ConfigError(fmt::format("lambda must be > 0, got {}", lambda));
  }
  DenseMatrix<double> gram = DenseGram(w);
  gram.diagonal().array() += lambda;
  return gram;
}

}  // namespace

// llt_ factors gram_ in place; gram_ is declared first so it is ready.
RegularizedGram::RegularizedGram(const SparseMatrix& weighted, double lambda)
    : lambda_(lambda), gram_(RidgeGram(weighted, lambda)), llt_(gram_) {
  if (llt_.info() != Eigen::Success) {
    throw NumericError("regularized Gram matrix is not positive definite");
  }
}

void RegularizedGram::SolveInPlace(DenseMatrix<double>& rhs) const {
  if (rhs.rows() != gram_.rows()) {
    throw NumericError(fmt::format("solve dimension mismatch: {} vs {}",
                                   rhs.rows(), gram_.rows()));
  }
  llt_.solveInPlace(rhs);
}

DenseMatrix<double> RegularizedGram::Inverse() const {
  DenseMatrix<double> inverse =
      DenseMatrix<double>::Identity(gram_.rows(), gram_.cols());
  llt_.solveInPlace(inverse);
  return inverse;
}

Eigen::VectorXd RegularizedGram::DiagonalOfInverse() const {
  DenseMatrix<double> l_inv =
      DenseMatrix<double>::Identity(gram_.rows(), gram_.cols());
  llt_.matrixL().solveInPlace(l_inv);
  return l_inv.colwise().squaredNorm().transpose();
}

DenseMatrix<double> SolveTransition(const SparseMatrix& past,
                                    const SparseMatrix& future, double lambda) {
  if (past.rows() != future.rows() || past.cols() != future.cols()) {
    throw NumericError(fmt::format("past/future shape mismatch: {}x{} vs {}x{}",
                                   past.rows(), past.cols(), future.rows(),
                                   future.cols()));
  }
  const RegularizedGram gram(past, lambda);
  DenseMatrix<double> b = DenseCross(past, future);
  gram.SolveInPlace(b);
  return b;
}

DenseMatrix<double> SolveTeleportation(const SparseMatrix& x, double lambda,
                                       double xi) {
  if (!(xi >= 0)) throw ConfigError(fmt::format("xi must be >= 0, got {}", xi));
  const RegularizedGram gram(x, lambda);
  DenseMatrix<double> b = gram.Inverse();
  const Eigen::Index n = b.rows();
  Eigen::VectorXd gamma(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double p_jj = b(j, j);
    gamma[j] = (1.0 - lambda * p_jj <= xi) ? lambda : (1.0 - xi) / p_jj;
  }
  // B = I - P diag(gamma), in place.
  for (Eigen::Index i = 0; i < n; ++i) {
    auto row = b.row(i);
    row.array() *= -gamma.transpose().array();
    row[i] += 1.0;
  }
  return b;
}

template <typename Scalar>
DenseMatrix<Scalar> ClampNonnegative(DenseMatrix<Scalar> b) {
  b = b.cwiseMax(Scalar(0));
  return b;
}

template <typename Scalar>
DenseMatrix<Scalar> RowNormalize(DenseMatrix<Scalar> b) {
  for (Eigen::Index i = 0; i < b.rows(); ++i) {
    auto row = b.row(i);
    const Scalar sum = row.sum();
    if (sum > Scalar(0)) {
      row /= sum;
    } else {
      row.setZero();
      row[i] = Scalar(1);
    }
  }
  return b;
}

template <typename Scalar>
DenseMatrix<Scalar> MixSelfLoop(DenseMatrix<Scalar> t, double beta) {
  if (!(beta > 0 && beta <= 1)) {
    throw ConfigError(fmt::format("beta must be in (0, 1], got {}", beta));
  }
  if (beta == 1.0) return t;
  t *= static_cast<Scalar>(beta);
  t.diagonal().array() += static_cast<Scalar>(1.0 - beta);
  return t;
}

DenseMatrix<double> BaselineAr(const SparseMatrix& x) {
  DenseMatrix<double> counts = DenseGram(x);
  counts.diagonal().setZero();
  return counts;
}

DenseMatrix<double> BaselineSr(const SessionDataset& ds, int window) {
  if (window < 1) {
    throw ConfigError(fmt::format("SR window must be >= 1, got {}", window));
  }
  const auto n = static_cast<Eigen::Index>(ds.num_items());
  DenseMatrix<double> rules = DenseMatrix<double>::Zero(n, n);
  for (const auto& s : ds.sessions) {
    const std::size_t len = s.size();
    for (std::size_t p = 0; p < len; ++p) {
      const std::size_t last = std::min(len - 1, p + window);
      for (std::size_t q = p + 1; q <= last; ++q) {
        rules(s[p], s[q]) += 1.0 / static_cast<double>(q - p);
      }
    }
  }
  return rules;
}

template <typename Scalar>
double StochasticDeviation(const DenseMatrix<Scalar>& m) {
  double worst = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const auto row = m.row(i);
    const double sum = row.template cast<double>().sum();
    worst = std::max(worst, std::abs(sum - 1.0));
    worst = std::max(worst, -static_cast<double>(row.minCoeff()));
  }
  return worst;
}

template DenseMatrix<float> ClampNonnegative(DenseMatrix<float>);
template DenseMatrix<double> ClampNonnegative(DenseMatrix<double>);
template DenseMatrix<float> RowNormalize(DenseMatrix<float>);
template DenseMatrix<double> RowNormalize(DenseMatrix<double>);
template DenseMatrix<float> MixSelfLoop(DenseMatrix<float>, double);
template DenseMatrix<double> MixSelfLoop(DenseMatrix<double>, double);
template double StochasticDeviation(const DenseMatrix<float>&);
template double StochasticDeviation(const DenseMatrix<double>&);

}  // namespace swalk
