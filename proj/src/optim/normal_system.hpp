// Copyright 2026 The Bregman Learn Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "bregman/optim/program.hpp"

namespace bregman::optim::detail {

/// Factorizes M = A^T diag(d) A + g_weight * G^T G + diag(reg) and solves
/// with it.
///
/// Columns that touch few rows ("satellites", e.g. hinge slacks and l1
/// auxiliaries) are grouped into small independent blocks via the rows they
/// share and eliminated first; only the Schur complement on the remaining
/// core columns is factorized densely.
class NormalSystem {
 public:
  NormalSystem(const SparseRows& constraints, const SparseRows* residuals, Index num_vars,
               int satellite_max_nnz, int satellite_max_block);

  /// Returns false if the factorization failed even after raising the
  /// regularization to its cap.
  bool factor(const Eigen::VectorXd& row_weights, double residual_weight);

  /// Solves with the regularized factorization.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  /// Multiplies by the unregularized matrix, for iterative refinement.
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;

  Index core_size() const { return static_cast<Index>(core_vars_.size()); }
  Index block_count() const { return static_cast<Index>(blocks_.size()); }
  double regularization() const { return reg_scale_; }
  /// Factorizations attempted so far, including retries.
  long attempts() const { return attempts_; }

 private:
  struct Block {
    std::vector<Index> vars;       // global variable ids
    std::vector<Index> core;       // dense-core positions touched by the block's rows
    std::vector<Index> a_rows;
    std::vector<Index> g_rows;
    Eigen::LLT<Eigen::MatrixXd> chol;
    Eigen::MatrixXd coupling;      // vars x core
  };

  bool try_factor(double reg_scale);
  void add_row_to_block(const std::vector<Index>& core_local,
                        std::span<const Index> cols, std::span<const double> vals, double w,
                        Eigen::MatrixXd& mbb, Eigen::MatrixXd& mbc, Eigen::MatrixXd& mcc) const;

  const SparseRows& a_;
  const SparseRows* g_;
  Index n_;

  std::vector<int> block_of_;   // -1 for core variables
  std::vector<Index> local_;    // position inside block or dense core
  std::vector<Index> core_vars_;
  std::vector<Index> core_a_rows_;
  std::vector<Index> core_g_rows_;
  std::vector<Block> blocks_;

  Eigen::VectorXd weights_;
  double residual_weight_ = 0.0;
  Eigen::VectorXd diag_;
  Eigen::VectorXd reg_;
  double reg_scale_ = 0.0;
  long attempts_ = 0;

  Eigen::MatrixXd schur_;
  Eigen::LLT<Eigen::MatrixXd> schur_chol_;
};

}  // namespace bregman::optim::detail
