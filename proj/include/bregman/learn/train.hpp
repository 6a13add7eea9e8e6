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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bregman/interpolant.hpp"
#include "bregman/learn/partition.hpp"
#include "bregman/learn/supervision.hpp"
#include "bregman/max_affine.hpp"
#include "bregman/optim/program.hpp"

namespace bregman::learn {

/// 10^-8, 10^-7, ..., 10^4.
std::vector<double> default_lambda_grid();

struct TrainConfig {
  double lambda = 1e-3;
  std::optional<Index> planes;  // unset: one hyperplane per observed point
  int folds = 3;
  std::vector<double> lambda_grid = default_lambda_grid();
  std::uint64_t seed = 0;
  bool feature_scaling = false;
  // Regression only: fixed bound on ||a||_1. Infinite leaves slopes free.
  double lipschitz_cap = optim::kInfinity;
  optim::SolverSettings solver;
};

struct TrainResult {
  explicit TrainResult(MaxAffineModeld fitted) : model(std::move(fitted)) {}

  MaxAffineModeld model;
  std::optional<InterpolantSolutiond> interpolant;  // one-plane-per-point fits only
  std::vector<Index> anchors;  // data row behind each hyperplane (cell centers when partitioned)
  double objective = 0.0;      // optimum of the solved program
  double train_loss = 0.0;     // total hinge, or mean squared error for regression
  optim::SolveStatus status = optim::SolveStatus::optimal;
  int iterations = 0;
  std::string message;
};

/// The solver could not produce a usable model.
class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// min sum_t max(zeta_t, 0) + lambda L over z_i, a_i, L for the points used
/// by S. Rows of X are points.
TrainResult train_pbdl(const Eigen::MatrixXd& X, const QuadrupletSet& S, const TrainConfig& cfg);

/// Same objective with K shared hyperplanes; point i uses plane partition.assignment[i].
TrainResult train_pbdl_partitioned(const Eigen::MatrixXd& X, const QuadrupletSet& S,
                                   const Partition& partition, const TrainConfig& cfg);

/// min sum_t (D(x_i, x_j) - y_t)^2 over convex interpolants of the used points.
TrainResult train_regression(const Eigen::MatrixXd& X, const RegressionSet& S,
                             const TrainConfig& cfg);
TrainResult train_regression_partitioned(const Eigen::MatrixXd& X, const RegressionSet& S,
                                         const Partition& partition, const TrainConfig& cfg);

/// Dispatch on cfg.planes: K shared hyperplanes from a farthest-point
/// partition of X when K is below the number of used points, otherwise one
/// hyperplane per point.
TrainResult fit_comparisons(const Eigen::MatrixXd& X, const QuadrupletSet& S, const TrainConfig& cfg);
TrainResult fit_regression(const Eigen::MatrixXd& X, const RegressionSet& S, const TrainConfig& cfg);

/// sum_t max(0, D(i,j) - D(k,l) + margin) under the model.
double hinge_loss(const MaxAffineModeld& model, const Eigen::MatrixXd& X, const QuadrupletSet& S);
/// Differences below this fraction of the margin are treated as ties.
inline constexpr double kOrderResolution = 1e-6;

/// Fraction of comparisons with D(i,j) + kOrderResolution * margin < D(k,l).
double satisfaction_rate(const MaxAffineModeld& model, const Eigen::MatrixXd& X,
                         const QuadrupletSet& S);
double regression_mse(const MaxAffineModeld& model, const Eigen::MatrixXd& X,
                      const RegressionSet& S);

}  // namespace bregman::learn
