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
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bregman/data/synthetic.hpp"
#include "bregman/learn/train.hpp"

namespace bregman::experiment {

using Index = Eigen::Index;

/// Least-squares Mahalanobis fit min_{M >= 0} sum_t ((x_i - x_j)^T M (x_i - x_j) - y_t)^2
/// by accelerated projected gradient on the positive semidefinite cone.
struct MahalanobisFit {
  Eigen::MatrixXd M;
  double train_mse = 0.0;
  int iterations = 0;
  bool converged = false;
};

MahalanobisFit fit_mahalanobis(const Eigen::MatrixXd& X, const learn::RegressionSet& S,
                               int max_iterations = 20000, double tolerance = 1e-12);

double mahalanobis_divergence(const Eigen::MatrixXd& M, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& y);

struct RegressionStudyConfig {
  data::GeneratorKind kind = data::GeneratorKind::kl_dirichlet;
  std::vector<Index> schedule{20, 80, 320};  // training points; every ordered pair is used
  int seeds = 10;
  std::uint64_t seed = 0;
  double sigma = 0.05;
  Index test_points = 1000;
  learn::TrainConfig train;  // lipschitz_cap stays infinite unless set
};

struct RegressionStudyRow {
  Index points = 0;
  Index pairs = 0;
  int seed_index = 0;
  std::uint64_t seed = 0;
  double pbdl_mse = 0.0;
  double mahalanobis_mse = 0.0;
  double pbdl_train_mse = 0.0;
  std::string pbdl_status;
  double seconds = 0.0;
};

struct RegressionStudyReport {
  std::vector<RegressionStudyRow> rows;
  std::vector<Index> schedule;
  std::vector<double> pbdl_median;  // per schedule entry, over seeds
  std::vector<double> mahalanobis_median;
};

/// Seed s draws max(schedule) training points once and trains on all
/// ordered pairs of the first m of them for every m, with noisy targets.
/// Test error is the mean squared error against noiseless divergences over
/// all ordered pairs of `test_points` fresh points.
RegressionStudyReport run_regression_study(const RegressionStudyConfig& cfg);

/// Mean of (f(x_i, x_j) - D(x_i, x_j))^2 over ordered pairs i != j of the rows of X.
double pairwise_test_mse(const data::SyntheticSpec& spec, const Eigen::MatrixXd& X,
                         const MaxAffineModeld& model);
double pairwise_test_mse(const data::SyntheticSpec& spec, const Eigen::MatrixXd& X,
                         const Eigen::MatrixXd& M);

}  // namespace bregman::experiment
