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

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "bregman/learn/train.hpp"

namespace bregman::learn {

/// Held-out score of a model; larger is better.
using ComparisonMetric =
    std::function<double(const MaxAffineModeld&, const Eigen::MatrixXd&, const QuadrupletSet&)>;

struct CrossValidationResult {
  double best_lambda = 0.0;
  std::vector<double> grid;
  std::vector<std::vector<double>> fold_scores;  // [grid point][fold]
  std::vector<double> mean_scores;
  int failed_fits = 0;  // fits that raised TrainingError; scored 0
};

/// Splits the comparisons (not the points) into cfg.folds seeded folds,
/// trains on all but one and scores the held-out fold for each lambda of
/// cfg.lambda_grid. Ties go to the smaller lambda. The default metric is
/// satisfaction_rate.
CrossValidationResult cross_validate(const Eigen::MatrixXd& X, const QuadrupletSet& S,
                                     const TrainConfig& cfg, ComparisonMetric metric = {});

struct GeneralizationReport {
  double test_error = 0.0;   // 1 - satisfaction_rate on the test comparisons
  double train_hinge = 0.0;  // mean hinge over the training comparisons
  std::array<double, 3> bound_terms{};
  double bound = 0.0;
  bool within_bound = false;
  double R = 0.0;  // max infinity norm of the data
  Index m = 0;
};

GeneralizationReport generalization_diagnostic(const MaxAffineModeld& model, const Eigen::MatrixXd& X,
                                               const QuadrupletSet& train, const QuadrupletSet& test,
                                               double delta = 0.05);

}  // namespace bregman::learn
