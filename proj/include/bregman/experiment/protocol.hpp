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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bregman/data/dataset.hpp"
#include "bregman/experiment/summary.hpp"
#include "bregman/learn/train.hpp"
#include "bregman/tasks/ranking.hpp"

namespace bregman::experiment {

using Index = Eigen::Index;

/// Clustering, ranking and k-NN scores of one model on one test set, as
/// fractions in [0, 1].
struct TaskScores {
  double rand_index = 0.0;
  double purity = 0.0;
  double auc = 0.0;
  double ave_p = 0.0;
  double knn_acc = 0.0;
  Index excluded_queries = 0;
};

struct TaskSettings {
  Index k_neighbors = 5;
  int kmeans_restarts = 10;
  tasks::ArgumentOrder order = tasks::ArgumentOrder::query_first;
};

/// Bregman k-means on the test points with one cluster per class, ranking of
/// the test points against each other, and k-NN of test points against the
/// training points. `labels` index the classes of the full data set.
TaskScores evaluate_tasks(const MaxAffineModeld& model, const Eigen::MatrixXd& X_train,
                          const std::vector<int>& y_train, const Eigen::MatrixXd& X_test,
                          const std::vector<int>& y_test, int classes, std::uint64_t seed,
                          const TaskSettings& settings = {});

struct ProtocolConfig {
  Index triplets = 2000;
  int folds = 3;  // train on folds - 1 of them, test on the remaining one
  int repeats = 20;
  std::uint64_t seed = 0;
  std::optional<double> lambda;  // fixed lambda; unset selects it by cross-validation
  learn::TrainConfig train;      // lambda grid, CV folds, planes, solver settings
  TaskSettings tasks;
};

struct RepeatRecord {
  int repeat = 0;
  std::uint64_t seed = 0;
  int test_fold = 0;
  double lambda = 0.0;
  TaskScores scores;
  Index planes = 0;
  double lipschitz = 0.0;
  double objective = 0.0;
  int iterations = 0;
  std::string status;
  int failed_cv_fits = 0;
  double seconds = 0.0;  // wall time, reported apart from the scores
};

struct ProtocolReport {
  std::vector<RepeatRecord> repeats;
  Interval rand_index, purity, auc, ave_p, knn_acc;
};

/// Repeat r uses seed + r for the fold split, triplet sampling, the lambda
/// search and clustering, and tests on fold r mod folds.
RepeatRecord run_repeat(const data::LabeledDataset& ds, const ProtocolConfig& cfg, int repeat);

using ProgressCallback = std::function<void(const RepeatRecord&)>;

ProtocolReport run_protocol(const data::LabeledDataset& ds, const ProtocolConfig& cfg,
                            const ProgressCallback& progress = {});

ProtocolReport summarize(std::vector<RepeatRecord> repeats);

}  // namespace bregman::experiment
