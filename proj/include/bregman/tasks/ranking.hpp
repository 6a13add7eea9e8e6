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

#include "bregman/max_affine.hpp"

namespace bregman::tasks {

using Index = Eigen::Index;

/// Which argument of D the query occupies.
enum class ArgumentOrder { query_first, query_second };

struct RankingScores {
  std::vector<Index> queries;  // queries that entered the averages
  std::vector<double> auc;
  std::vector<double> ave_p;
  double mean_auc = 0.0;
  double mean_ave_p = 0.0;
  Index excluded = 0;  // queries without another member of their class
};

/// Probability that a relevant item scores lower than an irrelevant one,
/// ties counted 1/2. Lower score ranks first.
double auc_from_scores(const std::vector<double>& scores, const std::vector<bool>& relevant);
/// Mean precision at the ranks of relevant items, ranking by ascending score
/// with ties broken by position.
double average_precision(const std::vector<double>& scores, const std::vector<bool>& relevant);

/// For every query, ranks all other points by divergence and scores the
/// ranking against same-label relevance.
RankingScores rank_all(const MaxAffineModeld& model, const Eigen::MatrixXd& X,
                       const std::vector<int>& labels,
                       ArgumentOrder order = ArgumentOrder::query_first);

/// Majority label of the k nearest training points; ties go to the smallest label.
std::vector<int> knn_predict(const MaxAffineModeld& model, const Eigen::MatrixXd& X_train,
                             const std::vector<int>& y_train, const Eigen::MatrixXd& X_test,
                             Index k_neighbors = 5, ArgumentOrder order = ArgumentOrder::query_first);

double knn_classify(const MaxAffineModeld& model, const Eigen::MatrixXd& X_train,
                    const std::vector<int>& y_train, const Eigen::MatrixXd& X_test,
                    const std::vector<int>& y_test, Index k_neighbors = 5,
                    ArgumentOrder order = ArgumentOrder::query_first);

}  // namespace bregman::tasks
