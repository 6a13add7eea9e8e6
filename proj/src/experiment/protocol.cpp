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

#include "bregman/experiment/protocol.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>
#include <stdexcept>

#include "bregman/data/splits.hpp"
#include "bregman/learn/cross_validate.hpp"
#include "bregman/tasks/clustering.hpp"

namespace bregman::experiment {

namespace {

enum Stream : std::uint64_t { kSplit = 1, kTriplets, kLambda, kClustering };

Eigen::MatrixXd rows_of(const Eigen::MatrixXd& X, const std::vector<Index>& rows) {
  Eigen::MatrixXd out(static_cast<Index>(rows.size()), X.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) out.row(static_cast<Index>(k)) = X.row(rows[k]);
  return out;
}

std::vector<int> labels_of(const std::vector<int>& y, const std::vector<Index>& rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (Index r : rows) out.push_back(y[r]);
  return out;
}

}  // namespace

TaskScores evaluate_tasks(const MaxAffineModeld& model, const Eigen::MatrixXd& X_train,
                          const std::vector<int>& y_train, const Eigen::MatrixXd& X_test,
                          const std::vector<int>& y_test, int classes, std::uint64_t seed,
                          const TaskSettings& settings) {
  if (X_test.rows() != static_cast<Index>(y_test.size()) ||
      X_train.rows() != static_cast<Index>(y_train.size())) {
    throw std::invalid_argument("labels and points differ in count");
  }
  if (X_test.rows() < 2) throw std::invalid_argument("task evaluation needs at least two test points");
  TaskScores s;
  const Index k = std::min<Index>(classes, X_test.rows());
  const auto clusters = tasks::bregman_kmeans(model, X_test, k, seed, settings.kmeans_restarts);
  std::vector<Index> truth(y_test.begin(), y_test.end());
  s.rand_index = tasks::rand_index(clusters.assignment, truth);
  s.purity = tasks::purity(clusters.assignment, y_test);

  const auto ranking = tasks::rank_all(model, X_test, y_test, settings.order);
  s.auc = ranking.mean_auc;
  s.ave_p = ranking.mean_ave_p;
  s.excluded_queries = ranking.excluded;

  if (X_train.rows() > 0) {
    const Index kn = std::min<Index>(settings.k_neighbors, X_train.rows());
    s.knn_acc = tasks::knn_classify(model, X_train, y_train, X_test, y_test, kn, settings.order);
  }
  return s;
}

RepeatRecord run_repeat(const data::LabeledDataset& ds, const ProtocolConfig& cfg, int repeat) {
  if (!ds.labeled()) throw std::invalid_argument("the protocol needs a labeled data set");
  if (cfg.folds < 2) throw std::invalid_argument("the protocol needs at least 2 folds");
  if (repeat < 0) throw std::invalid_argument("repeat index must be >= 0");
  const auto start = std::chrono::steady_clock::now();

  RepeatRecord rec;
  rec.repeat = repeat;
  rec.seed = cfg.seed + static_cast<std::uint64_t>(repeat);
  rec.test_fold = repeat % cfg.folds;

  const auto folds = data::split_folds(ds.size(), cfg.folds, derive_seed(rec.seed, kSplit));
  std::vector<Index> train_rows;
  for (int f = 0; f < cfg.folds; ++f) {
    if (f != rec.test_fold) train_rows.insert(train_rows.end(), folds[f].begin(), folds[f].end());
  }
  std::sort(train_rows.begin(), train_rows.end());
  const std::vector<Index>& test_rows = folds[rec.test_fold];

  const std::vector<int> ids = ds.label_ids();
  const int classes = static_cast<int>(ds.classes().size());
  const data::LabeledDataset train = ds.subset(train_rows);
  const learn::QuadrupletSet S =
      data::sample_triplets(train, cfg.triplets, derive_seed(rec.seed, kTriplets));

  learn::TrainConfig tc = cfg.train;
  tc.seed = derive_seed(rec.seed, kLambda);
  if (cfg.lambda) {
    tc.lambda = *cfg.lambda;
  } else {
    const auto cv = learn::cross_validate(train.X, S, tc);
    tc.lambda = cv.best_lambda;
    rec.failed_cv_fits = cv.failed_fits;
  }
  rec.lambda = tc.lambda;

  const learn::TrainResult fit = learn::fit_comparisons(train.X, S, tc);
  rec.planes = fit.model.planes();
  rec.lipschitz = fit.model.lipschitz();
  rec.objective = fit.objective;
  rec.iterations = fit.iterations;
  rec.status = optim::to_string(fit.status);

  rec.scores = evaluate_tasks(fit.model, train.X, labels_of(ids, train_rows), rows_of(ds.X, test_rows),
                              labels_of(ids, test_rows), classes,
                              derive_seed(rec.seed, kClustering), cfg.tasks);
  rec.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

ProtocolReport summarize(std::vector<RepeatRecord> repeats) {
  ProtocolReport rep;
  rep.repeats = std::move(repeats);
  auto column = [&](auto field) {
    std::vector<double> v;
    for (const auto& r : rep.repeats) v.push_back(r.scores.*field);
    return confidence_interval(v);
  };
  rep.rand_index = column(&TaskScores::rand_index);
  rep.purity = column(&TaskScores::purity);
  rep.auc = column(&TaskScores::auc);
  rep.ave_p = column(&TaskScores::ave_p);
  rep.knn_acc = column(&TaskScores::knn_acc);
  return rep;
}

ProtocolReport run_protocol(const data::LabeledDataset& ds, const ProtocolConfig& cfg,
                            const ProgressCallback& progress) {
  if (cfg.repeats < 1) throw std::invalid_argument("the protocol needs at least one repeat");
  std::vector<RepeatRecord> records;
  records.reserve(cfg.repeats);
  for (int r = 0; r < cfg.repeats; ++r) {
    records.push_back(run_repeat(ds, cfg, r));
    if (progress) progress(records.back());
  }
  return summarize(std::move(records));
}

}  // namespace bregman::experiment
