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


#include "bregman/learn/cross_validate.hpp"

#include <algorithm>
#include <sstream>

#include "bregman/bounds.hpp"
#include "bregman/data/splits.hpp"

namespace bregman::learn {

CrossValidationResult cross_validate(const Eigen::MatrixXd& X, const QuadrupletSet& S,
                                     const TrainConfig& cfg, ComparisonMetric metric) {
  if (cfg.folds < 2) throw std::invalid_argument("cross-validation needs at least 2 folds");
  if (S.size() < cfg.folds) {
    std::ostringstream os;
    os << "cannot cross-validate " << S.size() << " comparisons over " << cfg.folds << " folds";
    throw std::invalid_argument(os.str());
  }
  if (cfg.lambda_grid.empty()) throw std::invalid_argument("lambda grid is empty");
  if (!metric) metric = satisfaction_rate;

  const auto folds = data::split_folds(S.size(), cfg.folds, cfg.seed);
  CrossValidationResult out;
  out.grid = cfg.lambda_grid;
  out.fold_scores.assign(out.grid.size(), std::vector<double>(folds.size(), 0.0));
  out.mean_scores.assign(out.grid.size(), 0.0);

  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::vector<Index> train_ids;
    for (std::size_t g = 0; g < folds.size(); ++g) {
      if (g != f) train_ids.insert(train_ids.end(), folds[g].begin(), folds[g].end());
    }
    std::sort(train_ids.begin(), train_ids.end());
    const QuadrupletSet train = S.subset(train_ids);
    const QuadrupletSet held = S.subset(folds[f]);
    for (std::size_t gi = 0; gi < out.grid.size(); ++gi) {
      TrainConfig c = cfg;
      c.lambda = out.grid[gi];
      try {
        const TrainResult fit = fit_comparisons(X, train, c);
        out.fold_scores[gi][f] = metric(fit.model, X, held);
      } catch (const TrainingError&) {
        ++out.failed_fits;
      }
    }
  }

  std::size_t best = 0;
  for (std::size_t gi = 0; gi < out.grid.size(); ++gi) {
    double sum = 0.0;
    for (double s : out.fold_scores[gi]) sum += s;
    out.mean_scores[gi] = sum / static_cast<double>(folds.size());
    const bool better = out.mean_scores[gi] > out.mean_scores[best] ||
                        (out.mean_scores[gi] == out.mean_scores[best] && out.grid[gi] < out.grid[best]);
    if (gi == 0 || better) best = gi;
  }
  out.best_lambda = out.grid[best];
  return out;
}

GeneralizationReport generalization_diagnostic(const MaxAffineModeld& model, const Eigen::MatrixXd& X,
                                               const QuadrupletSet& train, const QuadrupletSet& test,
                                               double delta) {
  if (train.empty()) throw std::invalid_argument("diagnostic needs training comparisons");
  GeneralizationReport rep;
  rep.m = train.size();
  rep.train_hinge = hinge_loss(model, X, train) / static_cast<double>(train.size());
  rep.test_error = test.empty() ? 0.0 : 1.0 - satisfaction_rate(model, X, test);
  rep.R = X.size() > 0 ? X.lpNorm<Eigen::Infinity>() : 0.0;

  BoundInputs in;
  in.R = std::max(rep.R, 1e-12);
  in.K = static_cast<double>(model.planes());
  in.d = static_cast<double>(model.dim());
  in.L = std::max(model.lipschitz(), 1e-12);
  in.m = static_cast<double>(train.size());
  in.delta = delta;
  in.empirical_loss = rep.train_hinge;
  const BoundReport b = bounds(in);
  rep.bound_terms = b.gen_bound_terms;
  rep.bound = b.gen_bound;
  rep.within_bound = rep.test_error <= rep.bound;
  return rep;
}

}  // namespace bregman::learn
