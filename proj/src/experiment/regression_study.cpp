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

#include "bregman/experiment/regression_study.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "bregman/experiment/summary.hpp"

namespace bregman::experiment {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

enum Stream : std::uint64_t { kTrain = 1, kTest };

MatrixXd project_psd(const MatrixXd& A) {
  const MatrixXd sym = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym);
  const VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

VectorXd outer_features(const VectorXd& diff) {
  const Index d = diff.size();
  VectorXd f(d * d);
  for (Index c = 0; c < d; ++c) {
    for (Index r = 0; r < d; ++r) f(c * d + r) = diff(r) * diff(c);
  }
  return f;
}

MatrixXd true_matrix(const data::SyntheticSpec& spec, const MatrixXd& X) {
  const Index n = X.rows();
  MatrixXd D(n, n);
  for (Index i = 0; i < n; ++i) {
    const VectorXd xi = X.row(i).transpose();
    for (Index j = 0; j < n; ++j) {
      D(i, j) = i == j ? 0.0 : data::true_divergence(spec, xi, X.row(j).transpose());
    }
  }
  return D;
}

double mse_against(const MatrixXd& truth, const MatrixXd& estimate) {
  const Index n = truth.rows();
  if (n < 2) throw std::invalid_argument("test set needs at least two points");
  double total = 0.0;
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (i == j) continue;
      const double r = estimate(i, j) - truth(i, j);
      total += r * r;
    }
  }
  return total / static_cast<double>(n * (n - 1));
}

MatrixXd mahalanobis_matrix(const MatrixXd& M, const MatrixXd& X) {
  const Index n = X.rows();
  MatrixXd D(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      const VectorXd diff = (X.row(i) - X.row(j)).transpose();
      D(i, j) = diff.dot(M * diff);
    }
  }
  return D;
}

}  // namespace

double mahalanobis_divergence(const MatrixXd& M, const VectorXd& x, const VectorXd& y) {
  if (M.rows() != x.size() || M.cols() != y.size() || x.size() != y.size()) {
    throw std::invalid_argument("Mahalanobis matrix and points differ in dimension");
  }
  const VectorXd diff = x - y;
  return diff.dot(M * diff);
}

MahalanobisFit fit_mahalanobis(const MatrixXd& X, const learn::RegressionSet& S, int max_iterations,
                               double tolerance) {
  S.validate(X.rows());
  if (S.size() == 0) throw std::invalid_argument("Mahalanobis fit needs at least one pair");
  const Index d = X.cols();
  const Index p = d * d;
  const double m = static_cast<double>(S.size());

  // f(M) = (1/m) sum_t (<F_t, M> - y_t)^2 = vec(M)^T G vec(M) - 2 b^T vec(M) + c
  MatrixXd G = MatrixXd::Zero(p, p);
  VectorXd b = VectorXd::Zero(p);
  double yy = 0.0;
  for (Index t = 0; t < S.size(); ++t) {
    const VectorXd f =
        outer_features((X.row(S.pairs[t].first) - X.row(S.pairs[t].second)).transpose());
    G.selfadjointView<Eigen::Lower>().rankUpdate(f, 1.0 / m);
    b += (S.targets[t] / m) * f;
    yy += S.targets[t] * S.targets[t] / m;
  }
  G = G.selfadjointView<Eigen::Lower>();
  const double lip = 2.0 * std::max(Eigen::SelfAdjointEigenSolver<MatrixXd>(G).eigenvalues().maxCoeff(),
                                    1e-300);
  auto value = [&](const VectorXd& v) { return v.dot(G * v) - 2.0 * b.dot(v) + yy; };
  auto as_matrix = [d](const VectorXd& v) { return Eigen::Map<const MatrixXd>(v.data(), d, d); };
  auto as_vector = [p](const MatrixXd& A) { return Eigen::Map<const VectorXd>(A.data(), p); };

  MahalanobisFit fit;
  VectorXd x = VectorXd::Zero(p), x_prev = x, yk = x;
  double theta = 1.0, f_prev = value(x);
  for (int it = 1; it <= max_iterations; ++it) {
    const VectorXd grad = 2.0 * (G * yk - b);
    const MatrixXd next = project_psd(as_matrix(yk - grad / lip));
    x_prev = x;
    x = as_vector(next);
    const double f = value(x);
    fit.iterations = it;
    const double change = (x - x_prev).norm();
    if (change <= tolerance * std::max(1.0, x.norm())) {
      fit.converged = true;
      break;
    }
    if (f > f_prev) {
      // adaptive restart of the momentum
      theta = 1.0;
      yk = x;
    } else {
      const double theta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
      yk = x + ((theta - 1.0) / theta_next) * (x - x_prev);
      theta = theta_next;
    }
    f_prev = f;
  }
  fit.M = as_matrix(x);
  fit.M = 0.5 * (fit.M + fit.M.transpose()).eval();
  fit.train_mse = std::max(0.0, value(x));
  return fit;
}

double pairwise_test_mse(const data::SyntheticSpec& spec, const MatrixXd& X,
                         const MaxAffineModeld& model) {
  return mse_against(true_matrix(spec, X), divergence_matrix(model, X, X));
}

double pairwise_test_mse(const data::SyntheticSpec& spec, const MatrixXd& X, const MatrixXd& M) {
  return mse_against(true_matrix(spec, X), mahalanobis_matrix(M, X));
}

RegressionStudyReport run_regression_study(const RegressionStudyConfig& cfg) {
  if (cfg.schedule.empty()) throw std::invalid_argument("schedule is empty");
  if (cfg.seeds < 1) throw std::invalid_argument("at least one seed is needed");
  if (cfg.test_points < 2) throw std::invalid_argument("test set needs at least two points");
  for (Index m : cfg.schedule) {
    if (m < 2) throw std::invalid_argument("every schedule entry needs at least two points");
  }
  const Index largest = *std::max_element(cfg.schedule.begin(), cfg.schedule.end());

  RegressionStudyReport rep;
  rep.schedule = cfg.schedule;
  std::vector<std::vector<double>> pbdl(cfg.schedule.size()), maha(cfg.schedule.size());

  for (int s = 0; s < cfg.seeds; ++s) {
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(s);
    data::SyntheticSpec spec;
    spec.kind = cfg.kind;
    spec.sigma = cfg.sigma;
    spec.n = largest;
    spec.seed = derive_seed(seed, kTrain);
    const data::SyntheticData train = data::generate_synthetic(spec);

    data::SyntheticSpec test_spec = spec;
    test_spec.n = cfg.test_points;
    test_spec.seed = derive_seed(seed, kTest);
    const MatrixXd X_test = data::sample_points(test_spec);
    const MatrixXd truth = true_matrix(spec, X_test);

    for (std::size_t k = 0; k < cfg.schedule.size(); ++k) {
      const auto start = std::chrono::steady_clock::now();
      const Index m = cfg.schedule[k];
      learn::RegressionSet S;
      S.sigma = cfg.sigma;
      for (Index t = 0; t < train.pairs.size(); ++t) {
        const auto& pr = train.pairs.pairs[t];
        if (pr.first < m && pr.second < m) {
          S.pairs.push_back(pr);
          S.targets.push_back(train.pairs.targets[t]);
        }
      }
      const MatrixXd X = train.X.topRows(m);

      RegressionStudyRow row;
      row.points = m;
      row.pairs = S.size();
      row.seed_index = s;
      row.seed = seed;
      const learn::TrainResult fit = learn::fit_regression(X, S, cfg.train);
      row.pbdl_train_mse = fit.train_loss;
      row.pbdl_status = optim::to_string(fit.status);
      row.pbdl_mse = mse_against(truth, divergence_matrix(fit.model, X_test, X_test));
      const MahalanobisFit base = fit_mahalanobis(X, S);
      row.mahalanobis_mse = mse_against(truth, mahalanobis_matrix(base.M, X_test));
      row.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      pbdl[k].push_back(row.pbdl_mse);
      maha[k].push_back(row.mahalanobis_mse);
      rep.rows.push_back(row);
    }
  }
  for (std::size_t k = 0; k < cfg.schedule.size(); ++k) {
    rep.pbdl_median.push_back(median(pbdl[k]));
    rep.mahalanobis_median.push_back(median(maha[k]));
  }
  return rep;
}

}  // namespace bregman::experiment
