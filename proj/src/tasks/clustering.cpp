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


#include "bregman/tasks/clustering.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace bregman::tasks {

ClusteringResult bregman_kmeans_from(const MaxAffineModeld& model, const Eigen::MatrixXd& X,
                                     const Eigen::MatrixXd& initial_centers, int max_iterations) {
  const Index n = X.rows();
  const Index k = initial_centers.rows();
  if (k < 1 || k > n) {
    std::ostringstream os;
    os << "cluster count " << k << " must lie in [1, " << n << "]";
    throw std::invalid_argument(os.str());
  }
  if (initial_centers.cols() != X.cols()) throw std::invalid_argument("center dimension mismatch");

  const auto points = evaluate_rows(model, X);
  ClusteringResult res;
  res.centers = initial_centers;
  res.assignment.assign(n, -1);
  std::vector<double> div(n, 0.0);

  for (int iter = 0; iter < max_iterations; ++iter) {
    const auto reps = evaluate_rows(model, res.centers);
    bool changed = false;
    double objective = 0.0;
    for (Index i = 0; i < n; ++i) {
      Index best = 0;
      double best_d = cached_divergence(model, points, i, reps, 0);
      for (Index c = 1; c < k; ++c) {
        const double d = cached_divergence(model, points, i, reps, c);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (best != res.assignment[i]) changed = true;
      res.assignment[i] = best;
      div[i] = best_d;
      objective += best_d;
    }
    res.history.push_back(objective);
    res.objective = objective;
    res.iterations = iter + 1;
    if (!changed && iter > 0) break;

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, X.cols());
    std::vector<Index> counts(k, 0);
    for (Index i = 0; i < n; ++i) {
      sums.row(res.assignment[i]) += X.row(i);
      ++counts[res.assignment[i]];
    }
    for (Index c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        res.centers.row(c) = sums.row(c) / static_cast<double>(counts[c]);
        continue;
      }
      const Index far = static_cast<Index>(std::max_element(div.begin(), div.end()) - div.begin());
      res.centers.row(c) = X.row(far);
      div[far] = -1.0;
    }
  }
  return res;
}

ClusteringResult bregman_kmeans(const MaxAffineModeld& model, const Eigen::MatrixXd& X, Index k,
                                std::uint64_t seed, int restarts, int max_iterations) {
  const Index n = X.rows();
  if (k < 1 || k > n) {
    std::ostringstream os;
    os << "cluster count " << k << " must lie in [1, " << n << "]";
    throw std::invalid_argument(os.str());
  }
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  std::mt19937_64 rng(seed);
  std::vector<Index> order(n);
  ClusteringResult best;
  for (int r = 0; r < restarts; ++r) {
    std::iota(order.begin(), order.end(), Index{0});
    std::shuffle(order.begin(), order.end(), rng);
    Eigen::MatrixXd init(k, X.cols());
    for (Index c = 0; c < k; ++c) init.row(c) = X.row(order[c]);
    ClusteringResult run = bregman_kmeans_from(model, X, init, max_iterations);
    run.restart = r;
    if (r == 0 || run.objective < best.objective) best = std::move(run);
  }
  return best;
}

double rand_index(const std::vector<Index>& a, const std::vector<Index>& b) {
  if (a.size() != b.size()) {
    std::ostringstream os;
    os << "partitions have different lengths (" << a.size() << " vs " << b.size() << ")";
    throw std::invalid_argument(os.str());
  }
  const std::size_t n = a.size();
  if (n < 2) return 1.0;
  std::size_t agree = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if ((a[i] == a[j]) == (b[i] == b[j])) ++agree;
    }
  }
  return static_cast<double>(agree) / static_cast<double>(n * (n - 1) / 2);
}

double purity(const std::vector<Index>& assignment, const std::vector<int>& labels) {
  if (assignment.size() != labels.size()) throw std::invalid_argument("purity inputs differ in length");
  if (assignment.empty()) throw std::invalid_argument("purity of an empty clustering");
  std::map<Index, std::map<int, std::size_t>> counts;
  for (std::size_t i = 0; i < labels.size(); ++i) ++counts[assignment[i]][labels[i]];
  std::size_t total = 0;
  for (const auto& [cluster, by_label] : counts) {
    std::size_t top = 0;
    for (const auto& [label, c] : by_label) top = std::max(top, c);
    total += top;
  }
  return static_cast<double>(total) / static_cast<double>(labels.size());
}

}  // namespace bregman::tasks
