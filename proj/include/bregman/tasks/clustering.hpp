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
#include <vector>

#include <Eigen/Dense>

#include "bregman/max_affine.hpp"

namespace bregman::tasks {

using Index = Eigen::Index;

struct ClusteringResult {
  std::vector<Index> assignment;
  Eigen::MatrixXd centers;      // k x d representatives
  double objective = 0.0;       // sum_i D(x_i, mu_c(i))
  int iterations = 0;
  std::vector<double> history;  // objective after every assignment step
  int restart = 0;              // which restart produced this result
};

/// Alternates c(i) = argmin_c D(x_i, mu_c) (lowest index on ties) and
/// mu_c = mean of cell c until the assignment is stable or `max_iterations`
/// is reached. An empty cell is re-seeded at the point with the largest
/// divergence from its representative. Best of `restarts` seeded starts.
ClusteringResult bregman_kmeans(const MaxAffineModeld& model, const Eigen::MatrixXd& X, Index k,
                                std::uint64_t seed, int restarts = 10, int max_iterations = 200);

/// Single run from the given k x d starting representatives.
ClusteringResult bregman_kmeans_from(const MaxAffineModeld& model, const Eigen::MatrixXd& X,
                                     const Eigen::MatrixXd& initial_centers, int max_iterations = 200);

/// Fraction of point pairs on which the two partitions agree. 1 when n < 2.
double rand_index(const std::vector<Index>& a, const std::vector<Index>& b);
/// (1/n) sum over clusters of the largest class count in the cluster.
double purity(const std::vector<Index>& assignment, const std::vector<int>& labels);

}  // namespace bregman::tasks
