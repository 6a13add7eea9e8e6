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


#include "bregman/learn/partition.hpp"

#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace bregman::learn {

Partition Partition::identity(Index n) {
  Partition p;
  p.assignment.resize(n);
  p.centers.resize(n);
  for (Index i = 0; i < n; ++i) p.assignment[i] = p.centers[i] = i;
  return p;
}

void Partition::validate(Index num_points) const {
  if (static_cast<Index>(assignment.size()) != num_points) {
    std::ostringstream os;
    os << "partition covers " << assignment.size() << " points, data has " << num_points;
    throw std::invalid_argument(os.str());
  }
  if (centers.empty()) throw std::invalid_argument("partition has no cells");
  for (Index c : centers) {
    if (c < 0 || c >= num_points) throw std::out_of_range("partition center out of range");
  }
  for (Index a : assignment) {
    if (a < 0 || a >= cells()) throw std::out_of_range("partition assignment out of range");
  }
}

Partition farthest_point_partition(const Eigen::MatrixXd& X, Index K, std::uint64_t seed) {
  if (X.rows() < 1) throw std::invalid_argument("cannot partition an empty data set");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Index> pick(0, X.rows() - 1);
  return farthest_point_partition_from(X, K, pick(rng));
}

Partition farthest_point_partition_from(const Eigen::MatrixXd& X, Index K, Index first_center) {
  const Index n = X.rows();
  if (K < 1 || K > n) {
    std::ostringstream os;
    os << "K = " << K << " must lie in [1, " << n << "]";
    throw std::invalid_argument(os.str());
  }
  if (first_center < 0 || first_center >= n) throw std::out_of_range("first center out of range");

  Partition p;
  p.assignment.assign(n, 0);
  std::vector<char> is_center(n, 0);
  Eigen::VectorXd dist = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());

  Index next = first_center;
  for (Index c = 0; c < K; ++c) {
    p.centers.push_back(next);
    is_center[next] = 1;
    for (Index i = 0; i < n; ++i) {
      const double d = (X.row(i) - X.row(next)).lpNorm<Eigen::Infinity>();
      if (d < dist(i)) {
        dist(i) = d;
        p.assignment[i] = c;
      }
    }
    next = -1;
    for (Index i = 0; i < n; ++i) {
      if (!is_center[i] && (next < 0 || dist(i) > dist(next))) next = i;
    }
  }
  for (Index c = 0; c < K; ++c) p.assignment[p.centers[c]] = c;
  p.radius = 0.0;
  for (Index i = 0; i < n; ++i) {
    p.radius = std::max(p.radius,
                        (X.row(i) - X.row(p.centers[p.assignment[i]])).lpNorm<Eigen::Infinity>());
  }
  return p;
}

}  // namespace bregman::learn
