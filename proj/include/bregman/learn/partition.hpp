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

namespace bregman::learn {

using Index = Eigen::Index;

/// Assignment of the rows of a data matrix to K cells, each cell anchored at
/// a data point.
struct Partition {
  std::vector<Index> assignment;  // cell of each point
  std::vector<Index> centers;     // row index of each cell's center
  double radius = 0.0;            // max infinity-norm distance to the assigned center

  Index cells() const { return static_cast<Index>(centers.size()); }
  static Partition identity(Index n);
  void validate(Index num_points) const;
};

/// Gonzalez greedy K-center under the infinity norm. The first center is
/// drawn uniformly from the rows using `seed`; ties go to the lowest index.
Partition farthest_point_partition(const Eigen::MatrixXd& X, Index K, std::uint64_t seed);
Partition farthest_point_partition_from(const Eigen::MatrixXd& X, Index K, Index first_center);

}  // namespace bregman::learn
