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
#include <filesystem>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace bregman::learn {

using Index = Eigen::Index;

/// Relative comparisons D(x_i, x_j) <= D(x_k, x_l), each required to hold
/// with the given margin.
struct QuadrupletSet {
  std::vector<std::array<Index, 4>> items;
  double margin = 1.0;

  Index size() const { return static_cast<Index>(items.size()); }
  bool empty() const { return items.empty(); }

  /// Throws std::out_of_range naming the first offending comparison.
  void validate(Index num_points) const;
  /// Sorted distinct row indices appearing in any comparison.
  std::vector<Index> used_indices() const;
  QuadrupletSet subset(const std::vector<Index>& which) const;
};

/// Pairs (i, j) with observed divergence targets y.
struct RegressionSet {
  std::vector<std::pair<Index, Index>> pairs;
  std::vector<double> targets;
  double sigma = 0.0;  // known noise scale, 0 when unknown

  Index size() const { return static_cast<Index>(pairs.size()); }
  void validate(Index num_points) const;
  std::vector<Index> used_indices() const;
};

// CSV with header "i,j,k,l" (0-based rows).
QuadrupletSet read_quadruplets_csv(const std::filesystem::path& path);
void write_quadruplets_csv(const QuadrupletSet& set, const std::filesystem::path& path);
// CSV with header "i,j,y".
RegressionSet read_pairs_csv(const std::filesystem::path& path);
void write_pairs_csv(const RegressionSet& set, const std::filesystem::path& path);

}  // namespace bregman::learn
