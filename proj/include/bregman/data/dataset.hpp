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
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bregman/learn/supervision.hpp"

namespace bregman::data {

using Index = Eigen::Index;

/// Points (rows of X) with optional string class labels.
struct LabeledDataset {
  Eigen::MatrixXd X;
  std::vector<std::string> labels;  // empty when unlabeled
  std::vector<std::string> feature_names;
  std::string label_name;
  std::string source;

  Index size() const { return X.rows(); }
  Index dim() const { return X.cols(); }
  bool labeled() const { return !labels.empty(); }
  /// max_i ||x_i||_inf
  double radius() const;
  /// Sorted distinct labels.
  std::vector<std::string> classes() const;
  /// Position of each label in classes().
  std::vector<int> label_ids() const;
  LabeledDataset subset(const std::vector<Index>& rows) const;
};

/// Reads a CSV with a header row. Every column except `label_column` must be
/// numeric; pass an empty name for unlabeled data.
LabeledDataset load_csv(const std::filesystem::path& path, const std::string& label_column);
/// Writes features in shortest round-trip form, so load_csv reproduces X exactly.
void write_csv(const LabeledDataset& ds, const std::filesystem::path& path);

/// m comparisons (i, j, i, k): i and j drawn from a uniformly chosen class,
/// k from a uniformly chosen different class.
learn::QuadrupletSet sample_triplets(const LabeledDataset& ds, Index m, std::uint64_t seed);

}  // namespace bregman::data
