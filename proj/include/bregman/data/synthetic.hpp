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
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bregman/learn/supervision.hpp"

namespace bregman::data {

enum class GeneratorKind { kl_dirichlet, logdet_wishart, itakura_saito, mahalanobis, squared_euclidean };

const char* to_string(GeneratorKind kind);
std::optional<GeneratorKind> parse_generator(const std::string& name);
const std::vector<GeneratorKind>& all_generators();

struct SyntheticSpec {
  GeneratorKind kind = GeneratorKind::squared_euclidean;
  Eigen::Index n = 100;
  double sigma = 0.05;
  std::uint64_t seed = 0;
  Eigen::Matrix2d mahalanobis = (Eigen::Matrix2d() << 2.0, 0.5, 0.5, 1.0).finished();

  /// Throws std::invalid_argument unless n >= 2, sigma >= 0 and the
  /// Mahalanobis matrix is symmetric positive definite.
  void validate() const;
};

struct SyntheticData {
  Eigen::MatrixXd X;
  learn::RegressionSet pairs;  // every ordered pair i != j, noisy targets
  std::vector<double> clean;   // noiseless divergence for each pair
};

/// Samples points for the generator:
///   kl_dirichlet       (p, 1 - p) with p ~ Dir(1, 1)
///   logdet_wishart     W ~ W_2(I, 10) stored as (W11, W22, W12)
///   itakura_saito      uniform on [0.1, 1.6]^2
///   mahalanobis        uniform on [-0.4, 1.6]^2
///   squared_euclidean  uniform on [-0.4, 1.6]^2
Eigen::MatrixXd sample_points(const SyntheticSpec& spec);

/// Noiseless ground-truth divergence D(x, y).
double true_divergence(const SyntheticSpec& spec, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Points, all ordered pairs with targets D + N(0, sigma^2), and the noiseless values.
SyntheticData generate_synthetic(const SyntheticSpec& spec);

}  // namespace bregman::data
