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
#include <cstdint>

namespace bregman {

struct BoundInputs {
  double beta = 1.0;   // smoothness of the generator
  double R = 1.0;      // infinity-norm radius of the data
  double K = 1.0;      // hyperplane count
  double d = 1.0;      // dimension
  double L = 1.0;      // Lipschitz budget
  double m = 1.0;      // number of comparisons / pairs
  double delta = 0.05; // failure probability
  double sigma = 0.0;  // noise bound (regression)
  double empirical_loss = 0.0;  // average training hinge loss, when known
};

/// Closed-form approximation and generalization bounds for max-affine
/// generators. Pure arithmetic.
struct BoundReport {
  double value_bound;     // 4 beta R^2 K^(-2/d)
  double grad_bound;      // 16 beta R K^(-1/d)
  double breg_bound;      // 36 beta R^2 K^(-1/d)
  double epsilon_margin;  // 8 R K^(-1/d)
  double rademacher;      // 4 K L R sqrt(2 ln(2d+2) / m)
  // Relative-comparison generalization bound, split into its three terms:
  // empirical hinge, 32 K L R sqrt(2 ln(2d+2)) / sqrt(m), and the confidence
  // term sqrt(4 ln(4 log2 L) + ln(1/delta)) / sqrt(m).
  std::array<double, 3> gen_bound_terms;
  double gen_bound;
  double regression_M;           // 4 L R + sigma
  double regression_gen_bound;   // 16 M K L R sqrt(2 ln(2d+2)/m) + M^2 sqrt(ln(1/delta)/(2m))
  double regression_approx_bound;
  std::int64_t regression_K;     // ceil(m^(d/(4+2d)))
};

/// Throws std::invalid_argument unless all inputs are positive and delta is in (0, 1).
BoundReport bounds(const BoundInputs& in);

}  // namespace bregman
