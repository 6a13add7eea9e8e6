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

#include <algorithm>
#include <limits>
#include <vector>

#include <Eigen/Core>

namespace oracle {

/// Optimal K-center radius under the infinity norm with unrestricted centers.
/// Enumerates every assignment of points to K groups; the best center of a
/// group is the midpoint of its bounding box.
inline double optimal_k_center_radius(const Eigen::MatrixXd& X, Eigen::Index K) {
  const Eigen::Index n = X.rows(), d = X.cols();
  std::vector<Eigen::Index> group(n, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    double r = 0.0;
    for (Eigen::Index g = 0; g < K; ++g) {
      for (Eigen::Index c = 0; c < d; ++c) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (Eigen::Index i = 0; i < n; ++i) {
          if (group[i] != g) continue;
          lo = std::min(lo, X(i, c));
          hi = std::max(hi, X(i, c));
        }
        if (hi >= lo) r = std::max(r, 0.5 * (hi - lo));
      }
    }
    best = std::min(best, r);
    Eigen::Index i = 0;
    while (i < n && ++group[i] == K) group[i++] = 0;
    if (i == n) break;
  }
  return best;
}

}  // namespace oracle
