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
#include <numeric>
#include <vector>

namespace oracle {

/// Pair counting over (relevant, irrelevant) pairs: 1 when the relevant item
/// scores lower, 1/2 on ties.
inline double brute_force_auc(const std::vector<double>& scores, const std::vector<bool>& relevant) {
  double hits = 0.0, pairs = 0.0;
  for (std::size_t r = 0; r < scores.size(); ++r) {
    if (!relevant[r]) continue;
    for (std::size_t s = 0; s < scores.size(); ++s) {
      if (relevant[s]) continue;
      pairs += 1.0;
      if (scores[r] < scores[s]) hits += 1.0;
      else if (scores[r] == scores[s]) hits += 0.5;
    }
  }
  return pairs > 0.0 ? hits / pairs : 0.0;
}

/// Precision of every prefix ending at a relevant item, averaged. Items are
/// ordered by score, then by position.
inline double brute_force_ave_p(const std::vector<double>& scores, const std::vector<bool>& relevant) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double total = 0.0;
  int found = 0;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    if (!relevant[order[rank]]) continue;
    ++found;
    total += static_cast<double>(found) / static_cast<double>(rank + 1);
  }
  return found > 0 ? total / found : 0.0;
}

}  // namespace oracle
