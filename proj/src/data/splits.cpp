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


#include "bregman/data/splits.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace bregman::data {

std::vector<std::vector<Eigen::Index>> split_folds(Eigen::Index count, int folds,
                                                   std::uint64_t seed) {
  if (folds < 1 || folds > count) {
    std::ostringstream os;
    os << "cannot split " << count << " items into " << folds << " folds";
    throw std::invalid_argument(os.str());
  }
  std::vector<Eigen::Index> order(count);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<Eigen::Index>> out(folds);
  for (Eigen::Index k = 0; k < count; ++k) out[k % folds].push_back(order[k]);
  for (auto& f : out) std::sort(f.begin(), f.end());
  return out;
}

}  // namespace bregman::data
