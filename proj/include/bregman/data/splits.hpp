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

#include <Eigen/Core>

namespace bregman::data {

/// Seeded shuffle of [0, count) dealt into `folds` disjoint, covering lists
/// whose sizes differ by at most one. Each fold is sorted.
std::vector<std::vector<Eigen::Index>> split_folds(Eigen::Index count, int folds,
                                                   std::uint64_t seed);

}  // namespace bregman::data
