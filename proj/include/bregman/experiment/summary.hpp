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

namespace bregman::experiment {

/// mean +- 1.96 standard errors (sample standard deviation over sqrt(n)).
struct Interval {
  double mean = 0.0;
  double half_width = 0.0;
};

Interval confidence_interval(const std::vector<double>& values);
double median(std::vector<double> values);

/// Independent stream `stream` of a base seed (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace bregman::experiment
