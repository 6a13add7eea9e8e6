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

#include "bregman/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bregman {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << name << " must be positive and finite, got " << v;
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

BoundReport bounds(const BoundInputs& in) {
  require_positive(in.beta, "beta");
  require_positive(in.R, "R");
  require_positive(in.K, "K");
  require_positive(in.d, "d");
  require_positive(in.L, "L");
  require_positive(in.m, "m");
  if (!(in.delta > 0.0 && in.delta < 1.0)) {
    std::ostringstream os;
    os << "delta must lie in (0, 1), got " << in.delta;
    throw std::invalid_argument(os.str());
  }
  if (!(in.sigma >= 0.0)) throw std::invalid_argument("sigma must be non-negative");

  const double k_inv_d = std::pow(in.K, -1.0 / in.d);
  const double log_term = std::sqrt(2.0 * std::log(2.0 * in.d + 2.0));

  BoundReport r{};
  r.value_bound = 4.0 * in.beta * in.R * in.R * k_inv_d * k_inv_d;
  r.grad_bound = 16.0 * in.beta * in.R * k_inv_d;
  r.breg_bound = 36.0 * in.beta * in.R * in.R * k_inv_d;
  r.epsilon_margin = 8.0 * in.R * k_inv_d;
  r.rademacher = 4.0 * in.K * in.L * in.R * log_term / std::sqrt(in.m);

  // ln(4 log2 L) is undefined for L <= 2^(1/4); the union bound over L_i = 2^i
  // never uses a budget below 1, so the inner term is floored at 1.
  const double inner = std::max(4.0 * std::log2(in.L), 1.0);
  r.gen_bound_terms = {in.empirical_loss,
                       32.0 * in.K * in.L * in.R * log_term / std::sqrt(in.m),
                       std::sqrt(4.0 * std::log(inner) + std::log(1.0 / in.delta)) / std::sqrt(in.m)};
  r.gen_bound = r.gen_bound_terms[0] + r.gen_bound_terms[1] + r.gen_bound_terms[2];

  r.regression_M = 4.0 * in.L * in.R + in.sigma;
  const double M = r.regression_M;
  const double complexity = 16.0 * M * in.K * in.L * in.R * log_term / std::sqrt(in.m);
  r.regression_gen_bound = complexity + M * M * std::sqrt(std::log(1.0 / in.delta) / (2.0 * in.m));
  r.regression_approx_bound = std::pow(36.0 * in.beta * in.R * in.R, 2.0) * k_inv_d * k_inv_d +
                              complexity + M * M * std::sqrt(2.0 * std::log(2.0 / in.delta) / in.m);
  r.regression_K =
      static_cast<std::int64_t>(std::ceil(std::pow(in.m, in.d / (4.0 + 2.0 * in.d)) - 1e-12));
  return r;
}

}  // namespace bregman
