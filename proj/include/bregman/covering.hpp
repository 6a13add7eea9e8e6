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

#include <cmath>
#include <algorithm>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "bregman/max_affine.hpp"

namespace bregman {

/// Largest g with g^d <= K, i.e. floor(K^(1/d)) without rounding surprises.
inline Eigen::Index cells_per_axis(Eigen::Index K, Eigen::Index d) {
  if (K < 1 || d < 1) throw std::invalid_argument("cells_per_axis needs K >= 1 and d >= 1");
  Eigen::Index g = static_cast<Eigen::Index>(std::floor(std::pow(double(K), 1.0 / double(d))));
  auto power = [d](Eigen::Index base) {
    double p = 1.0;
    for (Eigen::Index i = 0; i < d; ++i) p *= double(base);
    return p;
  };
  while (g > 1 && power(g) > double(K)) --g;
  while (power(g + 1) <= double(K)) ++g;
  return g < 1 ? 1 : g;
}

template <typename Scalar>
struct CoveringGrid {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> centers;  // g^d x d
  Scalar epsilon;                                                 // R / g
  Eigen::Index per_axis;
};

/// Hypercube centers covering the infinity-norm ball B(R) with radius R / g,
/// g = floor(K^(1/d)). Center ordering is lexicographic with the first
/// coordinate varying slowest.
template <typename Scalar>
CoveringGrid<Scalar> covering_grid(Scalar R, Eigen::Index d, Eigen::Index K) {
  if (!(R > Scalar(0))) throw std::invalid_argument("covering radius must be positive");
  const Eigen::Index g = cells_per_axis(K, d);
  CoveringGrid<Scalar> grid;
  grid.per_axis = g;
  grid.epsilon = R / Scalar(g);
  Eigen::Index count = 1;
  for (Eigen::Index i = 0; i < d; ++i) count *= g;
  grid.centers.resize(count, d);
  for (Eigen::Index idx = 0; idx < count; ++idx) {
    Eigen::Index rest = idx;
    for (Eigen::Index c = d - 1; c >= 0; --c) {
      const Eigen::Index cell = rest % g;
      rest /= g;
      grid.centers(idx, c) = -R + grid.epsilon * Scalar(2 * cell + 1);
    }
  }
  return grid;
}

/// A convex generator with its gradient, smooth in the sense
/// ||grad(x) - grad(y)||_1 <= beta ||x - y||_inf on B(radius).
template <typename Scalar>
struct SmoothConvexSpec {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  std::function<Scalar(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  Scalar beta;
  Scalar radius;
  Eigen::Index dim;

  void validate() const {
    if (!value || !gradient) throw std::invalid_argument("smooth spec needs value and gradient");
    if (!(radius > Scalar(0)) || !(beta > Scalar(0)) || dim < 1) {
      throw std::invalid_argument("smooth spec needs R > 0, beta > 0, d >= 1");
    }
  }
};

/// Tangent-plane minorant h(x) = max_i phi(c_i) + grad phi(c_i)^T (x - c_i)
/// over the covering-grid centers c_i.
template <typename Scalar>
MaxAffineModel<Scalar> grid_approximator(const SmoothConvexSpec<Scalar>& spec, Eigen::Index K) {
  spec.validate();
  const auto grid = covering_grid<Scalar>(spec.radius, spec.dim, K);
  const Eigen::Index n = grid.centers.rows();
  typename MaxAffineModel<Scalar>::Matrix slopes(n, spec.dim);
  typename MaxAffineModel<Scalar>::Vector offsets(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const typename SmoothConvexSpec<Scalar>::Vector c = grid.centers.row(i).transpose();
    const Scalar v = spec.value(c);
    const typename SmoothConvexSpec<Scalar>::Vector g = spec.gradient(c);
    if (!std::isfinite(static_cast<double>(v)) || g.size() != spec.dim || !g.allFinite()) {
      std::ostringstream os;
      os << "generator is not finite at grid point [" << c.transpose() << "]";
      throw std::domain_error(os.str());
    }
    slopes.row(i) = g.transpose();
    offsets(i) = v - g.dot(c);
  }
  const Scalar lipschitz = slopes.rowwise().template lpNorm<1>().maxCoeff();
  return MaxAffineModel<Scalar>(std::move(slopes), std::move(offsets), lipschitz);
}

/// Empirical check of the covering-grid approximator against the closed-form
/// bounds. Values are compared on a lattice of B(R) with `per_axis` points per
/// axis. Divergences are compared over all ordered pairs of a lattice of the
/// shrunken ball B(R - 8 R K^(-1/d)) holding at most `per_axis` points; the
/// pair check is skipped when that radius is not positive.
template <typename Scalar>
struct GridCheck {
  Eigen::Index K = 0;
  Eigen::Index planes = 0;
  Scalar value_error = Scalar(0);  // sup |phi - h|
  Scalar value_bound = Scalar(0);  // 4 beta R^2 K^(-2/d)
  Scalar minorant_violation = Scalar(0);  // sup (h - phi), <= 0 for a minorant
  bool breg_checked = false;
  Scalar shrunk_radius = Scalar(0);
  Scalar breg_error = Scalar(0);  // sup |D_phi - D_h| over pairs
  Scalar breg_bound = Scalar(0);  // 36 beta R^2 K^(-1/d)

  bool pass(Scalar slack = Scalar(1e-12)) const {
    return value_error <= value_bound + slack && minorant_violation <= slack &&
           (!breg_checked || breg_error <= breg_bound + slack);
  }
};

namespace detail {

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> lattice(Scalar r, Eigen::Index d,
                                                              Eigen::Index per_axis) {
  Eigen::Index count = 1;
  for (Eigen::Index i = 0; i < d; ++i) count *= per_axis;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> P(count, d);
  const Scalar step = per_axis > 1 ? Scalar(2) * r / Scalar(per_axis - 1) : Scalar(0);
  for (Eigen::Index idx = 0; idx < count; ++idx) {
    Eigen::Index rest = idx;
    for (Eigen::Index c = d - 1; c >= 0; --c) {
      const Eigen::Index k = rest % per_axis;
      rest /= per_axis;
      P(idx, c) = per_axis > 1 ? -r + step * Scalar(k) : Scalar(0);
    }
  }
  return P;
}

}  // namespace detail

template <typename Scalar>
GridCheck<Scalar> grid_check(const SmoothConvexSpec<Scalar>& spec, Eigen::Index K,
                             Eigen::Index per_axis = 201) {
  using Vector = typename SmoothConvexSpec<Scalar>::Vector;
  if (per_axis < 2) throw std::invalid_argument("grid check needs at least 2 points per axis");
  const auto model = grid_approximator(spec, K);
  const Scalar R = spec.radius;
  const Scalar d = Scalar(spec.dim);
  const Scalar Kd = Scalar(K);
  using std::pow;
  GridCheck<Scalar> out;
  out.K = K;
  out.planes = model.planes();
  out.value_bound = Scalar(4) * spec.beta * R * R * pow(Kd, Scalar(-2) / d);
  out.breg_bound = Scalar(36) * spec.beta * R * R * pow(Kd, Scalar(-1) / d);
  out.shrunk_radius = R - Scalar(8) * R * pow(Kd, Scalar(-1) / d);

  const auto P = detail::lattice(R, spec.dim, per_axis);
  out.minorant_violation = -std::numeric_limits<Scalar>::infinity();
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    const Vector x = P.row(i).transpose();
    const Scalar gap = spec.value(x) - evaluate(model, x).value;
    out.value_error = std::max(out.value_error, Scalar(std::abs(gap)));
    out.minorant_violation = std::max(out.minorant_violation, -gap);
  }

  if (out.shrunk_radius > Scalar(0)) {
    out.breg_checked = true;
    Eigen::Index q = 1;
    while (true) {
      Eigen::Index c = 1;
      for (Eigen::Index i = 0; i < spec.dim; ++i) c *= q + 1;
      if (c > per_axis) break;
      ++q;
    }
    q = std::max<Eigen::Index>(q, 2);
    const auto Q = detail::lattice(out.shrunk_radius, spec.dim, q);
    const auto rows = evaluate_rows(model, Q);
    std::vector<Scalar> phi(Q.rows());
    std::vector<Vector> grad(Q.rows());
    for (Eigen::Index i = 0; i < Q.rows(); ++i) {
      const Vector x = Q.row(i).transpose();
      phi[i] = spec.value(x);
      grad[i] = spec.gradient(x);
    }
    for (Eigen::Index j = 0; j < Q.rows(); ++j) {
      for (Eigen::Index i = 0; i < Q.rows(); ++i) {
        const Scalar truth =
            phi[i] - phi[j] - grad[j].dot((Q.row(i) - Q.row(j)).transpose());
        const Scalar est = cached_divergence(model, rows, i, rows, j);
        out.breg_error = std::max(out.breg_error, Scalar(std::abs(truth - est)));
      }
    }
  }
  return out;
}

/// phi(x) = ||x||_2^2 on B(R); beta = 2d under the l1 / l_inf pairing.
template <typename Scalar>
SmoothConvexSpec<Scalar> squared_norm_spec(Eigen::Index d, Scalar R = Scalar(1)) {
  using Vector = typename SmoothConvexSpec<Scalar>::Vector;
  SmoothConvexSpec<Scalar> spec;
  spec.value = [](const Vector& x) { return x.squaredNorm(); };
  spec.gradient = [](const Vector& x) -> Vector { return Scalar(2) * x; };
  spec.beta = Scalar(2 * d);
  spec.radius = R;
  spec.dim = d;
  return spec;
}

}  // namespace bregman
