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
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

namespace bregman {

/// Slack allowed on ||a_k||_1 <= L when validating a model.
inline constexpr double kLipschitzTolerance = 1e-7;

/// Optional per-feature affine map x -> (x - offset) .* scale applied before
/// the generator is evaluated. An empty offset means the identity map.
template <typename Scalar>
struct FeatureScale {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Vector offset;
  Vector scale;

  bool enabled() const { return offset.size() > 0; }

  template <typename Derived>
  Vector apply(const Eigen::MatrixBase<Derived>& x) const {
    if (!enabled()) return x;
    return ((x - offset).array() * scale.array()).matrix();
  }

  /// Map that sends every column range of `points` (rows are points) onto [-1, 1].
  template <typename Derived>
  static FeatureScale unit_box(const Eigen::MatrixBase<Derived>& points) {
    FeatureScale fs;
    const auto lo = points.colwise().minCoeff().transpose().eval();
    const auto hi = points.colwise().maxCoeff().transpose().eval();
    fs.offset = (lo + hi) / Scalar(2);
    fs.scale.resize(lo.size());
    for (Eigen::Index c = 0; c < lo.size(); ++c) {
      const Scalar half = (hi(c) - lo(c)) / Scalar(2);
      fs.scale(c) = half > Scalar(0) ? Scalar(1) / half : Scalar(1);
    }
    return fs;
  }
};

/// Convex piecewise-linear generator h(x) = max_k a_k^T x + b_k with
/// ||a_k||_1 <= L. Immutable after construction.
template <typename Scalar>
class MaxAffineModel {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  /// `slopes` is K x d (one hyperplane per row), `offsets` has K entries.
  MaxAffineModel(Matrix slopes, Vector offsets, Scalar lipschitz,
                 FeatureScale<Scalar> feature_scale = {})
      : slopes_(std::move(slopes)),
        offsets_(std::move(offsets)),
        lipschitz_(lipschitz),
        feature_scale_(std::move(feature_scale)) {
    validate();
  }

  Eigen::Index planes() const { return slopes_.rows(); }
  Eigen::Index dim() const { return slopes_.cols(); }
  const Matrix& slopes() const { return slopes_; }
  const Vector& offsets() const { return offsets_; }
  Scalar lipschitz() const { return lipschitz_; }
  const FeatureScale<Scalar>& feature_scale() const { return feature_scale_; }

 private:
  void validate() const {
    if (slopes_.rows() < 1 || slopes_.cols() < 1) {
      throw std::invalid_argument("max-affine model needs K >= 1 and d >= 1");
    }
    if (offsets_.size() != slopes_.rows()) {
      std::ostringstream os;
      os << "offsets has " << offsets_.size() << " entries, expected "
         << slopes_.rows();
      throw std::invalid_argument(os.str());
    }
    if (!slopes_.allFinite() || !offsets_.allFinite() ||
        !std::isfinite(static_cast<double>(lipschitz_)) || lipschitz_ < Scalar(0)) {
      throw std::invalid_argument("max-affine model has non-finite or negative entries");
    }
    for (Eigen::Index k = 0; k < slopes_.rows(); ++k) {
      const Scalar l1 = slopes_.row(k).template lpNorm<1>();
      if (l1 > lipschitz_ + Scalar(kLipschitzTolerance)) {
        std::ostringstream os;
        os << "hyperplane " << k << " has ||a||_1 = " << l1
           << " above the Lipschitz budget " << lipschitz_;
        throw std::invalid_argument(os.str());
      }
    }
    if (feature_scale_.enabled() &&
        (feature_scale_.offset.size() != dim() || feature_scale_.scale.size() != dim())) {
      throw std::invalid_argument("feature scale dimension does not match the model");
    }
  }

  Matrix slopes_;
  Vector offsets_;
  Scalar lipschitz_;
  FeatureScale<Scalar> feature_scale_;
};

using MaxAffineModeld = MaxAffineModel<double>;

template <typename Scalar>
struct Evaluation {
  Scalar value;
  Eigen::Index active;
};

template <typename Scalar>
struct BregmanEvaluation {
  Scalar value;
  Eigen::Index active_first;
  Eigen::Index active_second;
};

namespace detail {

template <typename Scalar, typename Derived>
void check_dim(const MaxAffineModel<Scalar>& model, const Eigen::MatrixBase<Derived>& x) {
  if (x.size() != model.dim()) {
    std::ostringstream os;
    os << "dimension mismatch: model expects " << model.dim() << ", got " << x.size();
    throw std::invalid_argument(os.str());
  }
}

// Evaluates in already-scaled coordinates. Ties go to the lowest index.
template <typename Scalar, typename Derived>
Evaluation<Scalar> evaluate_scaled(const MaxAffineModel<Scalar>& model,
                                   const Eigen::MatrixBase<Derived>& u) {
  Eigen::Index best = 0;
  Scalar best_value = model.slopes().row(0).dot(u) + model.offsets()(0);
  for (Eigen::Index k = 1; k < model.planes(); ++k) {
    const Scalar v = model.slopes().row(k).dot(u) + model.offsets()(k);
    if (v > best_value) {
      best_value = v;
      best = k;
    }
  }
  return {best_value, best};
}

}  // namespace detail

/// h(x) and the index of the hyperplane attaining it.
template <typename Scalar, typename Derived>
Evaluation<Scalar> evaluate(const MaxAffineModel<Scalar>& model,
                            const Eigen::MatrixBase<Derived>& x) {
  detail::check_dim(model, x);
  const auto u = model.feature_scale().apply(x.template cast<Scalar>());
  return detail::evaluate_scaled(model, u);
}

/// D(x, x2) = h(x) - h(x2) - a_{p(x2)}^T (x - x2).
///
/// Evaluated as h(x) - (a_p^T x + b_p), which is the same quantity since
/// hyperplane p attains h at x2. Both terms are computed with the same
/// floating-point expression, so the result is never negative and is exactly
/// zero for x == x2.
template <typename Scalar, typename DerivedA, typename DerivedB>
BregmanEvaluation<Scalar> bregman(const MaxAffineModel<Scalar>& model,
                                  const Eigen::MatrixBase<DerivedA>& x,
                                  const Eigen::MatrixBase<DerivedB>& x2) {
  detail::check_dim(model, x);
  detail::check_dim(model, x2);
  const auto& fs = model.feature_scale();
  const auto u = fs.apply(x.template cast<Scalar>());
  const auto u2 = fs.apply(x2.template cast<Scalar>());
  const auto first = detail::evaluate_scaled(model, u);
  const auto second = detail::evaluate_scaled(model, u2);
  const Eigen::Index p = second.active;
  const Scalar support = model.slopes().row(p).dot(u) + model.offsets()(p);
  return {first.value - support, first.active, p};
}

/// Cached h values and active hyperplanes for every row of `points`.
template <typename Scalar>
struct RowEvaluations {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> scaled;  // rows in model coordinates
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values;
  Eigen::VectorXi active;
};

template <typename Scalar, typename Derived>
RowEvaluations<Scalar> evaluate_rows(const MaxAffineModel<Scalar>& model,
                                     const Eigen::MatrixBase<Derived>& points) {
  if (points.cols() != model.dim()) {
    std::ostringstream os;
    os << "dimension mismatch: model expects " << model.dim() << ", got " << points.cols();
    throw std::invalid_argument(os.str());
  }
  RowEvaluations<Scalar> out;
  const Eigen::Index n = points.rows();
  out.scaled.resize(n, model.dim());
  out.values.resize(n);
  out.active.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.scaled.row(i) =
        model.feature_scale().apply(points.row(i).transpose().template cast<Scalar>()).transpose();
    const auto e = detail::evaluate_scaled(model, out.scaled.row(i).transpose());
    out.values(i) = e.value;
    out.active(i) = static_cast<int>(e.active);
  }
  return out;
}

/// Divergence between cached rows: D(first_i, second_j).
template <typename Scalar>
Scalar cached_divergence(const MaxAffineModel<Scalar>& model, const RowEvaluations<Scalar>& first,
                         Eigen::Index i, const RowEvaluations<Scalar>& second, Eigen::Index j) {
  const Eigen::Index p = second.active(j);
  const Scalar support = model.slopes().row(p).dot(first.scaled.row(i)) + model.offsets()(p);
  const Scalar d = first.values(i) - support;
  return d > Scalar(0) ? d : Scalar(0);
}

/// Matrix with entry (i, j) = D(a_i, b_j) for rows a_i of `first`, b_j of `second`.
template <typename Scalar, typename DerivedA, typename DerivedB>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> divergence_matrix(
    const MaxAffineModel<Scalar>& model, const Eigen::MatrixBase<DerivedA>& first,
    const Eigen::MatrixBase<DerivedB>& second) {
  const auto ef = evaluate_rows(model, first);
  const auto es = evaluate_rows(model, second);
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> d(first.rows(), second.rows());
  for (Eigen::Index j = 0; j < second.rows(); ++j) {
    for (Eigen::Index i = 0; i < first.rows(); ++i) {
      d(i, j) = cached_divergence(model, ef, i, es, j);
    }
  }
  return d;
}

}  // namespace bregman
