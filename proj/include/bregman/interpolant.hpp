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

#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "bregman/max_affine.hpp"

namespace bregman {

inline constexpr double kFeasibilityTolerance = 1e-6;

/// Values z_i and subgradients a_i attached to anchor points x_i. A convex
/// function through (x_i, z_i) with subgradient a_i at x_i exists iff
///   z_i - z_j >= a_j^T (x_i - x_j)   for all i, j.
template <typename Scalar>
struct InterpolantSolution {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Matrix points;        // n x d
  Vector values;        // n
  Matrix subgradients;  // n x d

  Eigen::Index size() const { return points.rows(); }
  Eigen::Index dim() const { return points.cols(); }

  /// Divergence between anchors read directly off the interpolant.
  Scalar divergence(Eigen::Index i, Eigen::Index j) const {
    return values(i) - values(j) - subgradients.row(j).dot(points.row(i) - points.row(j));
  }
};

using InterpolantSolutiond = InterpolantSolution<double>;

template <typename Scalar>
struct FeasibilityReport {
  Scalar worst_violation = Scalar(0);  // max_{i,j} a_j^T(x_i - x_j) - (z_i - z_j), clipped at 0
  Eigen::Index worst_i = -1;
  Eigen::Index worst_j = -1;
};

class InfeasibleInterpolant : public std::runtime_error {
 public:
  InfeasibleInterpolant(const std::string& what, Eigen::Index i, Eigen::Index j, double violation)
      : std::runtime_error(what), i_(i), j_(j), violation_(violation) {}
  Eigen::Index i() const { return i_; }
  Eigen::Index j() const { return j_; }
  double violation() const { return violation_; }

 private:
  Eigen::Index i_;
  Eigen::Index j_;
  double violation_;
};

template <typename Scalar>
FeasibilityReport<Scalar> check_feasibility(const InterpolantSolution<Scalar>& sol) {
  if (sol.values.size() != sol.size() || sol.subgradients.rows() != sol.size() ||
      sol.subgradients.cols() != sol.dim()) {
    throw std::invalid_argument("interpolant arrays have inconsistent shapes");
  }
  FeasibilityReport<Scalar> report;
  const Eigen::Index n = sol.size();
  // support(i, j) = a_j^T x_i
  const typename InterpolantSolution<Scalar>::Matrix support = sol.points * sol.subgradients.transpose();
  for (Eigen::Index j = 0; j < n; ++j) {
    const Scalar base = sol.values(j) - support(j, j);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Scalar v = support(i, j) + base - sol.values(i);
      if (v > report.worst_violation) {
        report.worst_violation = v;
        report.worst_i = i;
        report.worst_j = j;
      }
    }
  }
  return report;
}

/// phi(x) = max_i a_i^T (x - x_i) + z_i as a K = n max-affine model.
template <typename Scalar>
MaxAffineModel<Scalar> interpolant_to_model(const InterpolantSolution<Scalar>& sol,
                                            Scalar tolerance = Scalar(kFeasibilityTolerance),
                                            FeatureScale<Scalar> feature_scale = {}) {
  if (sol.size() < 1) throw std::invalid_argument("interpolant has no anchors");
  const auto report = check_feasibility(sol);
  if (report.worst_violation > tolerance) {
    std::ostringstream os;
    os << "interpolant is infeasible: pair (i=" << report.worst_i << ", j=" << report.worst_j
       << ") violates z_i - z_j >= a_j^T(x_i - x_j) by " << report.worst_violation;
    throw InfeasibleInterpolant(os.str(), report.worst_i, report.worst_j,
                                static_cast<double>(report.worst_violation));
  }
  typename InterpolantSolution<Scalar>::Vector offsets =
      sol.values - (sol.subgradients.cwiseProduct(sol.points)).rowwise().sum();
  const Scalar lipschitz = sol.subgradients.rowwise().template lpNorm<1>().maxCoeff();
  return MaxAffineModel<Scalar>(sol.subgradients, std::move(offsets), lipschitz,
                                std::move(feature_scale));
}

/// Reads an interpolant back off a model at the given anchors: z_i = h(x_i),
/// a_i = slope of the active hyperplane. Exactly feasible up to rounding.
template <typename Scalar, typename Derived>
InterpolantSolution<Scalar> model_to_interpolant(const MaxAffineModel<Scalar>& model,
                                                 const Eigen::MatrixBase<Derived>& anchors) {
  const auto ev = evaluate_rows(model, anchors);
  InterpolantSolution<Scalar> sol;
  sol.points = ev.scaled;
  sol.values = ev.values;
  sol.subgradients.resize(anchors.rows(), model.dim());
  for (Eigen::Index i = 0; i < anchors.rows(); ++i) {
    sol.subgradients.row(i) = model.slopes().row(ev.active(i));
  }
  return sol;
}

}  // namespace bregman
