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

// Brute-force references for small linear programs. Written against plain
// dense matrices so they share nothing with the library solver.

#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// min c^T x s.t. A x <= b (bounds already folded into A).
struct DenseLp {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
};

/// Enumerates every basis of p active rows. Returns the best feasible vertex
/// value, or nullopt when no vertex exists. Assumes a bounded problem.
inline std::optional<double> vertex_enumeration(const DenseLp& lp, double tol = 1e-9) {
  const int q = static_cast<int>(lp.A.rows());
  const int p = static_cast<int>(lp.A.cols());
  if (q < p) return std::nullopt;
  std::vector<int> pick(p);
  for (int k = 0; k < p; ++k) pick[k] = k;
  std::optional<double> best;
  while (true) {
    Eigen::MatrixXd M(p, p);
    Eigen::VectorXd r(p);
    for (int k = 0; k < p; ++k) {
      M.row(k) = lp.A.row(pick[k]);
      r(k) = lp.b(pick[k]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    if (lu.isInvertible()) {
      const Eigen::VectorXd x = lu.solve(r);
      if (((lp.A * x - lp.b).array() <= tol * (1.0 + lp.b.cwiseAbs().array())).all()) {
        const double v = lp.c.dot(x);
        if (!best || v < *best) best = v;
      }
    }
    int k = p - 1;
    while (k >= 0 && pick[k] == q - p + k) --k;
    if (k < 0) break;
    ++pick[k];
    for (int t = k + 1; t < p; ++t) pick[t] = pick[t - 1] + 1;
  }
  return best;
}

enum class SimplexStatus { optimal, infeasible, unbounded };

struct SimplexResult {
  SimplexStatus status;
  double objective = 0.0;
  Eigen::VectorXd x;
};

/// Two-phase tableau simplex with Bland's rule for
///   min c^T x  s.t.  A x <= b,  x >= lower   (lower finite).
inline SimplexResult dense_simplex(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                   const Eigen::VectorXd& c, const Eigen::VectorXd& lower) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  const double eps = 1e-10;
  // shift x = u + lower, u >= 0; rows A u + s = b - A lower
  Eigen::VectorXd rhs = b - A * lower;
  // columns: u (n), slack (m), artificial (m)
  const int cols = n + 2 * m;
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m + 1, cols + 1);
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) {
    const double sign = rhs(i) < 0 ? -1.0 : 1.0;
    T.block(i, 0, 1, n) = sign * A.row(i);
    T(i, n + i) = sign;
    T(i, n + m + i) = 1.0;
    T(i, cols) = sign * rhs(i);
    basis[i] = n + m + i;
  }

  auto pivot = [&](int row, int col) {
    T.row(row) /= T(row, col);
    for (int i = 0; i <= m; ++i) {
      if (i != row && T(i, col) != 0.0) T.row(i) -= T(i, col) * T.row(row);
    }
    basis[row] = col;
  };

  auto iterate = [&](int allowed_cols) -> bool {
    while (true) {
      int enter = -1;
      for (int j = 0; j < allowed_cols; ++j) {
        if (T(m, j) < -eps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        if (T(i, enter) > eps) {
          const double r = T(i, cols) / T(i, enter);
          if (r < ratio - 1e-12 || (std::abs(r - ratio) <= 1e-12 && basis[i] < basis[leave])) {
            ratio = r;
            leave = i;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  };

  // phase one: minimize the sum of artificials
  T.row(m).setZero();
  for (int i = 0; i < m; ++i) T.row(m) -= T.row(i);
  for (int i = 0; i < m; ++i) T(m, n + m + i) = 0.0;
  iterate(n + m);
  if (-T(m, cols) > 1e-8) return {SimplexStatus::infeasible, 0.0, {}};
  for (int i = 0; i < m; ++i) {
    if (basis[i] >= n + m) {
      for (int j = 0; j < n + m; ++j) {
        if (std::abs(T(i, j)) > eps) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  // phase two
  T.row(m).setZero();
  T.block(m, 0, 1, n) = c.transpose();
  for (int i = 0; i < m; ++i) {
    if (basis[i] < n && c(basis[i]) != 0.0) T.row(m) -= c(basis[i]) * T.row(i);
  }
  for (int i = 0; i < m; ++i) T.block(i, n + m, 1, m).setZero();
  if (!iterate(n + m)) return {SimplexStatus::unbounded, 0.0, {}};

  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < m; ++i) {
    if (basis[i] < n) u(basis[i]) = T(i, cols);
  }
  const Eigen::VectorXd x = u + lower;
  return {SimplexStatus::optimal, c.dot(x), x};
}

}  // namespace oracle
