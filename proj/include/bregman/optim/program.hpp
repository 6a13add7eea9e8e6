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

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bregman::optim {

using Index = Eigen::Index;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Row-compressed sparse rows. Each row is a list of (column, coefficient).
class SparseRows {
 public:
  Index rows() const { return static_cast<Index>(start_.size()) - 1; }
  std::size_t nonzeros() const { return cols_.size(); }

  void add_row(std::span<const Index> cols, std::span<const double> vals);
  void add_row(std::initializer_list<Index> cols, std::initializer_list<double> vals) {
    add_row(std::span<const Index>(cols.begin(), cols.size()),
            std::span<const double>(vals.begin(), vals.size()));
  }
  void reserve(std::size_t rows, std::size_t nonzeros);

  std::span<const Index> cols(Index row) const {
    return {cols_.data() + start_[row], start_[row + 1] - start_[row]};
  }
  std::span<const double> vals(Index row) const {
    return {vals_.data() + start_[row], start_[row + 1] - start_[row]};
  }

  double dot(Index row, const Eigen::VectorXd& x) const {
    double s = 0.0;
    for (std::size_t k = start_[row]; k < start_[row + 1]; ++k) s += vals_[k] * x(cols_[k]);
    return s;
  }
  /// y += alpha * row
  void axpy(Index row, double alpha, Eigen::VectorXd& y) const {
    for (std::size_t k = start_[row]; k < start_[row + 1]; ++k) y(cols_[k]) += alpha * vals_[k];
  }

  Index max_column() const;

 private:
  std::vector<std::size_t> start_{0};
  std::vector<Index> cols_;
  std::vector<double> vals_;
};

/// min c^T x  subject to  A x <= u  and  lower <= x <= upper.
class LinearProgram {
 public:
  explicit LinearProgram(Index num_vars);

  Index num_vars() const { return objective_.size(); }
  Index num_constraints() const { return rows_.rows(); }

  void set_objective(Index var, double coef);
  const Eigen::VectorXd& objective() const { return objective_; }

  /// Adds sum_k vals[k] * x[cols[k]] <= upper; returns the row index.
  Index add_constraint(std::span<const Index> cols, std::span<const double> vals, double upper);
  Index add_constraint(std::initializer_list<Index> cols, std::initializer_list<double> vals,
                       double upper) {
    return add_constraint(std::span<const Index>(cols.begin(), cols.size()),
                          std::span<const double>(vals.begin(), vals.size()), upper);
  }
  void reserve(std::size_t rows, std::size_t nonzeros) { rows_.reserve(rows, nonzeros); }

  void set_lower_bound(Index var, double lb);
  void set_upper_bound(Index var, double ub);
  const Eigen::VectorXd& lower_bounds() const { return lower_; }
  const Eigen::VectorXd& upper_bounds() const { return upper_bounds_; }

  const SparseRows& rows() const { return rows_; }
  const std::vector<double>& rhs() const { return rhs_; }

  /// max over constraints and bounds of the amount by which x violates them.
  double max_violation(const Eigen::VectorXd& x) const;

 private:
  void check_var(Index var) const;

  Eigen::VectorXd objective_;
  SparseRows rows_;
  std::vector<double> rhs_;
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_bounds_;
};

/// min sum_t (g_t^T x - y_t)^2 + c^T x subject to the constraints of `base`.
class QuadraticProgram {
 public:
  explicit QuadraticProgram(Index num_vars) : base_(num_vars) {}

  LinearProgram& constraints() { return base_; }
  const LinearProgram& constraints() const { return base_; }
  Index num_vars() const { return base_.num_vars(); }

  void add_residual(std::span<const Index> cols, std::span<const double> vals, double target);
  void add_residual(std::initializer_list<Index> cols, std::initializer_list<double> vals,
                    double target) {
    add_residual(std::span<const Index>(cols.begin(), cols.size()),
                 std::span<const double>(vals.begin(), vals.size()), target);
  }
  void reserve_residuals(std::size_t rows, std::size_t nonzeros) {
    residuals_.reserve(rows, nonzeros);
  }

  const SparseRows& residuals() const { return residuals_; }
  const std::vector<double>& targets() const { return targets_; }

  double objective_value(const Eigen::VectorXd& x) const;

 private:
  LinearProgram base_;
  SparseRows residuals_;
  std::vector<double> targets_;
};

struct SolverSettings {
  int max_iterations = 50000;
  double feas_tol = 1e-7;  // absolute primal violation
  double opt_tol = 1e-9;   // relative duality gap
  // Columns touching at most this many rows are eliminated in small blocks
  // before the dense factorization.
  int satellite_max_nnz = 8;
  int satellite_max_block = 64;
  // Iterations without a tenfold improvement of the merit before giving up.
  int stall_iterations = 60;
  bool verbose = false;
};

enum class SolveStatus { optimal, max_iter, infeasible };

const char* to_string(SolveStatus status);

struct SolveReport {
  Eigen::VectorXd solution;
  Eigen::VectorXd duals;  // one multiplier per constraint row (bounds excluded)
  double objective = 0.0;
  double max_violation = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;  // complementarity / max(1, |objective|)
  int iterations = 0;
  SolveStatus status = SolveStatus::max_iter;
  std::string message;
};

class UnboundedProblem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

SolveReport solve_lp(const LinearProgram& lp, const SolverSettings& settings = {});
SolveReport solve_qp(const QuadraticProgram& qp, const SolverSettings& settings = {});

// Plain-text dump, one line per item:
//   lp <num_vars> <num_constraints>        (or "qp ...")
//   c <j>:<coef> ...                        objective, nonzeros only
//   bound <j> <lower> <upper>               finite bounds only
//   row <nnz> <j>:<coef> ... <= <upper>
//   res <nnz> <j>:<coef> ... = <target>     qp residuals
void write_program_text(std::ostream& out, const LinearProgram& lp);
void write_program_text(std::ostream& out, const QuadraticProgram& qp);

}  // namespace bregman::optim
