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

#include "bregman/optim/program.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace bregman::optim {

void SparseRows::add_row(std::span<const Index> cols, std::span<const double> vals) {
  if (cols.size() != vals.size()) throw std::invalid_argument("row has mismatched index/value counts");
  const std::size_t begin = cols_.size();
  for (std::size_t k = 0; k < cols.size(); ++k) {
    if (cols[k] < 0) throw std::invalid_argument("negative column index");
    if (!std::isfinite(vals[k])) throw std::invalid_argument("non-finite coefficient");
    // repeated columns are merged
    std::size_t at = begin;
    while (at < cols_.size() && cols_[at] != cols[k]) ++at;
    if (at < cols_.size()) {
      vals_[at] += vals[k];
    } else {
      cols_.push_back(cols[k]);
      vals_.push_back(vals[k]);
    }
  }
  std::size_t out = begin;
  for (std::size_t k = begin; k < cols_.size(); ++k) {
    if (vals_[k] == 0.0) continue;
    cols_[out] = cols_[k];
    vals_[out] = vals_[k];
    ++out;
  }
  cols_.resize(out);
  vals_.resize(out);
  start_.push_back(cols_.size());
}

void SparseRows::reserve(std::size_t rows, std::size_t nonzeros) {
  start_.reserve(rows + 1);
  cols_.reserve(nonzeros);
  vals_.reserve(nonzeros);
}

Index SparseRows::max_column() const {
  Index m = -1;
  for (Index c : cols_) m = std::max(m, c);
  return m;
}

LinearProgram::LinearProgram(Index num_vars)
    : objective_(Eigen::VectorXd::Zero(num_vars)),
      lower_(Eigen::VectorXd::Constant(num_vars, -kInfinity)),
      upper_bounds_(Eigen::VectorXd::Constant(num_vars, kInfinity)) {
  if (num_vars < 1) throw std::invalid_argument("a program needs at least one variable");
}

void LinearProgram::check_var(Index var) const {
  if (var < 0 || var >= num_vars()) {
    std::ostringstream os;
    os << "variable index " << var << " out of range [0, " << num_vars() << ")";
    throw std::out_of_range(os.str());
  }
}

void LinearProgram::set_objective(Index var, double coef) {
  check_var(var);
  if (!std::isfinite(coef)) throw std::invalid_argument("non-finite objective coefficient");
  objective_(var) = coef;
}

Index LinearProgram::add_constraint(std::span<const Index> cols, std::span<const double> vals,
                                    double upper) {
  for (Index c : cols) check_var(c);
  if (!std::isfinite(upper)) throw std::invalid_argument("constraint bound must be finite");
  rows_.add_row(cols, vals);
  rhs_.push_back(upper);
  return rows_.rows() - 1;
}

void LinearProgram::set_lower_bound(Index var, double lb) {
  check_var(var);
  if (std::isnan(lb)) throw std::invalid_argument("NaN bound");
  lower_(var) = lb;
}

void LinearProgram::set_upper_bound(Index var, double ub) {
  check_var(var);
  if (std::isnan(ub)) throw std::invalid_argument("NaN bound");
  upper_bounds_(var) = ub;
}

double LinearProgram::max_violation(const Eigen::VectorXd& x) const {
  double worst = 0.0;
  for (Index r = 0; r < rows_.rows(); ++r) worst = std::max(worst, rows_.dot(r, x) - rhs_[r]);
  for (Index j = 0; j < num_vars(); ++j) {
    worst = std::max(worst, lower_(j) - x(j));
    worst = std::max(worst, x(j) - upper_bounds_(j));
  }
  return worst;
}

void QuadraticProgram::add_residual(std::span<const Index> cols, std::span<const double> vals,
                                    double target) {
  for (Index c : cols) {
    if (c < 0 || c >= num_vars()) throw std::out_of_range("residual column out of range");
  }
  if (!std::isfinite(target)) throw std::invalid_argument("residual target must be finite");
  residuals_.add_row(cols, vals);
  targets_.push_back(target);
}

double QuadraticProgram::objective_value(const Eigen::VectorXd& x) const {
  double f = base_.objective().dot(x);
  for (Index t = 0; t < residuals_.rows(); ++t) {
    const double r = residuals_.dot(t, x) - targets_[t];
    f += r * r;
  }
  return f;
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::max_iter: return "max_iter";
    case SolveStatus::infeasible: return "infeasible";
  }
  return "unknown";
}

namespace {

void write_entries(std::ostream& out, const SparseRows& rows, Index r) {
  const auto cols = rows.cols(r);
  const auto vals = rows.vals(r);
  out << cols.size();
  for (std::size_t k = 0; k < cols.size(); ++k) out << ' ' << cols[k] << ':' << vals[k];
}

void write_common(std::ostream& out, const LinearProgram& lp) {
  out << 'c';
  for (Index j = 0; j < lp.num_vars(); ++j) {
    if (lp.objective()(j) != 0.0) out << ' ' << j << ':' << lp.objective()(j);
  }
  out << '\n';
  for (Index j = 0; j < lp.num_vars(); ++j) {
    if (std::isfinite(lp.lower_bounds()(j)) || std::isfinite(lp.upper_bounds()(j))) {
      out << "bound " << j << ' ' << lp.lower_bounds()(j) << ' ' << lp.upper_bounds()(j) << '\n';
    }
  }
  for (Index r = 0; r < lp.num_constraints(); ++r) {
    out << "row ";
    write_entries(out, lp.rows(), r);
    out << " <= " << lp.rhs()[r] << '\n';
  }
}

}  // namespace

void write_program_text(std::ostream& out, const LinearProgram& lp) {
  const auto precision = out.precision(17);
  out << "lp " << lp.num_vars() << ' ' << lp.num_constraints() << '\n';
  write_common(out, lp);
  out.precision(precision);
}

void write_program_text(std::ostream& out, const QuadraticProgram& qp) {
  const auto precision = out.precision(17);
  out << "qp " << qp.num_vars() << ' ' << qp.constraints().num_constraints() << '\n';
  write_common(out, qp.constraints());
  for (Index t = 0; t < qp.residuals().rows(); ++t) {
    out << "res ";
    write_entries(out, qp.residuals(), t);
    out << " = " << qp.targets()[t] << '\n';
  }
  out.precision(precision);
}

}  // namespace bregman::optim
