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


#include "bregman/learn/train.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "bregman/max_affine.hpp"

namespace bregman::learn {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Anchors {
  std::vector<Index> rows;   // data row of each local point
  std::vector<Index> local;  // data row -> local id, -1 when unused
  std::vector<Index> value;  // local id -> value slot shared by identical points
  Index slots = 0;
  MatrixXd points;           // local points in (scaled) model coordinates
  FeatureScale<double> scale;
};

Anchors gather(const MatrixXd& X, std::vector<Index> rows, bool scaling) {
  Anchors an;
  an.rows = std::move(rows);
  an.local.assign(X.rows(), -1);
  an.points.resize(static_cast<Index>(an.rows.size()), X.cols());
  for (Index k = 0; k < static_cast<Index>(an.rows.size()); ++k) {
    an.local[an.rows[k]] = k;
    an.points.row(k) = X.row(an.rows[k]);
  }
  if (scaling) {
    an.scale = FeatureScale<double>::unit_box(an.points);
    for (Index k = 0; k < an.points.rows(); ++k) {
      an.points.row(k) = an.scale.apply(an.points.row(k).transpose()).transpose();
    }
  }
  std::map<std::vector<double>, Index> seen;
  an.value.resize(an.rows.size());
  for (Index k = 0; k < an.points.rows(); ++k) {
    std::vector<double> key(an.points.cols());
    for (Index c = 0; c < an.points.cols(); ++c) key[c] = an.points(k, c);
    const auto [it, inserted] = seen.emplace(std::move(key), an.slots);
    if (inserted) ++an.slots;
    an.value[k] = it->second;
  }
  return an;
}

// Orthonormal basis of the affine hull of the rows of P. Slope components
// orthogonal to the hull never enter a divergence between hull points, so
// free-slope programs are posed in hull coordinates (P - mean) B.
struct Hull {
  VectorXd mean;
  MatrixXd basis;  // d x r
  bool reduced() const { return basis.cols() < basis.rows(); }
};

Hull affine_hull(const MatrixXd& P) {
  Hull h;
  h.mean = P.colwise().mean().transpose();
  const MatrixXd centered = P.rowwise() - h.mean.transpose();
  Eigen::JacobiSVD<MatrixXd> svd(centered, Eigen::ComputeThinV);
  const VectorXd& sv = svd.singularValues();
  const double cutoff = 1e-9 * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  Index r = 0;
  while (r < sv.size() && sv(r) > cutoff) ++r;
  if (r == 0 || r == P.cols()) {
    h.basis = MatrixXd::Identity(P.cols(), P.cols());
  } else {
    h.basis = svd.matrixV().leftCols(r);
  }
  return h;
}

void check_data(const MatrixXd& X) {
  if (X.rows() < 1 || X.cols() < 1) throw std::invalid_argument("data matrix is empty");
  if (!X.allFinite()) throw std::invalid_argument("data matrix has non-finite entries");
}

void check_lambda(double lambda) {
  if (!std::isfinite(lambda) || lambda < 0.0) {
    std::ostringstream os;
    os << "lambda must be finite and >= 0, got " << lambda;
    throw std::invalid_argument(os.str());
  }
}

struct RowBuilder {
  std::vector<Index> cols;
  std::vector<double> vals;
  void clear() {
    cols.clear();
    vals.clear();
  }
  void add(Index var, double v) {
    if (var >= 0 && v != 0.0) {
      cols.push_back(var);
      vals.push_back(v);
    }
  }
};

// Variables of the one-plane-per-point programs: values z (identical points
// share one, the first is pinned to 0), slopes a (optionally a_0 pinned to 0),
// l1 auxiliaries s, budget L, slacks.
struct PointLayout {
  Index n, d;
  bool pin_slope;
  const std::vector<Index>* value;
  Index z_base = 0, a_base = 0, s_base = -1, budget = -1, slack_base = 0, total = 0;

  PointLayout(const Anchors& an, bool pin_slope_, bool aux, bool budget_var, Index slacks)
      : n(an.points.rows()), d(an.points.cols()), pin_slope(pin_slope_), value(&an.value) {
    a_base = z_base + (an.slots - 1);
    Index next = a_base + (n - (pin_slope ? 1 : 0)) * d;
    if (aux) {
      s_base = next;
      next += (n - (pin_slope ? 1 : 0)) * d;
    }
    if (budget_var) budget = next++;
    slack_base = next;
    total = next + slacks;
  }
  Index z(Index p) const {
    const Index v = (*value)[p];
    return v == 0 ? -1 : z_base + v - 1;
  }
  Index a(Index p, Index c) const {
    if (pin_slope && p == 0) return -1;
    return a_base + (p - (pin_slope ? 1 : 0)) * d + c;
  }
  Index s(Index p, Index c) const {
    if (s_base < 0 || (pin_slope && p == 0)) return -1;
    return s_base + (p - (pin_slope ? 1 : 0)) * d + c;
  }
};

// sign * (z_i - z_j - a_j^T (x_i - x_j))
void add_point_divergence(RowBuilder& rb, const PointLayout& lay, const MatrixXd& P, Index i,
                          Index j, double sign) {
  if (i == j) return;
  rb.add(lay.z(i), sign);
  rb.add(lay.z(j), -sign);
  for (Index c = 0; c < lay.d; ++c) rb.add(lay.a(j, c), -sign * (P(i, c) - P(j, c)));
}

template <typename Program>
void add_point_convexity(Program& lp, const PointLayout& lay, const MatrixXd& P) {
  RowBuilder rb;
  for (Index i = 0; i < lay.n; ++i) {
    for (Index j = 0; j < lay.n; ++j) {
      if (i == j) continue;
      if ((*lay.value)[i] == (*lay.value)[j]) continue;
      rb.clear();
      add_point_divergence(rb, lay, P, i, j, -1.0);
      lp.add_constraint(rb.cols, rb.vals, 0.0);
    }
  }
}

void add_l1_rows(optim::LinearProgram& lp, Index planes, Index d, auto slope, auto aux, Index budget,
                 double cap) {
  RowBuilder rb;
  for (Index p = 0; p < planes; ++p) {
    if (aux(p, 0) < 0) continue;
    for (Index c = 0; c < d; ++c) {
      lp.add_constraint({slope(p, c), aux(p, c)}, {1.0, -1.0}, 0.0);
      lp.add_constraint({slope(p, c), aux(p, c)}, {-1.0, -1.0}, 0.0);
    }
    rb.clear();
    for (Index c = 0; c < d; ++c) rb.add(aux(p, c), 1.0);
    if (budget >= 0) {
      rb.add(budget, -1.0);
      lp.add_constraint(rb.cols, rb.vals, 0.0);
    } else {
      lp.add_constraint(rb.cols, rb.vals, cap);
    }
  }
}

void require_usable(const optim::SolveReport& r, const char* what) {
  if (r.status == optim::SolveStatus::infeasible) {
    std::ostringstream os;
    os << what << ": solver reported infeasibility (" << r.message << ")";
    throw TrainingError(os.str());
  }
}

InterpolantSolutiond extract_interpolant(const optim::SolveReport& r, const PointLayout& lay,
                                         const MatrixXd& P) {
  InterpolantSolutiond sol;
  sol.points = P;
  sol.values = VectorXd::Zero(lay.n);
  sol.subgradients = MatrixXd::Zero(lay.n, lay.d);
  for (Index p = 0; p < lay.n; ++p) {
    if (lay.z(p) >= 0) sol.values(p) = r.solution(lay.z(p));
    for (Index c = 0; c < lay.d; ++c) {
      if (lay.a(p, c) >= 0) sol.subgradients(p, c) = r.solution(lay.a(p, c));
    }
  }
  return sol;
}

MaxAffineModeld to_model(const InterpolantSolutiond& sol, const FeatureScale<double>& scale,
                         const optim::SolveReport& r, const char* what) {
  try {
    return interpolant_to_model(sol, kFeasibilityTolerance, scale);
  } catch (const InfeasibleInterpolant& e) {
    std::ostringstream os;
    os << what << ": solver returned an infeasible interpolant (status " << optim::to_string(r.status)
       << ", " << r.message << "): " << e.what();
    throw TrainingError(os.str());
  }
}

TrainResult flat_result(Index d) {
  TrainResult res{MaxAffineModeld(MatrixXd::Zero(1, d), VectorXd::Zero(1), 0.0)};
  res.message = "no supervision";
  return res;
}

// Variables of the shared-plane programs: offsets b (b_0 pinned), slopes a
// (optionally a_0 pinned), l1 auxiliaries, budget, slacks.
struct CellLayout {
  Index K, d;
  bool pin_slope;
  Index b_base = 0, a_base = 0, s_base = -1, budget = -1, slack_base = 0, total = 0;

  CellLayout(Index K_, Index d_, bool pin_slope_, bool aux, bool budget_var, Index slacks)
      : K(K_), d(d_), pin_slope(pin_slope_) {
    a_base = b_base + (K - 1);
    Index next = a_base + (K - (pin_slope ? 1 : 0)) * d;
    if (aux) {
      s_base = next;
      next += (K - (pin_slope ? 1 : 0)) * d;
    }
    if (budget_var) budget = next++;
    slack_base = next;
    total = next + slacks;
  }
  Index b(Index k) const { return k == 0 ? -1 : b_base + k - 1; }
  Index a(Index k, Index c) const {
    if (pin_slope && k == 0) return -1;
    return a_base + (k - (pin_slope ? 1 : 0)) * d + c;
  }
  Index s(Index k, Index c) const {
    if (s_base < 0 || (pin_slope && k == 0)) return -1;
    return s_base + (k - (pin_slope ? 1 : 0)) * d + c;
  }
};

// sign * (b_{p_i} - b_{p_j} + (a_{p_i} - a_{p_j})^T x_i)
void add_cell_divergence(RowBuilder& rb, const CellLayout& lay, const MatrixXd& P,
                         const std::vector<Index>& cell, Index i, Index j, double sign) {
  const Index pi = cell[i], pj = cell[j];
  if (pi == pj) return;
  rb.add(lay.b(pi), sign);
  rb.add(lay.b(pj), -sign);
  for (Index c = 0; c < lay.d; ++c) {
    rb.add(lay.a(pi, c), sign * P(i, c));
    rb.add(lay.a(pj, c), -sign * P(i, c));
  }
}

// b_k + a_k^T x_j <= b_{p_j} + a_{p_j}^T x_j for every point j and plane k
template <typename Program>
void add_cell_convexity(Program& lp, const CellLayout& lay, const MatrixXd& P,
                        const std::vector<Index>& cell) {
  RowBuilder rb;
  for (Index j = 0; j < P.rows(); ++j) {
    for (Index k = 0; k < lay.K; ++k) {
      if (k == cell[j]) continue;
      rb.clear();
      rb.add(lay.b(k), 1.0);
      rb.add(lay.b(cell[j]), -1.0);
      for (Index c = 0; c < lay.d; ++c) {
        rb.add(lay.a(k, c), P(j, c));
        rb.add(lay.a(cell[j], c), -P(j, c));
      }
      lp.add_constraint(rb.cols, rb.vals, 0.0);
    }
  }
}

MaxAffineModeld cell_model(const optim::SolveReport& r, const CellLayout& lay,
                           const FeatureScale<double>& scale) {
  MatrixXd slopes = MatrixXd::Zero(lay.K, lay.d);
  VectorXd offsets = VectorXd::Zero(lay.K);
  double L = 0.0;
  for (Index k = 0; k < lay.K; ++k) {
    if (lay.b(k) >= 0) offsets(k) = r.solution(lay.b(k));
    for (Index c = 0; c < lay.d; ++c) {
      if (lay.a(k, c) >= 0) slopes(k, c) = r.solution(lay.a(k, c));
    }
    L = std::max(L, slopes.row(k).lpNorm<1>());
  }
  return MaxAffineModeld(std::move(slopes), std::move(offsets), L, scale);
}

std::vector<Index> all_rows(Index n) {
  std::vector<Index> rows(n);
  for (Index i = 0; i < n; ++i) rows[i] = i;
  return rows;
}

void fill_report(TrainResult& res, const optim::SolveReport& r) {
  res.objective = r.objective;
  res.status = r.status;
  res.iterations = r.iterations;
  res.message = r.message;
}

}  // namespace

std::vector<double> default_lambda_grid() {
  std::vector<double> grid;
  for (int e = -8; e <= 4; ++e) grid.push_back(std::pow(10.0, e));
  return grid;
}

TrainResult train_pbdl(const MatrixXd& X, const QuadrupletSet& S, const TrainConfig& cfg) {
  check_data(X);
  check_lambda(cfg.lambda);
  S.validate(X.rows());
  if (S.empty()) return flat_result(X.cols());

  const Anchors an = gather(X, S.used_indices(), cfg.feature_scaling);
  const Index n = an.points.rows(), d = an.points.cols(), m = S.size();
  const PointLayout lay(an, false, true, true, m);

  optim::LinearProgram lp(lay.total);
  lp.reserve(m + n * (n - 1) + 2 * n * d + n, m * (6 + 2 * d) + n * (n - 1) * (2 + d) + 5 * n * d);
  for (Index t = 0; t < m; ++t) {
    lp.set_objective(lay.slack_base + t, 1.0);
    lp.set_lower_bound(lay.slack_base + t, 0.0);
  }
  lp.set_objective(lay.budget, cfg.lambda);
  lp.set_lower_bound(lay.budget, 0.0);

  RowBuilder rb;
  for (Index t = 0; t < m; ++t) {
    const auto& q = S.items[t];
    rb.clear();
    add_point_divergence(rb, lay, an.points, an.local[q[0]], an.local[q[1]], 1.0);
    add_point_divergence(rb, lay, an.points, an.local[q[2]], an.local[q[3]], -1.0);
    rb.add(lay.slack_base + t, -1.0);
    lp.add_constraint(rb.cols, rb.vals, -S.margin);
  }
  add_point_convexity(lp, lay, an.points);
  add_l1_rows(
      lp, n, d, [&](Index p, Index c) { return lay.a(p, c); },
      [&](Index p, Index c) { return lay.s(p, c); }, lay.budget, 0.0);

  const auto r = optim::solve_lp(lp, cfg.solver);
  require_usable(r, "train_pbdl");
  InterpolantSolutiond sol = extract_interpolant(r, lay, an.points);
  TrainResult res{to_model(sol, an.scale, r, "train_pbdl")};
  res.interpolant = std::move(sol);
  res.anchors = an.rows;
  fill_report(res, r);
  res.train_loss = hinge_loss(res.model, X, S);
  return res;
}

TrainResult train_pbdl_partitioned(const MatrixXd& X, const QuadrupletSet& S,
                                   const Partition& partition, const TrainConfig& cfg) {
  check_data(X);
  check_lambda(cfg.lambda);
  S.validate(X.rows());
  partition.validate(X.rows());

  const Anchors an = gather(X, all_rows(X.rows()), cfg.feature_scaling);
  const Index K = partition.cells(), d = X.cols(), m = S.size();
  const CellLayout lay(K, d, false, true, true, m);

  optim::LinearProgram lp(lay.total);
  for (Index t = 0; t < m; ++t) {
    lp.set_objective(lay.slack_base + t, 1.0);
    lp.set_lower_bound(lay.slack_base + t, 0.0);
  }
  lp.set_objective(lay.budget, cfg.lambda);
  lp.set_lower_bound(lay.budget, 0.0);

  RowBuilder rb;
  for (Index t = 0; t < m; ++t) {
    const auto& q = S.items[t];
    rb.clear();
    add_cell_divergence(rb, lay, an.points, partition.assignment, q[0], q[1], 1.0);
    add_cell_divergence(rb, lay, an.points, partition.assignment, q[2], q[3], -1.0);
    rb.add(lay.slack_base + t, -1.0);
    lp.add_constraint(rb.cols, rb.vals, -S.margin);
  }
  add_cell_convexity(lp, lay, an.points, partition.assignment);
  add_l1_rows(
      lp, K, d, [&](Index k, Index c) { return lay.a(k, c); },
      [&](Index k, Index c) { return lay.s(k, c); }, lay.budget, 0.0);

  const auto r = optim::solve_lp(lp, cfg.solver);
  require_usable(r, "train_pbdl_partitioned");
  TrainResult res{cell_model(r, lay, an.scale)};
  res.anchors = partition.centers;
  fill_report(res, r);
  res.train_loss = hinge_loss(res.model, X, S);
  return res;
}

TrainResult train_regression(const MatrixXd& X, const RegressionSet& S, const TrainConfig& cfg) {
  check_data(X);
  S.validate(X.rows());
  if (S.size() == 0) throw std::invalid_argument("regression needs at least one pair");
  const bool capped = std::isfinite(cfg.lipschitz_cap);
  if (capped && cfg.lipschitz_cap < 0.0) throw std::invalid_argument("lipschitz cap must be >= 0");

  const Anchors an = gather(X, S.used_indices(), cfg.feature_scaling);
  Hull hull;
  Anchors work = an;
  if (!capped) {
    hull = affine_hull(an.points);
    if (hull.reduced()) work.points = (an.points.rowwise() - hull.mean.transpose()) * hull.basis;
  }
  const Index n = work.points.rows(), d = work.points.cols(), m = S.size();
  // adding an affine function leaves every divergence unchanged, so a_0 can
  // be pinned unless the slopes are budgeted
  const PointLayout lay(work, !capped, capped, false, 0);

  optim::QuadraticProgram qp(lay.total);
  qp.constraints().reserve(n * (n - 1) + 2 * n * d + n, n * (n - 1) * (2 + d));
  qp.reserve_residuals(m, m * (2 + d));
  RowBuilder rb;
  for (Index t = 0; t < m; ++t) {
    rb.clear();
    add_point_divergence(rb, lay, work.points, an.local[S.pairs[t].first],
                         an.local[S.pairs[t].second], 1.0);
    qp.add_residual(rb.cols, rb.vals, S.targets[t]);
  }
  add_point_convexity(qp.constraints(), lay, work.points);
  if (capped) {
    add_l1_rows(
        qp.constraints(), n, d, [&](Index p, Index c) { return lay.a(p, c); },
        [&](Index p, Index c) { return lay.s(p, c); }, -1, cfg.lipschitz_cap);
  }

  const auto r = optim::solve_qp(qp, cfg.solver);
  require_usable(r, "train_regression");
  InterpolantSolutiond sol = extract_interpolant(r, lay, work.points);
  if (hull.reduced()) {
    sol.points = an.points;
    sol.subgradients = sol.subgradients * hull.basis.transpose();
  }
  TrainResult res{to_model(sol, an.scale, r, "train_regression")};
  res.interpolant = std::move(sol);
  res.anchors = an.rows;
  fill_report(res, r);
  res.train_loss = regression_mse(res.model, X, S);
  return res;
}

TrainResult train_regression_partitioned(const MatrixXd& X, const RegressionSet& S,
                                         const Partition& partition, const TrainConfig& cfg) {
  check_data(X);
  S.validate(X.rows());
  partition.validate(X.rows());
  if (S.size() == 0) throw std::invalid_argument("regression needs at least one pair");
  const bool capped = std::isfinite(cfg.lipschitz_cap);
  if (capped && cfg.lipschitz_cap < 0.0) throw std::invalid_argument("lipschitz cap must be >= 0");

  const Anchors an = gather(X, all_rows(X.rows()), cfg.feature_scaling);
  Hull hull;
  MatrixXd P = an.points;
  if (!capped) {
    hull = affine_hull(an.points);
    if (hull.reduced()) P = (an.points.rowwise() - hull.mean.transpose()) * hull.basis;
  }
  const Index K = partition.cells(), d = P.cols(), m = S.size();
  const CellLayout lay(K, d, !capped, capped, false, 0);

  optim::QuadraticProgram qp(lay.total);
  RowBuilder rb;
  for (Index t = 0; t < m; ++t) {
    rb.clear();
    add_cell_divergence(rb, lay, P, partition.assignment, S.pairs[t].first,
                        S.pairs[t].second, 1.0);
    qp.add_residual(rb.cols, rb.vals, S.targets[t]);
  }
  add_cell_convexity(qp.constraints(), lay, P, partition.assignment);
  if (capped) {
    add_l1_rows(
        qp.constraints(), K, d, [&](Index k, Index c) { return lay.a(k, c); },
        [&](Index k, Index c) { return lay.s(k, c); }, -1, cfg.lipschitz_cap);
  }

  const auto r = optim::solve_qp(qp, cfg.solver);
  require_usable(r, "train_regression_partitioned");
  TrainResult res{cell_model(r, lay, an.scale)};
  if (hull.reduced()) {
    MatrixXd slopes = res.model.slopes() * hull.basis.transpose();
    VectorXd offsets = res.model.offsets() - slopes * hull.mean;
    const double L = slopes.rowwise().lpNorm<1>().maxCoeff();
    res.model = MaxAffineModeld(std::move(slopes), std::move(offsets), L, an.scale);
  }
  res.anchors = partition.centers;
  fill_report(res, r);
  res.train_loss = regression_mse(res.model, X, S);
  return res;
}

TrainResult fit_comparisons(const MatrixXd& X, const QuadrupletSet& S, const TrainConfig& cfg) {
  if (cfg.planes && *cfg.planes < static_cast<Index>(S.used_indices().size())) {
    return train_pbdl_partitioned(X, S, farthest_point_partition(X, *cfg.planes, cfg.seed), cfg);
  }
  return train_pbdl(X, S, cfg);
}

TrainResult fit_regression(const MatrixXd& X, const RegressionSet& S, const TrainConfig& cfg) {
  if (cfg.planes && *cfg.planes < static_cast<Index>(S.used_indices().size())) {
    return train_regression_partitioned(X, S, farthest_point_partition(X, *cfg.planes, cfg.seed),
                                        cfg);
  }
  return train_regression(X, S, cfg);
}

double hinge_loss(const MaxAffineModeld& model, const MatrixXd& X, const QuadrupletSet& S) {
  S.validate(X.rows());
  const auto rows = evaluate_rows(model, X);
  double total = 0.0;
  for (const auto& q : S.items) {
    const double dij = cached_divergence(model, rows, q[0], rows, q[1]);
    const double dkl = cached_divergence(model, rows, q[2], rows, q[3]);
    total += std::max(0.0, dij - dkl + S.margin);
  }
  return total;
}

double satisfaction_rate(const MaxAffineModeld& model, const MatrixXd& X, const QuadrupletSet& S) {
  S.validate(X.rows());
  if (S.empty()) return 0.0;
  const auto rows = evaluate_rows(model, X);
  const double resolution = kOrderResolution * S.margin;
  Index ok = 0;
  for (const auto& q : S.items) {
    if (cached_divergence(model, rows, q[0], rows, q[1]) + resolution <
        cached_divergence(model, rows, q[2], rows, q[3])) {
      ++ok;
    }
  }
  return static_cast<double>(ok) / static_cast<double>(S.size());
}

double regression_mse(const MaxAffineModeld& model, const MatrixXd& X, const RegressionSet& S) {
  S.validate(X.rows());
  if (S.size() == 0) return 0.0;
  const auto rows = evaluate_rows(model, X);
  double total = 0.0;
  for (Index t = 0; t < S.size(); ++t) {
    const double r =
        cached_divergence(model, rows, S.pairs[t].first, rows, S.pairs[t].second) - S.targets[t];
    total += r * r;
  }
  return total / static_cast<double>(S.size());
}

}  // namespace bregman::learn
