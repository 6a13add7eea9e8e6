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

// Mehrotra predictor-corrector interior point method for
//   min c^T x + sum_t (g_t^T x - y_t)^2   s.t.   A x + w = b,  w >= 0.

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

#include "bregman/optim/program.hpp"
#include "normal_system.hpp"

namespace bregman::optim {

namespace {

using Eigen::VectorXd;

struct Problem {
  Index n = 0;
  SparseRows a;
  VectorXd b;
  Index user_rows = 0;
  const SparseRows* g = nullptr;
  VectorXd y;
  VectorXd c;
  double cost_scale = 1.0;  // linear programs are solved with c / cost_scale
};

Problem build(const LinearProgram& lp, const SparseRows* g, const std::vector<double>* y) {
  Problem pr;
  pr.n = lp.num_vars();
  pr.a = lp.rows();
  pr.user_rows = lp.num_constraints();
  std::vector<double> b = lp.rhs();
  for (Index j = 0; j < pr.n; ++j) {
    const double lo = lp.lower_bounds()(j);
    const double hi = lp.upper_bounds()(j);
    if (std::isfinite(lo)) {
      pr.a.add_row({j}, {-1.0});
      b.push_back(-lo);
    }
    if (std::isfinite(hi)) {
      pr.a.add_row({j}, {1.0});
      b.push_back(hi);
    }
  }
  pr.b = Eigen::Map<const VectorXd>(b.data(), static_cast<Index>(b.size()));
  pr.c = lp.objective();
  if (g) {
    if (g->max_column() >= pr.n) throw std::out_of_range("residual column out of range");
    pr.g = g;
    pr.y = Eigen::Map<const VectorXd>(y->data(), static_cast<Index>(y->size()));
  }
  return pr;
}

VectorXd multiply(const SparseRows& rows, const VectorXd& x) {
  VectorXd out(rows.rows());
  for (Index r = 0; r < rows.rows(); ++r) out(r) = rows.dot(r, x);
  return out;
}

VectorXd multiply_transpose(const SparseRows& rows, const VectorXd& v, Index n) {
  VectorXd out = VectorXd::Zero(n);
  for (Index r = 0; r < rows.rows(); ++r) {
    if (v(r) != 0.0) rows.axpy(r, v(r), out);
  }
  return out;
}

double max_step(const VectorXd& v, const VectorXd& dv) {
  double alpha = 1.0;
  for (Index i = 0; i < v.size(); ++i) {
    if (dv(i) < 0.0) alpha = std::min(alpha, -v(i) / dv(i));
  }
  return alpha;
}

struct Step {
  VectorXd dx, dw, dl;
  double ap = 0.0, ad = 0.0;
};

struct Iterate {
  VectorXd x, w, lam;
  double merit = std::numeric_limits<double>::infinity();
  double violation = 0.0, dual_residual = 0.0, gap = 0.0, objective = 0.0;
  int iteration = 0;
};

SolveReport run(const Problem& pr, const SolverSettings& settings, bool quadratic) {
  const Index n = pr.n;
  const Index q = pr.a.rows();
  constexpr double kStepFactor = 0.995;
  constexpr int kRefinementSteps = 10;
  constexpr int kCentralityCorrectors = 3;
  constexpr double kDualRegularization = 1e-12;

  detail::NormalSystem system(pr.a, pr.g, n, settings.satellite_max_nnz,
                              settings.satellite_max_block);

  VectorXd x = VectorXd::Zero(n);
  VectorXd w = pr.b.cwiseAbs().cwiseMax(1.0);
  VectorXd lam = VectorXd::Ones(q);
  if (q > 0 && system.factor(VectorXd::Ones(q), quadratic ? 2.0 : 0.0)) {
    // Mehrotra's starting point: least-squares x and lambda, shifted into
    // the interior and balanced.
    VectorXd rhs = multiply_transpose(pr.a, pr.b, n);
    if (pr.g) rhs += 2.0 * multiply_transpose(*pr.g, pr.y, n);
    x = system.solve(rhs);
    VectorXd grad = pr.c;
    if (pr.g) grad += 2.0 * multiply_transpose(*pr.g, multiply(*pr.g, x) - pr.y, n);
    w = pr.b - multiply(pr.a, x);
    lam = multiply(pr.a, system.solve(-grad));
    w.array() += std::max(-1.5 * w.minCoeff(), 0.0);
    lam.array() += std::max(-1.5 * lam.minCoeff(), 0.0);
    const double wl = w.dot(lam);
    w.array() += 0.5 * wl / std::max(lam.sum(), 1e-300);
    lam.array() += 0.5 * wl / std::max(w.sum(), 1e-300);
    if (!w.allFinite() || !lam.allFinite() || !x.allFinite() || w.minCoeff() <= 0.0 ||
        lam.minCoeff() <= 0.0) {
      x.setZero();
      w = pr.b.cwiseAbs().cwiseMax(1.0);
      lam.setOnes();
    }
  }

  const double b_norm = q > 0 ? pr.b.lpNorm<Eigen::Infinity>() : 0.0;
  const double c_norm = pr.c.lpNorm<Eigen::Infinity>();

  Iterate best;
  double stall_reference = std::numeric_limits<double>::infinity();
  int stall_count = 0;

  SolveReport report;
  report.status = SolveStatus::max_iter;

  auto finish = [&](const Iterate& it, SolveStatus status, std::string message) {
    report.solution = it.x;
    report.duals = pr.cost_scale * it.lam.head(pr.user_rows);
    report.objective = pr.cost_scale * it.objective;
    report.max_violation = it.violation;
    report.dual_residual = it.dual_residual;
    report.gap = it.gap;
    report.iterations = it.iteration;
    report.status = status;
    report.message = std::move(message);
    return report;
  };

  for (int iter = 0;; ++iter) {
    const VectorXd ax = multiply(pr.a, x);
    VectorXd grad = pr.c;
    double objective = pr.c.dot(x);
    if (pr.g) {
      const VectorXd res = multiply(*pr.g, x) - pr.y;
      objective += res.squaredNorm();
      grad += 2.0 * multiply_transpose(*pr.g, res, n);
    }
    const VectorXd r_p = ax + w - pr.b;
    const VectorXd r_d = grad + multiply_transpose(pr.a, lam, n);

    const double violation = q > 0 ? std::max(0.0, (ax - pr.b).maxCoeff()) : 0.0;
    const double rp_inf = q > 0 ? r_p.lpNorm<Eigen::Infinity>() : 0.0;
    const double dual_scale = 1.0 + std::max(c_norm, grad.lpNorm<Eigen::Infinity>());
    const double rd_rel = r_d.lpNorm<Eigen::Infinity>() / dual_scale;
    const double comp = q > 0 ? w.dot(lam) : 0.0;
    const double gap =
        pr.cost_scale * comp / std::max(1.0, pr.cost_scale * std::abs(objective));

    Iterate current{x, w, lam, std::max({rp_inf / (1.0 + b_norm), rd_rel, gap}),
                    violation, rd_rel, gap, objective, iter};
    if (settings.verbose) {
      std::cerr << "ipm " << iter << " obj " << objective << " pinf " << rp_inf << " dinf "
                << rd_rel << " gap " << gap << '\n';
    }

    if (rp_inf <= settings.feas_tol && rd_rel <= settings.feas_tol && gap <= settings.opt_tol) {
      return finish(current, SolveStatus::optimal, "converged");
    }
    if (current.merit < best.merit) best = current;

    if (current.merit < 0.1 * stall_reference) {
      stall_reference = current.merit;
      stall_count = 0;
    } else if (++stall_count > settings.stall_iterations) {
      return finish(best, SolveStatus::max_iter, "stalled without progress");
    }
    if (iter >= settings.max_iterations) {
      return finish(best, SolveStatus::max_iter, "iteration limit reached");
    }

    // certificate of primal infeasibility: y >= 0, A^T y ~ 0, b^T y < 0
    const double lam_l1 = lam.lpNorm<1>();
    if (rp_inf > settings.feas_tol && lam_l1 > 1e8 * (1.0 + c_norm)) {
      const VectorXd y = lam / lam_l1;
      const double by = pr.b.dot(y);
      const double aty = multiply_transpose(pr.a, y, n).lpNorm<Eigen::Infinity>();
      if (by < -1e-8 * (1.0 + b_norm) && aty <= 1e-6 * std::abs(by)) {
        std::ostringstream os;
        os << "constraints are infeasible (Farkas certificate with b^T y = " << by << ")";
        return finish(current, SolveStatus::infeasible, os.str());
      }
    }
    if (x.lpNorm<Eigen::Infinity>() > 1e12 * (1.0 + b_norm + c_norm)) {
      throw UnboundedProblem("objective is unbounded below on the feasible set");
    }

    // dual regularization: A dx + dw - delta dl = -rp caps the row weights at 1 / delta
    const double delta = kDualRegularization;
    const VectorXd d = (w.cwiseQuotient(lam).array() + delta).inverse().matrix();
    if (!system.factor(d, quadratic ? 2.0 : 0.0)) {
      return finish(best, SolveStatus::max_iter, "normal equations could not be factorized");
    }

    // Newton direction for A dx + dw - delta dl = -rp, H dx + A^T dl = -rd,
    // lam .* dw + w .* dl = -rc.
    auto direction = [&](const VectorXd& rp, const VectorXd& rd, const VectorXd& rc,
                         Step& step, int refinement_steps) {
      const VectorXd t = d.cwiseProduct(rp - rc.cwiseQuotient(lam));
      const VectorXd rhs = -rd - multiply_transpose(pr.a, t, n);
      step.dx = system.solve(rhs);
      VectorXd res;
      double res_norm = 0.0;
      if (refinement_steps > 0) {
        res = rhs - system.apply(step.dx);
        res_norm = res.lpNorm<Eigen::Infinity>();
      }
      for (int k = 0; k < refinement_steps && res_norm > 0.0; ++k) {
        VectorXd trial = step.dx + system.solve(res);
        VectorXd trial_res = rhs - system.apply(trial);
        const double trial_norm = trial_res.lpNorm<Eigen::Infinity>();
        if (!(trial_norm < 0.9 * res_norm)) break;
        step.dx = std::move(trial);
        res = std::move(trial_res);
        res_norm = trial_norm;
      }
      const VectorXd adx = multiply(pr.a, step.dx);
      step.dl = d.cwiseProduct(adx) + t;
      step.dw = -rp - adx + delta * step.dl;
      step.ap = max_step(w, step.dw);
      step.ad = max_step(lam, step.dl);
      if (quadratic) step.ap = step.ad = std::min(step.ap, step.ad);
    };

    const VectorXd wl = w.cwiseProduct(lam);
    Step step;
    direction(r_p, r_d, wl, step, 0);

    if (q > 0) {
      const double mu = comp / static_cast<double>(q);
      const double mu_aff =
          (w + step.ap * step.dw).dot(lam + step.ad * step.dl) / static_cast<double>(q);
      const double sigma = std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3);
      const double target = sigma * mu;
      const VectorXd r_c = (wl + step.dw.cwiseProduct(step.dl)).array() - target;
      direction(r_p, r_d, r_c, step, kRefinementSteps);

      // Gondzio centrality correctors: push the products at a longer trial
      // step back into [0.1, 10] * target.
      const VectorXd zero_n = VectorXd::Zero(n);
      const VectorXd zero_q = VectorXd::Zero(q);
      for (int k = 0; k < kCentralityCorrectors && std::min(step.ap, step.ad) < 1.0; ++k) {
        const double ap_goal = std::min(1.0, 1.5 * step.ap + 0.1);
        const double ad_goal = std::min(1.0, 1.5 * step.ad + 0.1);
        const VectorXd v =
            (w + ap_goal * step.dw).cwiseProduct(lam + ad_goal * step.dl);
        VectorXd fix(q);
        for (Index i = 0; i < q; ++i) {
          const double lo = 0.1 * target, hi = 10.0 * target;
          double f = 0.0;
          if (v(i) < lo) f = lo - v(i);
          else if (v(i) > hi) f = std::max(hi - v(i), -hi);
          fix(i) = f;
        }
        Step corrected;
        direction(zero_q, zero_n, -fix, corrected, 0);
        corrected.dx += step.dx;
        corrected.dw += step.dw;
        corrected.dl += step.dl;
        corrected.ap = max_step(w, corrected.dw);
        corrected.ad = max_step(lam, corrected.dl);
        if (quadratic) corrected.ap = corrected.ad = std::min(corrected.ap, corrected.ad);
        if (corrected.ap + corrected.ad < 1.01 * (step.ap + step.ad) + 0.01) break;
        step = std::move(corrected);
      }
    }
    const double ap = std::min(1.0, kStepFactor * step.ap);
    const double ad = std::min(1.0, kStepFactor * step.ad);
    const VectorXd& dx = step.dx;
    const VectorXd& dw = step.dw;
    const VectorXd& dl = step.dl;
    if (settings.verbose) {
      const double mu0 = comp / static_cast<double>(std::max<Index>(q, 1));
      std::cerr << "    step " << ap << ' ' << ad << " centrality " << wl.minCoeff() / mu0 << ' '
                << wl.maxCoeff() / mu0 << " reg " << system.regularization() << " factorizations "
                << system.attempts() << '\n';
    }

    x += ap * dx;
    w += ap * dw;
    lam += ad * dl;
  }
}

}  // namespace

SolveReport solve_lp(const LinearProgram& lp, const SolverSettings& settings) {
  Problem pr = build(lp, nullptr, nullptr);
  const double c_norm = pr.c.lpNorm<Eigen::Infinity>();
  if (c_norm > 0.0) {
    pr.cost_scale = c_norm;
    pr.c /= c_norm;
  }
  SolveReport r = run(pr, settings, false);
  r.max_violation = lp.max_violation(r.solution);
  return r;
}

SolveReport solve_qp(const QuadraticProgram& qp, const SolverSettings& settings) {
  const Problem pr = build(qp.constraints(), &qp.residuals(), &qp.targets());
  SolveReport r = run(pr, settings, true);
  r.max_violation = qp.constraints().max_violation(r.solution);
  r.objective = qp.objective_value(r.solution);
  return r;
}

}  // namespace bregman::optim
