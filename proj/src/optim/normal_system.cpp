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

#include "normal_system.hpp"

#include <algorithm>
#include <numeric>

namespace bregman::optim::detail {

namespace {

struct DisjointSets {
  explicit DisjointSets(Index n) : parent(n), size(n, 1) {
    std::iota(parent.begin(), parent.end(), Index{0});
  }
  Index find(Index v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  }
  void unite(Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
  }
  std::vector<Index> parent;
  std::vector<Index> size;
};

constexpr double kInitialReg = 1e-15;
constexpr double kMaxReg = 1e-4;

}  // namespace

NormalSystem::NormalSystem(const SparseRows& constraints, const SparseRows* residuals,
                           Index num_vars, int satellite_max_nnz, int satellite_max_block)
    : a_(constraints), g_(residuals), n_(num_vars) {
  std::vector<Index> count(n_, 0);
  auto count_rows = [&](const SparseRows& rows) {
    for (Index r = 0; r < rows.rows(); ++r) {
      for (Index c : rows.cols(r)) ++count[c];
    }
  };
  count_rows(a_);
  if (g_) count_rows(*g_);

  std::vector<char> satellite(n_, 0);
  for (Index j = 0; j < n_; ++j) satellite[j] = count[j] <= satellite_max_nnz ? 1 : 0;

  DisjointSets sets(n_);
  auto link_rows = [&](const SparseRows& rows) {
    for (Index r = 0; r < rows.rows(); ++r) {
      Index first = -1;
      for (Index c : rows.cols(r)) {
        if (!satellite[c]) continue;
        if (first < 0) first = c;
        else sets.unite(first, c);
      }
    }
  };
  link_rows(a_);
  if (g_) link_rows(*g_);
  for (Index j = 0; j < n_; ++j) {
    if (satellite[j] && sets.size[sets.find(j)] > satellite_max_block) satellite[j] = 0;
  }

  block_of_.assign(n_, -1);
  local_.assign(n_, -1);
  std::vector<int> block_of_root(n_, -1);
  for (Index j = 0; j < n_; ++j) {
    if (!satellite[j]) {
      local_[j] = static_cast<Index>(core_vars_.size());
      core_vars_.push_back(j);
      continue;
    }
    const Index root = sets.find(j);
    if (block_of_root[root] < 0) {
      block_of_root[root] = static_cast<int>(blocks_.size());
      blocks_.emplace_back();
    }
    Block& b = blocks_[block_of_root[root]];
    block_of_[j] = block_of_root[root];
    local_[j] = static_cast<Index>(b.vars.size());
    b.vars.push_back(j);
  }

  auto assign_rows = [&](const SparseRows& rows, bool is_g) {
    for (Index r = 0; r < rows.rows(); ++r) {
      int owner = -1;
      for (Index c : rows.cols(r)) {
        if (block_of_[c] >= 0) {
          owner = block_of_[c];
          break;
        }
      }
      if (owner < 0) {
        (is_g ? core_g_rows_ : core_a_rows_).push_back(r);
      } else {
        Block& b = blocks_[owner];
        (is_g ? b.g_rows : b.a_rows).push_back(r);
        for (Index c : rows.cols(r)) {
          if (block_of_[c] < 0) b.core.push_back(local_[c]);
        }
      }
    }
  };
  assign_rows(a_, false);
  if (g_) assign_rows(*g_, true);
  for (Block& b : blocks_) {
    std::sort(b.core.begin(), b.core.end());
    b.core.erase(std::unique(b.core.begin(), b.core.end()), b.core.end());
  }
}

bool NormalSystem::factor(const Eigen::VectorXd& row_weights, double residual_weight) {
  weights_ = row_weights;
  residual_weight_ = residual_weight;

  diag_ = Eigen::VectorXd::Zero(n_);
  for (Index r = 0; r < a_.rows(); ++r) {
    const auto cols = a_.cols(r);
    const auto vals = a_.vals(r);
    for (std::size_t k = 0; k < cols.size(); ++k) diag_(cols[k]) += weights_(r) * vals[k] * vals[k];
  }
  if (g_) {
    for (Index r = 0; r < g_->rows(); ++r) {
      const auto cols = g_->cols(r);
      const auto vals = g_->vals(r);
      for (std::size_t k = 0; k < cols.size(); ++k) {
        diag_(cols[k]) += residual_weight_ * vals[k] * vals[k];
      }
    }
  }

  // start one notch below the level that worked last time
  const double start = reg_scale_ > kInitialReg ? reg_scale_ / 10.0 : kInitialReg;
  for (double reg = start; reg <= kMaxReg; reg *= 10.0) {
    ++attempts_;
    if (try_factor(reg)) return true;
  }
  return false;
}

void NormalSystem::add_row_to_block(const std::vector<Index>& core_local,
                                    std::span<const Index> cols, std::span<const double> vals,
                                    double w, Eigen::MatrixXd& mbb, Eigen::MatrixXd& mbc,
                                    Eigen::MatrixXd& mcc) const {
  for (std::size_t p = 0; p < cols.size(); ++p) {
    const bool p_sat = block_of_[cols[p]] >= 0;
    const Index pi = p_sat ? local_[cols[p]] : core_local[local_[cols[p]]];
    for (std::size_t q = 0; q < cols.size(); ++q) {
      const bool q_sat = block_of_[cols[q]] >= 0;
      const Index qi = q_sat ? local_[cols[q]] : core_local[local_[cols[q]]];
      const double v = w * vals[p] * vals[q];
      if (p_sat && q_sat) mbb(pi, qi) += v;
      else if (p_sat) mbc(pi, qi) += v;
      else if (!q_sat) mcc(pi, qi) += v;
    }
  }
}

bool NormalSystem::try_factor(double reg_scale) {
  reg_scale_ = reg_scale;
  reg_ = reg_scale * (diag_.array() + 1.0);

  const Index nc = core_size();
  schur_.setZero(nc, nc);
  for (Index k = 0; k < nc; ++k) schur_(k, k) = reg_(core_vars_[k]);

  // lower triangle only
  auto add_core_rows = [&](const SparseRows& rows, const std::vector<Index>& ids, auto weight) {
    for (Index r : ids) {
      const double w = weight(r);
      if (w == 0.0) continue;
      const auto cols = rows.cols(r);
      const auto vals = rows.vals(r);
      for (std::size_t p = 0; p < cols.size(); ++p) {
        const Index pi = local_[cols[p]];
        const double wp = w * vals[p];
        for (std::size_t q = 0; q <= p; ++q) {
          const Index qi = local_[cols[q]];
          if (pi >= qi) schur_(pi, qi) += wp * vals[q];
          else schur_(qi, pi) += wp * vals[q];
        }
      }
    }
  };
  add_core_rows(a_, core_a_rows_, [&](Index r) { return weights_(r); });
  if (g_) add_core_rows(*g_, core_g_rows_, [&](Index) { return residual_weight_; });

  std::vector<Index> core_local(nc, -1);
  for (Block& b : blocks_) {
    const Index nb = static_cast<Index>(b.vars.size());
    const Index cb = static_cast<Index>(b.core.size());
    for (Index k = 0; k < cb; ++k) core_local[b.core[k]] = k;

    Eigen::MatrixXd mbb = Eigen::MatrixXd::Zero(nb, nb);
    Eigen::MatrixXd mbc = Eigen::MatrixXd::Zero(nb, cb);
    Eigen::MatrixXd mcc = Eigen::MatrixXd::Zero(cb, cb);
    for (Index r : b.a_rows) {
      add_row_to_block(core_local, a_.cols(r), a_.vals(r), weights_(r), mbb, mbc, mcc);
    }
    if (g_) {
      for (Index r : b.g_rows) {
        add_row_to_block(core_local, g_->cols(r), g_->vals(r), residual_weight_, mbb, mbc, mcc);
      }
    }
    for (Index k = 0; k < nb; ++k) mbb(k, k) += reg_(b.vars[k]);

    b.chol.compute(mbb);
    if (b.chol.info() != Eigen::Success) return false;
    b.coupling = b.chol.solve(mbc);
    mcc.noalias() -= mbc.transpose() * b.coupling;
    for (Index p = 0; p < cb; ++p) {
      const Index gp = b.core[p];
      for (Index q = 0; q <= p; ++q) {
        const Index gq = b.core[q];
        const double v = mcc(p, q);
        if (gp >= gq) schur_(gp, gq) += v;
        else schur_(gq, gp) += v;
      }
    }
  }

  if (nc > 0) {
    schur_chol_.compute(schur_);
    if (schur_chol_.info() != Eigen::Success) return false;
  }
  return true;
}

Eigen::VectorXd NormalSystem::solve(const Eigen::VectorXd& rhs) const {
  const Index nc = core_size();
  Eigen::VectorXd rc(nc);
  for (Index k = 0; k < nc; ++k) rc(k) = rhs(core_vars_[k]);

  std::vector<Eigen::VectorXd> block_solves(blocks_.size());
  for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
    const Block& b = blocks_[bi];
    Eigen::VectorXd rb(b.vars.size());
    for (std::size_t k = 0; k < b.vars.size(); ++k) rb(k) = rhs(b.vars[k]);
    block_solves[bi] = b.chol.solve(rb);
    // mbc^T mbb^{-1} rb == coupling^T rb
    const Eigen::VectorXd contrib = b.coupling.transpose() * rb;
    for (std::size_t k = 0; k < b.core.size(); ++k) rc(b.core[k]) -= contrib(k);
  }

  Eigen::VectorXd xc = nc > 0 ? Eigen::VectorXd(schur_chol_.solve(rc)) : Eigen::VectorXd();
  Eigen::VectorXd x(n_);
  for (Index k = 0; k < nc; ++k) x(core_vars_[k]) = xc(k);
  for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
    const Block& b = blocks_[bi];
    Eigen::VectorXd xb = block_solves[bi];
    if (!b.core.empty()) {
      Eigen::VectorXd xcb(b.core.size());
      for (std::size_t k = 0; k < b.core.size(); ++k) xcb(k) = xc(b.core[k]);
      xb.noalias() -= b.coupling * xcb;
    }
    for (std::size_t k = 0; k < b.vars.size(); ++k) x(b.vars[k]) = xb(k);
  }
  return x;
}

Eigen::VectorXd NormalSystem::apply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n_);
  for (Index r = 0; r < a_.rows(); ++r) {
    const double w = weights_(r);
    if (w != 0.0) a_.axpy(r, w * a_.dot(r, x), y);
  }
  if (g_ && residual_weight_ != 0.0) {
    for (Index r = 0; r < g_->rows(); ++r) g_->axpy(r, residual_weight_ * g_->dot(r, x), y);
  }
  return y;
}

}  // namespace bregman::optim::detail
