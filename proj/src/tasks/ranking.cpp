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


#include "bregman/tasks/ranking.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace bregman::tasks {

namespace {

void check_lengths(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": " << a << " scores but " << b << " relevance flags";
    throw std::invalid_argument(os.str());
  }
}

// D between rows of two evaluated sets, query in the requested slot.
double query_divergence(const MaxAffineModeld& model, const RowEvaluations<double>& queries, Index q,
                        const RowEvaluations<double>& items, Index o, ArgumentOrder order) {
  return order == ArgumentOrder::query_first ? cached_divergence(model, queries, q, items, o)
                                             : cached_divergence(model, items, o, queries, q);
}

}  // namespace

double auc_from_scores(const std::vector<double>& scores, const std::vector<bool>& relevant) {
  check_lengths(scores.size(), relevant.size(), "auc");
  const auto pos = static_cast<std::size_t>(std::count(relevant.begin(), relevant.end(), true));
  const std::size_t neg = relevant.size() - pos;
  if (pos == 0 || neg == 0) throw std::invalid_argument("auc needs relevant and irrelevant items");
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // walk blocks of equal score; a relevant item beats every irrelevant item
  // after its block and half of those inside it
  double concordant = 0.0;
  std::size_t neg_seen = 0;
  for (std::size_t s = 0; s < idx.size();) {
    std::size_t e = s, tied_pos = 0, tied_neg = 0;
    while (e < idx.size() && scores[idx[e]] == scores[idx[s]]) {
      relevant[idx[e]] ? ++tied_pos : ++tied_neg;
      ++e;
    }
    const double after = static_cast<double>(neg - neg_seen - tied_neg);
    concordant += static_cast<double>(tied_pos) * (after + 0.5 * static_cast<double>(tied_neg));
    neg_seen += tied_neg;
    s = e;
  }
  return concordant / (static_cast<double>(pos) * static_cast<double>(neg));
}

double average_precision(const std::vector<double>& scores, const std::vector<bool>& relevant) {
  check_lengths(scores.size(), relevant.size(), "average precision");
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t r = 0; r < idx.size(); ++r) {
    if (relevant[idx[r]]) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(r + 1);
    }
  }
  if (hits == 0) throw std::invalid_argument("average precision needs a relevant item");
  return sum / static_cast<double>(hits);
}

RankingScores rank_all(const MaxAffineModeld& model, const Eigen::MatrixXd& X,
                       const std::vector<int>& labels, ArgumentOrder order) {
  const Index n = X.rows();
  if (static_cast<Index>(labels.size()) != n) throw std::invalid_argument("one label per point required");
  if (n < 2) throw std::invalid_argument("ranking needs at least two points");
  {
    auto sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() == sorted.back()) throw std::invalid_argument("ranking needs two classes");
  }
  const auto rows = evaluate_rows(model, X);
  RankingScores out;
  std::vector<double> scores;
  std::vector<bool> rel;
  for (Index q = 0; q < n; ++q) {
    scores.clear();
    rel.clear();
    for (Index o = 0; o < n; ++o) {
      if (o == q) continue;
      scores.push_back(query_divergence(model, rows, q, rows, o, order));
      rel.push_back(labels[o] == labels[q]);
    }
    if (std::find(rel.begin(), rel.end(), true) == rel.end()) {
      ++out.excluded;
      continue;
    }
    out.queries.push_back(q);
    out.auc.push_back(auc_from_scores(scores, rel));
    out.ave_p.push_back(average_precision(scores, rel));
  }
  if (!out.queries.empty()) {
    const double m = static_cast<double>(out.queries.size());
    out.mean_auc = std::accumulate(out.auc.begin(), out.auc.end(), 0.0) / m;
    out.mean_ave_p = std::accumulate(out.ave_p.begin(), out.ave_p.end(), 0.0) / m;
  }
  return out;
}

std::vector<int> knn_predict(const MaxAffineModeld& model, const Eigen::MatrixXd& X_train,
                             const std::vector<int>& y_train, const Eigen::MatrixXd& X_test,
                             Index k_neighbors, ArgumentOrder order) {
  const Index n = X_train.rows();
  if (static_cast<Index>(y_train.size()) != n) throw std::invalid_argument("one label per training point required");
  if (k_neighbors < 1 || k_neighbors > n) {
    std::ostringstream os;
    os << "k_neighbors = " << k_neighbors << " must lie in [1, " << n << "]";
    throw std::invalid_argument(os.str());
  }
  const auto train = evaluate_rows(model, X_train);
  const auto test = evaluate_rows(model, X_test);
  std::vector<int> out(X_test.rows());
  std::vector<std::pair<double, Index>> cand(n);
  for (Index q = 0; q < X_test.rows(); ++q) {
    for (Index o = 0; o < n; ++o) cand[o] = {query_divergence(model, test, q, train, o, order), o};
    std::partial_sort(cand.begin(), cand.begin() + k_neighbors, cand.end());
    std::map<int, Index> votes;
    for (Index r = 0; r < k_neighbors; ++r) ++votes[y_train[cand[r].second]];
    int best = votes.begin()->first;
    Index best_count = votes.begin()->second;
    for (const auto& [label, count] : votes) {
      if (count > best_count) {
        best = label;
        best_count = count;
      }
    }
    out[q] = best;
  }
  return out;
}

double knn_classify(const MaxAffineModeld& model, const Eigen::MatrixXd& X_train,
                    const std::vector<int>& y_train, const Eigen::MatrixXd& X_test,
                    const std::vector<int>& y_test, Index k_neighbors, ArgumentOrder order) {
  if (static_cast<Index>(y_test.size()) != X_test.rows()) throw std::invalid_argument("one label per test point required");
  if (X_test.rows() == 0) throw std::invalid_argument("no test points");
  const auto pred = knn_predict(model, X_train, y_train, X_test, k_neighbors, order);
  Index hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == y_test[i];
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

}  // namespace bregman::tasks
