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


#include "bregman/data/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace bregman::data {

namespace {

constexpr double kLogFloor = 1e-9;

Eigen::Matrix2d unflatten(const Eigen::VectorXd& v) {
  Eigen::Matrix2d m;
  m << v(0), v(2), v(2), v(1);
  return m;
}

}  // namespace

const char* to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::kl_dirichlet: return "kl_dirichlet";
    case GeneratorKind::logdet_wishart: return "logdet_wishart";
    case GeneratorKind::itakura_saito: return "itakura_saito";
    case GeneratorKind::mahalanobis: return "mahalanobis";
    case GeneratorKind::squared_euclidean: return "squared_euclidean";
  }
  return "unknown";
}

const std::vector<GeneratorKind>& all_generators() {
  static const std::vector<GeneratorKind> kinds = {
      GeneratorKind::kl_dirichlet, GeneratorKind::logdet_wishart, GeneratorKind::itakura_saito,
      GeneratorKind::mahalanobis, GeneratorKind::squared_euclidean};
  return kinds;
}

std::optional<GeneratorKind> parse_generator(const std::string& name) {
  for (GeneratorKind k : all_generators()) {
    if (name == to_string(k)) return k;
  }
  return std::nullopt;
}

void SyntheticSpec::validate() const {
  if (n < 2) throw std::invalid_argument("synthetic data needs n >= 2");
  if (!std::isfinite(sigma) || sigma < 0.0) throw std::invalid_argument("sigma must be >= 0");
  if (!mahalanobis.allFinite() || (mahalanobis - mahalanobis.transpose()).cwiseAbs().maxCoeff() > 0.0 ||
      mahalanobis.llt().info() != Eigen::Success) {
    throw std::invalid_argument("Mahalanobis matrix must be symmetric positive definite");
  }
}

Eigen::MatrixXd sample_points(const SyntheticSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  const Eigen::Index n = spec.n;
  Eigen::MatrixXd X;
  switch (spec.kind) {
    case GeneratorKind::kl_dirichlet: {
      std::gamma_distribution<double> gamma(1.0, 1.0);
      X.resize(n, 2);
      for (Eigen::Index i = 0; i < n; ++i) {
        const double g0 = gamma(rng), g1 = gamma(rng);
        X(i, 0) = g0 / (g0 + g1);
        X(i, 1) = 1.0 - X(i, 0);
      }
      break;
    }
    case GeneratorKind::logdet_wishart: {
      std::normal_distribution<double> normal;
      X.resize(n, 3);
      for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Matrix2d W = Eigen::Matrix2d::Zero();
        for (int k = 0; k < 10; ++k) {
          const Eigen::Vector2d g(normal(rng), normal(rng));
          W += g * g.transpose();
        }
        X.row(i) << W(0, 0), W(1, 1), W(0, 1);
      }
      break;
    }
    case GeneratorKind::itakura_saito: {
      std::uniform_real_distribution<double> u(0.1, 1.6);
      X.resize(n, 2);
      for (Eigen::Index i = 0; i < n; ++i) X.row(i) << u(rng), u(rng);
      break;
    }
    case GeneratorKind::mahalanobis:
    case GeneratorKind::squared_euclidean: {
      std::uniform_real_distribution<double> u(-0.4, 1.6);
      X.resize(n, 2);
      for (Eigen::Index i = 0; i < n; ++i) X.row(i) << u(rng), u(rng);
      break;
    }
  }
  return X;
}

double true_divergence(const SyntheticSpec& spec, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  switch (spec.kind) {
    case GeneratorKind::kl_dirichlet: {
      double d = 0.0;
      for (Eigen::Index c = 0; c < x.size(); ++c) {
        d += x(c) * (std::log(std::max(x(c), kLogFloor)) - std::log(std::max(y(c), kLogFloor)));
      }
      return d;
    }
    case GeneratorKind::logdet_wishart: {
      const Eigen::Matrix2d A = unflatten(x);
      const Eigen::Matrix2d B = unflatten(y);
      const Eigen::Matrix2d P = A * B.inverse();
      return P.trace() - std::log(P.determinant()) - 2.0;
    }
    case GeneratorKind::itakura_saito: {
      double d = 0.0;
      for (Eigen::Index c = 0; c < x.size(); ++c) {
        const double r = x(c) / y(c);
        d += r - std::log(r) - 1.0;
      }
      return d;
    }
    case GeneratorKind::mahalanobis: {
      const Eigen::Vector2d diff = x - y;
      return diff.dot(spec.mahalanobis * diff);
    }
    case GeneratorKind::squared_euclidean:
      return (x - y).squaredNorm();
  }
  return 0.0;
}

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  SyntheticData out;
  out.X = sample_points(spec);
  std::mt19937_64 noise_rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> noise(0.0, 1.0);
  const Eigen::Index n = out.X.rows();
  out.pairs.sigma = spec.sigma;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd xi = out.X.row(i).transpose();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = true_divergence(spec, xi, out.X.row(j).transpose());
      out.clean.push_back(d);
      out.pairs.pairs.emplace_back(i, j);
      out.pairs.targets.push_back(d + spec.sigma * noise(noise_rng));
    }
  }
  return out;
}

}  // namespace bregman::data
