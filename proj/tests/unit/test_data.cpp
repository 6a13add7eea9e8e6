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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <string>

#include "bregman/data/dataset.hpp"
#include "bregman/data/splits.hpp"
#include "bregman/data/synthetic.hpp"

using namespace bregman::data;
using Eigen::Index;
using Eigen::Vector2d;
using Eigen::VectorXd;

namespace fs = std::filesystem;

namespace {

fs::path fixture(const std::string& name) { return fs::path(BREGMAN_TEST_DATA_DIR) / name; }

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "bregman_test_data";
  fs::create_directories(dir);
  return dir / name;
}

std::string thrown_message(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("true_divergence: spec values") {
  SyntheticSpec kl;
  kl.kind = GeneratorKind::kl_dirichlet;
  const double expect = 0.75 * std::log(1.5) + 0.25 * std::log(0.5);
  CHECK(true_divergence(kl, Vector2d(0.75, 0.25), Vector2d(0.5, 0.5)) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(expect == doctest::Approx(0.130812).epsilon(1e-5));

  SyntheticSpec mah;
  mah.kind = GeneratorKind::mahalanobis;
  mah.mahalanobis = Eigen::Matrix2d::Identity();
  CHECK(true_divergence(mah, Vector2d(1, 0), Vector2d(0, 0)) == 1.0);
}

TEST_CASE("true_divergence: itakura-saito and logdet by hand") {
  SyntheticSpec is;
  is.kind = GeneratorKind::itakura_saito;
  // 2 - ln 2 - 1 per coordinate
  CHECK(true_divergence(is, Vector2d(1.0, 1.0), Vector2d(0.5, 0.5)) == doctest::Approx(2.0 * (1.0 - std::log(2.0))));

  SyntheticSpec ld;
  ld.kind = GeneratorKind::logdet_wishart;
  // A = 2I, B = I: tr(2I) - ln det(2I) - 2 = 2 - 2 ln 2
  CHECK(true_divergence(ld, Eigen::Vector3d(2, 2, 0), Eigen::Vector3d(1, 1, 0)) ==
        doctest::Approx(2.0 - 2.0 * std::log(2.0)));
}

TEST_CASE("synthetic generators: domains, zero diagonal and nonnegativity") {
  for (auto kind : all_generators()) {
    CAPTURE(to_string(kind));
    SyntheticSpec spec;
    spec.kind = kind;
    spec.n = 40;
    spec.seed = 17;
    const auto X = sample_points(spec);
    REQUIRE(X.rows() == 40);
    for (Index i = 0; i < X.rows(); ++i) {
      const VectorXd x = X.row(i).transpose();
      switch (kind) {
        case GeneratorKind::kl_dirichlet:
          CHECK(std::abs(x.sum() - 1.0) <= 1e-12);
          CHECK(x.minCoeff() >= 0.0);
          break;
        case GeneratorKind::itakura_saito:
          CHECK(x.minCoeff() >= 0.1);
          CHECK(x.maxCoeff() <= 1.6);
          break;
        case GeneratorKind::logdet_wishart:
          CHECK(x(0) + x(1) > 0.0);
          CHECK(x(0) * x(1) - x(2) * x(2) > 0.0);
          break;
        default:
          CHECK(x.maxCoeff() <= 1.6);
          CHECK(x.minCoeff() >= -0.4);
      }
      CHECK(std::abs(true_divergence(spec, x, x)) <= 1e-12);
      for (Index j = 0; j < X.rows(); ++j) CHECK(true_divergence(spec, x, X.row(j).transpose()) >= -1e-12);
    }
  }
}

TEST_CASE("generate_synthetic: all ordered pairs and noise scale") {
  SyntheticSpec spec;
  spec.n = 30;
  spec.sigma = 0.0;
  const auto clean = generate_synthetic(spec);
  CHECK(clean.pairs.size() == 30 * 29);
  CHECK(clean.pairs.targets == clean.clean);
  for (const auto& [i, j] : clean.pairs.pairs) CHECK(i != j);

  spec.sigma = 0.05;
  const auto noisy = generate_synthetic(spec);
  CHECK(noisy.X == clean.X);
  double ss = 0.0;
  for (std::size_t t = 0; t < noisy.clean.size(); ++t) {
    const double e = noisy.pairs.targets[t] - noisy.clean[t];
    ss += e * e;
  }
  CHECK(std::sqrt(ss / noisy.clean.size()) == doctest::Approx(0.05).epsilon(0.1));
}

TEST_CASE("SyntheticSpec: validation") {
  SyntheticSpec spec;
  spec.n = 1;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.n = 5;
  spec.sigma = -1.0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.sigma = 0.0;
  spec.mahalanobis << 1, 0, 0, -1;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  CHECK(parse_generator("itakura_saito") == GeneratorKind::itakura_saito);
  CHECK_FALSE(parse_generator("hellinger").has_value());
}

TEST_CASE("load_csv: fixtures") {
  const auto ds = load_csv(fixture("tiny.csv"), "label");
  CHECK(ds.size() == 3);
  CHECK(ds.dim() == 2);
  CHECK(ds.labels == std::vector<std::string>{"a", "b", "a"});
  CHECK(ds.X(1, 0) == -3.5);
  CHECK(ds.X(2, 1) == 0.5);
  CHECK(ds.radius() == 4.0);
  CHECK(ds.label_ids() == std::vector<int>{0, 1, 0});

  const auto missing = thrown_message([] { load_csv(fixture("tiny.csv"), "class"); });
  CHECK(missing.find("class") != std::string::npos);

  const auto nan = thrown_message([] { load_csv(fixture("nan_cell.csv"), "label"); });
  CHECK(nan.find("row 1") != std::string::npos);
  CHECK(nan.find("f1") != std::string::npos);

  const auto empty = scratch("empty.csv");
  { std::ofstream(empty.string()); }
  CHECK_THROWS_AS(load_csv(empty, "label"), std::invalid_argument);
}

TEST_CASE("load_csv: round trip through write_csv") {
  for (const char* name : {"iris.csv", "tiny.csv"}) {
    const std::string label = std::string(name) == "iris.csv" ? "class" : "label";
    const auto a = load_csv(fixture(name), label);
    const auto path = scratch(std::string("rt_") + name);
    write_csv(a, path);
    const auto b = load_csv(path, label);
    CHECK(a.X == b.X);
    CHECK(a.labels == b.labels);
    CHECK(a.feature_names == b.feature_names);
  }
}

TEST_CASE("sample_triplets: class structure and determinism") {
  const auto ds = load_csv(fixture("iris.csv"), "class");
  const auto ids = ds.label_ids();
  const auto t = sample_triplets(ds, 2000, 5);
  CHECK(t.size() == 2000);
  t.validate(ds.size());
  for (const auto& q : t.items) {
    CHECK(q[0] == q[2]);
    CHECK(q[0] != q[1]);
    CHECK(ids[q[0]] == ids[q[1]]);
    CHECK(ids[q[0]] != ids[q[3]]);
  }
  CHECK(sample_triplets(ds, 2000, 5).items == t.items);
  CHECK(sample_triplets(ds, 2000, 6).items != t.items);
  CHECK(sample_triplets(ds, 0, 5).empty());

  LabeledDataset small;
  small.X = Eigen::MatrixXd::Zero(4, 1);
  small.labels = {"p", "p", "q", "q"};
  const auto s = sample_triplets(small, 10, 1);
  for (const auto& q : s.items) CHECK(small.labels[q[0]] == small.labels[q[1]]);
  CHECK(sample_triplets(small, 10, 1).items == s.items);

  small.labels = {"p", "p", "p", "p"};
  CHECK_THROWS_AS(sample_triplets(small, 3, 1), std::invalid_argument);
}

TEST_CASE("split_folds: sizes, coverage and determinism") {
  const auto f = split_folds(6, 3, 9);
  REQUIRE(f.size() == 3);
  for (const auto& fold : f) CHECK(fold.size() == 2);
  CHECK(split_folds(6, 3, 9) == f);
  CHECK_THROWS_AS(split_folds(2, 3, 9), std::invalid_argument);

  const auto g = split_folds(151, 4, 2);
  std::set<Index> seen;
  std::size_t lo = 1000, hi = 0;
  for (const auto& fold : g) {
    lo = std::min(lo, fold.size());
    hi = std::max(hi, fold.size());
    seen.insert(fold.begin(), fold.end());
  }
  CHECK(hi - lo <= 1);
  CHECK(seen.size() == 151);
  CHECK(*seen.rbegin() == 150);
}
