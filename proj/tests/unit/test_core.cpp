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

#include <cmath>
#include <filesystem>
#include <random>

#include "bregman/bounds.hpp"
#include "bregman/covering.hpp"
#include "bregman/interpolant.hpp"
#include "bregman/max_affine.hpp"
#include "bregman/model_io.hpp"

using namespace bregman;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MaxAffineModeld v_model() {
  MatrixXd a(2, 1);
  a << 1, -1;
  return MaxAffineModeld(a, VectorXd::Zero(2), 1.0);
}

// Tangents to x^2 at -1, 0, 1.
MaxAffineModeld tangent_model() {
  MatrixXd a(3, 1);
  a << -2, 0, 2;
  VectorXd b(3);
  b << -1, 0, -1;
  return MaxAffineModeld(a, b, 2.0);
}

MaxAffineModeld random_model(std::mt19937_64& rng, Eigen::Index K, Eigen::Index d) {
  std::normal_distribution<double> g(0.0, 1.0);
  MatrixXd a(K, d);
  VectorXd b(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    for (Eigen::Index c = 0; c < d; ++c) a(k, c) = g(rng);
    b(k) = g(rng);
  }
  return MaxAffineModeld(a, b, a.rowwise().lpNorm<1>().maxCoeff());
}

VectorXd random_point(std::mt19937_64& rng, Eigen::Index d, double R = 1.0) {
  std::uniform_real_distribution<double> u(-R, R);
  VectorXd x(d);
  for (Eigen::Index c = 0; c < d; ++c) x(c) = u(rng);
  return x;
}

VectorXd vec1(double v) { return VectorXd::Constant(1, v); }

}  // namespace

TEST_CASE("evaluate: max of two lines") {
  const auto e = evaluate(v_model(), vec1(2.0));
  CHECK(e.value == 2.0);
  CHECK(e.active == 0);
}

TEST_CASE("evaluate: ties go to the lowest index") {
  const auto e = evaluate(v_model(), vec1(0.0));
  CHECK(e.value == 0.0);
  CHECK(e.active == 0);
}

TEST_CASE("evaluate: tangent model of x^2") {
  const auto e = evaluate(tangent_model(), vec1(0.5));
  CHECK(e.value == 0.0);
  CHECK(e.active == 1);
}

TEST_CASE("evaluate: dimension mismatch names both dimensions") {
  try {
    evaluate(v_model(), VectorXd::Zero(2));
    FAIL("expected an exception");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find('1') != std::string::npos);
    CHECK(msg.find('2') != std::string::npos);
  }
}

TEST_CASE("model: rejects slopes above the Lipschitz budget") {
  MatrixXd a(1, 2);
  a << 1, 1;
  CHECK_THROWS_AS(MaxAffineModeld(a, VectorXd::Zero(1), 1.5), std::invalid_argument);
  CHECK_NOTHROW(MaxAffineModeld(a, VectorXd::Zero(1), 2.0 + 0.5e-7));
}

TEST_CASE("bregman: zero on the diagonal and for affine models") {
  std::mt19937_64 rng(1);
  const auto m = random_model(rng, 5, 3);
  const VectorXd x = random_point(rng, 3);
  CHECK(bregman::bregman(m, x, x).value == 0.0);

  const auto affine = random_model(rng, 1, 3);
  CHECK(bregman::bregman(affine, random_point(rng, 3), random_point(rng, 3)).value == doctest::Approx(0.0));
}

TEST_CASE("bregman: tangent model reproduces D_{x^2}(1, -1) = 4") {
  const auto b = bregman::bregman(tangent_model(), vec1(1.0), vec1(-1.0));
  CHECK(b.value == doctest::Approx(4.0));
  CHECK(b.active_first == 2);
  CHECK(b.active_second == 0);
}

TEST_CASE("bregman: non-negative, identity and subgradient inequality on random models") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index d = 1 + trial % 4;
    const auto m = random_model(rng, 1 + trial % 9, d);
    const VectorXd x = random_point(rng, d);
    CHECK(bregman::bregman(m, x, x).value == 0.0);
    const auto hx = evaluate(m, x);
    for (int s = 0; s < 20; ++s) {
      const VectorXd y = random_point(rng, d);
      CHECK(bregman::bregman(m, y, x).value >= -1e-12);
      const double lower = hx.value + m.slopes().row(hx.active).dot(y - x);
      CHECK(evaluate(m, y).value >= lower - 1e-12);
    }
  }
}

TEST_CASE("divergence_matrix agrees with pointwise bregman") {
  std::mt19937_64 rng(3);
  const auto m = random_model(rng, 6, 2);
  MatrixXd A(4, 2), B(3, 2);
  for (int i = 0; i < 4; ++i) A.row(i) = random_point(rng, 2).transpose();
  for (int i = 0; i < 3; ++i) B.row(i) = random_point(rng, 2).transpose();
  const MatrixXd D = divergence_matrix(m, A, B);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 3; ++j) {
      CHECK(D(i, j) == doctest::Approx(bregman::bregman(m, A.row(i), B.row(j)).value).epsilon(1e-12));
    }
  }
}

TEST_CASE("interpolant_to_model: single anchor gives a constant") {
  InterpolantSolutiond sol;
  sol.points = MatrixXd::Zero(1, 2);
  sol.values = VectorXd::Constant(1, 5.0);
  sol.subgradients = MatrixXd::Zero(1, 2);
  const auto m = interpolant_to_model(sol);
  CHECK(m.planes() == 1);
  CHECK(evaluate(m, Eigen::Vector2d(3.0, -7.0)).value == 5.0);
}

TEST_CASE("interpolant_to_model: quadratic anchors give the tangent model") {
  InterpolantSolutiond sol;
  sol.points = MatrixXd(3, 1);
  sol.points << -1, 0, 1;
  sol.values = VectorXd(3);
  sol.values << 1, 0, 1;
  sol.subgradients = 2.0 * sol.points;
  const auto m = interpolant_to_model(sol);
  const auto ref = tangent_model();
  CHECK(m.slopes().isApprox(ref.slopes()));
  CHECK((m.offsets() - ref.offsets()).norm() == doctest::Approx(0.0));
  CHECK(m.lipschitz() == 2.0);
  for (int i = 0; i < 3; ++i) CHECK(evaluate(m, sol.points.row(i)).value == doctest::Approx(sol.values(i)));
}

TEST_CASE("interpolant_to_model: infeasible anchors report the pair") {
  InterpolantSolutiond sol;
  sol.points = MatrixXd(2, 1);
  sol.points << 0, 1;
  sol.values = VectorXd(2);
  sol.values << 0, -1;  // z_1 - z_0 = -1 but a_0 (x_1 - x_0) = 0
  sol.subgradients = MatrixXd::Zero(2, 1);
  try {
    interpolant_to_model(sol);
    FAIL("expected an exception");
  } catch (const InfeasibleInterpolant& e) {
    CHECK(e.i() == 1);
    CHECK(e.j() == 0);
    CHECK(e.violation() == doctest::Approx(1.0));
  }
}

TEST_CASE("interpolant round trip on random convex functions") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index d = 1 + trial % 3;
    const auto truth = random_model(rng, 4, d);
    MatrixXd P(8, d);
    for (int i = 0; i < 8; ++i) P.row(i) = random_point(rng, d).transpose();
    const auto sol = model_to_interpolant(truth, P);
    CHECK(check_feasibility(sol).worst_violation <= 1e-12);
    const auto m = interpolant_to_model(sol);
    for (int i = 0; i < 8; ++i) CHECK(std::abs(evaluate(m, P.row(i)).value - sol.values(i)) <= 1e-9);
  }
}

TEST_CASE("covering_grid: hand constructions") {
  const auto g1 = covering_grid(1.0, 1, 2);
  REQUIRE(g1.centers.rows() == 2);
  CHECK(g1.centers(0, 0) == -0.5);
  CHECK(g1.centers(1, 0) == 0.5);
  CHECK(g1.epsilon == 0.5);

  const auto g2 = covering_grid(1.0, 2, 4);
  REQUIRE(g2.centers.rows() == 4);
  CHECK(g2.epsilon == 0.5);
  for (int i = 0; i < 4; ++i) CHECK(g2.centers.row(i).cwiseAbs().isApprox(Eigen::RowVector2d(0.5, 0.5)));

  const auto g3 = covering_grid(1.0, 2, 1);
  REQUIRE(g3.centers.rows() == 1);
  CHECK(g3.centers.row(0).isZero());
  CHECK(g3.epsilon == 1.0);
}

TEST_CASE("covering_grid: every lattice point lies within epsilon of a center") {
  for (Eigen::Index K : {1, 5, 9, 30}) {
    const auto g = covering_grid(2.0, 2, K);
    CHECK(g.centers.rows() == g.per_axis * g.per_axis);
    for (double u = -2.0; u <= 2.0; u += 0.1) {
      for (double v = -2.0; v <= 2.0; v += 0.1) {
        const Eigen::RowVector2d x(u, v);
        const double best = (g.centers.rowwise() - x).rowwise().lpNorm<Eigen::Infinity>().minCoeff();
        CHECK(best <= g.epsilon + 1e-12);
      }
    }
  }
}

TEST_CASE("cells_per_axis is exact at perfect powers") {
  CHECK(cells_per_axis(27, 3) == 3);
  CHECK(cells_per_axis(26, 3) == 2);
  CHECK(cells_per_axis(1000, 3) == 10);
  CHECK(cells_per_axis(24, 2) == 4);
}

TEST_CASE("grid_approximator: tangents of x^2 at +-0.5") {
  const auto m = grid_approximator(squared_norm_spec<double>(1), 2);
  REQUIRE(m.planes() == 2);
  CHECK(m.slopes()(0, 0) == doctest::Approx(-1.0));
  CHECK(m.offsets()(0) == doctest::Approx(-0.25));
  CHECK(m.slopes()(1, 0) == doctest::Approx(1.0));
  CHECK(m.offsets()(1) == doctest::Approx(-0.25));
}

TEST_CASE("grid_approximator: linear generator is reproduced exactly") {
  SmoothConvexSpec<double> spec;
  spec.value = [](const VectorXd& x) { return 3.0 * x(0) - x(1) + 2.0; };
  spec.gradient = [](const VectorXd&) -> VectorXd { return Eigen::Vector2d(3.0, -1.0); };
  spec.beta = 1.0;
  spec.radius = 1.0;
  spec.dim = 2;
  const auto g = grid_check(spec, 9, 41);
  CHECK(g.value_error <= 1e-12);
}

TEST_CASE("grid_approximator: non-finite generator names the point") {
  SmoothConvexSpec<double> spec = squared_norm_spec<double>(1);
  spec.value = [](const VectorXd& x) { return x(0) > 0 ? std::log(-1.0) : 0.0; };
  CHECK_THROWS_AS(grid_approximator(spec, 2), std::domain_error);
}

TEST_CASE("grid_check: squared norm within the closed-form bounds") {
  for (Eigen::Index d : {1, 2}) {
    for (Eigen::Index K : {1, 4, 9, 16}) {
      const auto g = grid_check(squared_norm_spec<double>(d), K, 101);
      CAPTURE(d);
      CAPTURE(K);
      CHECK(g.value_error <= g.value_bound);
      CHECK(g.minorant_violation <= 1e-12);
      if (g.breg_checked) CHECK(g.breg_error <= g.breg_bound);
      CHECK(g.pass());
    }
  }
  const auto g = grid_check(squared_norm_spec<double>(2), 4, 101);
  CHECK(g.value_bound == doctest::Approx(4.0 * 4.0 / 4.0));
}

TEST_CASE("grid_approximator works in single precision") {
  const auto m = grid_approximator(squared_norm_spec<float>(2), 16);
  const Eigen::Vector2f x(0.3f, -0.2f);
  const float h = evaluate(m, x).value;
  CHECK(h <= x.squaredNorm() + 1e-6f);
  CHECK(x.squaredNorm() - h <= 4.0f * 4.0f / 16.0f);
}

TEST_CASE("bounds: closed-form arithmetic") {
  BoundInputs in;
  in.beta = 2;
  in.R = 1;
  in.K = 4;
  in.d = 1;
  CHECK(bounds(in).value_bound == doctest::Approx(0.5));

  double prev = bounds(in).value_bound;
  for (double K = 5; K < 200; K += 7) {
    in.K = K;
    const double v = bounds(in).value_bound;
    CHECK(v < prev);
    prev = v;
  }

  BoundInputs r;
  r.d = 1;
  r.m = 100;
  r.K = 10;
  r.L = 1;
  r.R = 1;
  const double expected = 4.0 * 10.0 * std::sqrt(2.0 * std::log(4.0) / 100.0);
  CHECK(bounds(r).rademacher == doctest::Approx(expected).epsilon(1e-12));
  CHECK(std::abs(bounds(r).rademacher - 6.662) < 2.5e-3);
}

TEST_CASE("bounds: theorem 3 K and term sums") {
  BoundInputs in;
  in.d = 2;
  in.m = 4096;
  const auto b = bounds(in);
  CHECK(b.regression_K == static_cast<std::int64_t>(std::ceil(std::pow(4096.0, 2.0 / 8.0))));
  CHECK(b.gen_bound == doctest::Approx(b.gen_bound_terms[0] + b.gen_bound_terms[1] + b.gen_bound_terms[2]));
  CHECK(b.regression_M == doctest::Approx(4.0 * in.L * in.R + in.sigma));
}

TEST_CASE("bounds: invalid inputs") {
  BoundInputs in;
  in.delta = 0.0;
  CHECK_THROWS_AS(bounds(in), std::invalid_argument);
  in.delta = 1.0;
  CHECK_THROWS_AS(bounds(in), std::invalid_argument);
  in.delta = 0.1;
  in.K = -1.0;
  CHECK_THROWS_AS(bounds(in), std::invalid_argument);
}

TEST_CASE("model_io: JSON round trip is bit exact") {
  std::mt19937_64 rng(5);
  auto base = random_model(rng, 7, 3);
  FeatureScale<double> fs;
  fs.offset = VectorXd::Random(3);
  fs.scale = VectorXd::Random(3).cwiseAbs() + VectorXd::Constant(3, 0.1);
  const MaxAffineModeld m(base.slopes() / 3.0, base.offsets() / 7.0, base.lipschitz() / 3.0, fs);
  const auto path = std::filesystem::temp_directory_path() / "bregman_core_model.json";
  save_model(m, path);
  const auto back = load_model(path);
  std::filesystem::remove(path);
  CHECK(back.slopes() == m.slopes());
  CHECK(back.offsets() == m.offsets());
  CHECK(back.lipschitz() == m.lipschitz());
  CHECK(back.feature_scale().offset == fs.offset);
  CHECK(back.feature_scale().scale == fs.scale);
  CHECK(model_to_json(back).dump() == model_to_json(m).dump());
}

TEST_CASE("model_io: malformed documents are rejected") {
  auto doc = model_to_json(v_model());
  doc["offsets"] = nlohmann::json::array({1.0});
  CHECK_THROWS(model_from_json(doc));
  CHECK_THROWS(model_from_json(nlohmann::json::object()));
}
