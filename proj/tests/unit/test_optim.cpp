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

#include <random>
#include <sstream>

#include "bregman/optim/program.hpp"
#include "oracles/lp_oracles.hpp"
#include "oracles/random_programs.hpp"

using namespace bregman::optim;

TEST_CASE("lp: single lower-bound row") {
  LinearProgram lp(1);
  lp.set_objective(0, 1.0);
  lp.add_constraint({0}, {-1.0}, -1.0);
  const auto r = solve_lp(lp);
  REQUIRE(r.status == SolveStatus::optimal);
  CHECK(r.solution(0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.objective == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("lp: box corner matches vertex enumeration") {
  LinearProgram lp(2);
  lp.set_objective(0, -1.0);
  lp.set_objective(1, -1.0);
  lp.add_constraint({0}, {1.0}, 1.0);
  lp.add_constraint({1}, {1.0}, 1.0);
  lp.set_lower_bound(0, 0.0);
  lp.set_lower_bound(1, 0.0);
  const auto r = solve_lp(lp);
  REQUIRE(r.status == SolveStatus::optimal);
  CHECK(r.solution(0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.solution(1) == doctest::Approx(1.0).epsilon(1e-6));

  oracle::DenseLp dense;
  dense.A.resize(4, 2);
  dense.A << 1, 0, 0, 1, -1, 0, 0, -1;
  dense.b = Eigen::Vector4d(1, 1, 0, 0);
  dense.c = Eigen::Vector2d(-1, -1);
  const auto best = oracle::vertex_enumeration(dense);
  REQUIRE(best);
  CHECK(*best == doctest::Approx(-2.0));
  CHECK(r.objective == doctest::Approx(*best).epsilon(1e-6));
}

TEST_CASE("lp: contradictory rows are reported infeasible") {
  LinearProgram lp(1);
  lp.set_objective(0, 1.0);
  lp.add_constraint({0}, {1.0}, 0.0);
  lp.add_constraint({0}, {-1.0}, -1.0);
  const auto r = solve_lp(lp);
  CHECK(r.status == SolveStatus::infeasible);
  CHECK(r.max_violation > 0.1);
}

TEST_CASE("lp: unbounded objective throws") {
  LinearProgram lp(1);
  lp.set_objective(0, -1.0);
  lp.set_lower_bound(0, 0.0);
  CHECK_THROWS_AS(solve_lp(lp), UnboundedProblem);
}

TEST_CASE("lp: random instances agree with both oracles") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const auto inst = oracle::random_bounded_lp(rng);
    const auto r = solve_lp(inst.lp);
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(r.max_violation <= 1e-7);
    const auto best = oracle::vertex_enumeration(inst.dense);
    REQUIRE(best);
    CHECK(std::abs(r.objective - *best) <= 1e-5 * std::max(1.0, std::abs(*best)));
    const auto simplex =
        oracle::dense_simplex(inst.dense.A.topRows(inst.dense.A.rows() - inst.lower.size()),
                              inst.dense.b.head(inst.dense.b.size() - inst.lower.size()),
                              inst.dense.c, inst.lower);
    REQUIRE(simplex.status == oracle::SimplexStatus::optimal);
    CHECK(simplex.objective == doctest::Approx(*best).epsilon(1e-7));
  }
}

TEST_CASE("lp: many satellite columns agree with the simplex oracle") {
  // min sum s_t  s.t. g_t^T x - s_t <= -1, s_t >= 0, |x| <= 3
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  const int p = 4, m = 40;
  LinearProgram lp(p + m);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m + 2 * p, p + m);
  Eigen::VectorXd b(m + 2 * p);
  for (int t = 0; t < m; ++t) {
    std::vector<Index> cols;
    std::vector<double> vals;
    for (int j = 0; j < p; ++j) {
      const double g = normal(rng);
      cols.push_back(j);
      vals.push_back(g);
      A(t, j) = g;
    }
    cols.push_back(p + t);
    vals.push_back(-1.0);
    A(t, p + t) = -1.0;
    b(t) = -1.0;
    lp.add_constraint(cols, vals, -1.0);
    lp.set_lower_bound(p + t, 0.0);
    lp.set_objective(p + t, 1.0);
  }
  Eigen::VectorXd lower = Eigen::VectorXd::Zero(p + m);
  for (int j = 0; j < p; ++j) {
    lp.set_lower_bound(j, -3.0);
    lp.set_upper_bound(j, 3.0);
    A(m + j, j) = 1.0;
    b(m + j) = 3.0;
    A(m + p + j, j) = -1.0;
    b(m + p + j) = 3.0;
    lower(j) = -3.0;
  }
  Eigen::VectorXd c = Eigen::VectorXd::Zero(p + m);
  c.tail(m).setOnes();
  const auto r = solve_lp(lp);
  REQUIRE(r.status == SolveStatus::optimal);
  const auto ref = oracle::dense_simplex(A.topRows(m + p), b.head(m + p), c, lower);
  REQUIRE(ref.status == oracle::SimplexStatus::optimal);
  CHECK(r.objective == doctest::Approx(ref.objective).epsilon(1e-6));
}

TEST_CASE("lp: determinism and objective scaling") {
  std::mt19937_64 rng(3);
  const auto inst = oracle::random_bounded_lp(rng, 5, 10);
  const auto a = solve_lp(inst.lp);
  const auto b = solve_lp(inst.lp);
  REQUIRE(a.status == SolveStatus::optimal);
  CHECK(a.solution == b.solution);
  CHECK(a.iterations == b.iterations);

  LinearProgram scaled = inst.lp;
  for (Index j = 0; j < scaled.num_vars(); ++j) scaled.set_objective(j, 7.5 * inst.lp.objective()(j));
  const auto s = solve_lp(scaled);
  REQUIRE(s.status == SolveStatus::optimal);
  CHECK((s.solution - a.solution).lpNorm<Eigen::Infinity>() <= 1e-6);
  CHECK(s.objective == doctest::Approx(7.5 * a.objective).epsilon(1e-6));
}

TEST_CASE("qp: worked examples") {
  SUBCASE("unconstrained") {
    QuadraticProgram qp(1);
    qp.add_residual({0}, {1.0}, 3.0);
    const auto r = solve_qp(qp);
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(r.solution(0) == doctest::Approx(3.0).epsilon(1e-7));
  }
  SUBCASE("active bound") {
    QuadraticProgram qp(1);
    qp.add_residual({0}, {1.0}, 3.0);
    qp.constraints().add_constraint({0}, {1.0}, 1.0);
    const auto r = solve_qp(qp);
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(r.solution(0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.duals(0) == doctest::Approx(4.0).epsilon(1e-5));
  }
  SUBCASE("projection onto a halfspace") {
    QuadraticProgram qp(2);
    qp.add_residual({0}, {1.0}, 1.0);
    qp.add_residual({1}, {1.0}, 2.0);
    qp.constraints().add_constraint({0, 1}, {1.0, 1.0}, 1.0);
    const auto r = solve_qp(qp);
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(r.solution(0) == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(std::abs(r.solution(0)) <= 1e-6);
    CHECK(r.solution(1) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.objective == doctest::Approx(2.0).epsilon(1e-6));
  }
}

TEST_CASE("qp: random instances satisfy KKT") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const auto qp = oracle::random_qp(rng, 2 + trial % 5, 3 + trial, 4 + trial);
    const auto r = solve_qp(qp);
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(oracle::qp_kkt_residual(qp, r) <= 1e-6);
  }
}

TEST_CASE("sparse rows merge repeated columns") {
  SparseRows rows;
  rows.add_row({2, 0, 2, 1}, {1.0, 3.0, -1.0, 2.0});
  REQUIRE(rows.rows() == 1);
  CHECK(rows.cols(0).size() == 2);
  Eigen::VectorXd x(3);
  x << 1.0, 10.0, 100.0;
  CHECK(rows.dot(0, x) == doctest::Approx(23.0));
}

TEST_CASE("program text dump") {
  LinearProgram lp(2);
  lp.set_objective(1, 2.5);
  lp.set_lower_bound(0, 0.0);
  lp.add_constraint({0, 1}, {1.0, -1.0}, 4.0);
  std::ostringstream os;
  write_program_text(os, lp);
  CHECK(os.str() == "lp 2 1\nc 1:2.5\nbound 0 0 inf\nrow 2 0:1 1:-1 <= 4\n");

  QuadraticProgram qp(1);
  qp.add_residual({0}, {1.0}, 0.1);
  std::ostringstream qs;
  write_program_text(qs, qp);
  CHECK(qs.str() == "qp 1 0\nc\nres 1 0:1 = 0.10000000000000001\n");
}

TEST_CASE("invalid program input") {
  LinearProgram lp(2);
  CHECK_THROWS_AS(lp.set_objective(5, 1.0), std::out_of_range);
  CHECK_THROWS_AS(lp.add_constraint({0}, {1.0}, kInfinity), std::invalid_argument);
  CHECK_THROWS_AS(lp.add_constraint({0}, {std::nan("")}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(LinearProgram(0), std::invalid_argument);
}
