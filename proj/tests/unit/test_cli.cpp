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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bregman/cli/app.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Result {
  int code = 0;
  std::string out, err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Result r;
  r.code = bregman::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string data(const std::string& name) { return std::string(BREGMAN_TEST_DATA_DIR) + "/" + name; }

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "bregman_test_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t count_lines(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) n += !line.empty();
  return n;
}

}  // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(run({"train"}).code == bregman::cli::kUsageError);
  CHECK(run({"frobnicate"}).code == bregman::cli::kUsageError);
  CHECK(run({"synth", "--generator", "hellinger", "--out", fresh_dir("bad_gen").string()}).code ==
        bregman::cli::kUsageError);
  CHECK(run({"bounds", "--beta", "2", "--R", "1", "--K", "4", "--d", "1", "--delta", "0"}).code ==
        bregman::cli::kUsageError);
  CHECK(run({"train", "--data", data("does_not_exist.csv"), "--out", fresh_dir("missing").string()}).code ==
        bregman::cli::kUsageError);
  CHECK(run({"--help"}).code == bregman::cli::kSuccess);
}

TEST_CASE("bounds: value bound and grid check") {
  const auto r = run({"bounds", "--beta", "2", "--R", "1", "--K", "4", "--d", "1"});
  REQUIRE(r.code == 0);
  const auto doc = json::parse(r.out.substr(0, r.out.rfind('}') + 1));
  CHECK(doc.at("value_bound").get<double>() == doctest::Approx(0.5));

  const auto c = run({"bounds", "--beta", "2", "--R", "1", "--K", "16", "--d", "2", "--check", "--per-axis", "41"});
  CHECK(c.code == 0);
  CHECK(c.out.find("grid check: PASS") != std::string::npos);
}

TEST_CASE("train and eval on the separable fixture") {
  const auto dir = fresh_dir("train");
  const auto t = run({"train", "--data", data("separable.csv"), "--label", "class", "--triplets", "200",
                      "--lambda", "1", "--seed", "7", "--out", dir.string()});
  REQUIRE(t.code == 0);
  for (const char* f : {"model.json", "report.json", "comparisons.csv", "timing.json"}) CHECK(fs::exists(dir / f));
  CHECK(count_lines(dir / "comparisons.csv") >= 200);

  const auto again = fresh_dir("train_again");
  REQUIRE(run({"train", "--data", data("separable.csv"), "--label", "class", "--triplets", "200", "--lambda", "1",
               "--seed", "7", "--out", again.string()})
              .code == 0);
  CHECK(slurp(dir / "report.json") == slurp(again / "report.json"));
  CHECK(slurp(dir / "model.json") == slurp(again / "model.json"));

  const auto ev = fresh_dir("eval_model");
  const auto e = run({"eval", "--data", data("separable.csv"), "--label", "class", "--model",
                      (dir / "model.json").string(), "--out", ev.string()});
  REQUIRE(e.code == 0);
  const auto m = json::parse(slurp(ev / "metrics.json"));
  for (const char* k : {"rand_index", "purity", "auc", "ave_p", "knn_acc"}) {
    CAPTURE(k);
    CHECK(m.at(k).get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  }

  const auto mismatch = run({"eval", "--data", data("iris.csv"), "--label", "class", "--model",
                             (dir / "model.json").string(), "--out", fresh_dir("mismatch").string()});
  CHECK(mismatch.code == bregman::cli::kUsageError);
}

TEST_CASE("eval: repeats produce one row each and a summary") {
  const auto dir = fresh_dir("repeats");
  const auto e = run({"eval", "--data", data("separable.csv"), "--label", "class", "--triplets", "100", "--lambda",
                      "1", "--repeats", "12", "--seed", "3", "--out", dir.string()});
  REQUIRE(e.code == 0);
  CHECK(count_lines(dir / "results.csv") == 13);
  const auto m = json::parse(slurp(dir / "metrics.json"));
  CHECK(m.at("per_fold").at("auc").size() == 12);
  CHECK(m.at("auc").get<double>() == doctest::Approx(1.0));
  CHECK(m.at("ci95_half_width").at("auc").get<double>() == doctest::Approx(0.0));
  CHECK(e.out.find("auc") != std::string::npos);
}

TEST_CASE("train: solver iteration limit exits 1 with diagnostics") {
  const auto dir = fresh_dir("limit");
  const auto t = run({"train", "--data", data("separable.csv"), "--label", "class", "--triplets", "200", "--lambda",
                      "1", "--max-iter", "2", "--out", dir.string()});
  CHECK(t.code == bregman::cli::kSolverFailure);
  CHECK(fs::exists(dir / "diagnostics.json"));
}

TEST_CASE("synth: export then regression training") {
  const auto dir = fresh_dir("synth");
  const auto s = run({"synth", "--generator", "squared_euclidean", "--schedule", "6,12", "--seeds", "3",
                      "--test-points", "40", "--out", dir.string()});
  REQUIRE(s.code == 0);
  CHECK(count_lines(dir / "synth.csv") == 3);
  CHECK(count_lines(dir / "synth_runs.csv") == 7);

  const auto ex = fresh_dir("export");
  REQUIRE(run({"synth", "--generator", "kl_dirichlet", "--export", "10", "--seed", "2", "--out", ex.string()}).code ==
          0);
  const auto t = run({"train", "--mode", "regression", "--data", (ex / "points.csv").string(), "--pairs",
                      (ex / "pairs.csv").string(), "--lambda", "0", "--out", ex.string()});
  CHECK(t.code == 0);
  CHECK(fs::exists(ex / "model.json"));
}

TEST_CASE("partition and the output directory variable") {
  const auto dir = fresh_dir("partition");
  setenv(bregman::cli::kOutDirEnv, dir.string().c_str(), 1);
  const auto p = run({"partition", "--data", data("separable.csv"), "--label", "class", "--K", "3"});
  unsetenv(bregman::cli::kOutDirEnv);
  REQUIRE(p.code == 0);
  const auto doc = json::parse(slurp(dir / "partition.json"));
  CHECK(doc.at("assignment").size() == 24);
  CHECK(doc.at("centers").size() == 3);
  CHECK(doc.at("cells").get<int>() == 3);
  for (std::size_t c = 0; c < 3; ++c) {
    const auto center = doc.at("centers")[c].get<std::size_t>();
    CHECK(doc.at("assignment")[center].get<std::size_t>() == c);
  }
}
