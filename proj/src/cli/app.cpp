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

#include "bregman/cli/app.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bregman/bounds.hpp"
#include "bregman/covering.hpp"
#include "bregman/data/dataset.hpp"
#include "bregman/data/synthetic.hpp"
#include "bregman/experiment/protocol.hpp"
#include "bregman/experiment/regression_study.hpp"
#include "bregman/experiment/summary.hpp"
#include "bregman/learn/cross_validate.hpp"
#include "bregman/learn/partition.hpp"
#include "bregman/learn/train.hpp"
#include "bregman/model_io.hpp"
#include "bregman/tasks/ranking.hpp"

namespace bregman::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using Clock = std::chrono::steady_clock;
using Index = Eigen::Index;

enum Stream : std::uint64_t { kTriplets = 2, kLambda = 3, kClustering = 4 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised after a diagnostics file has been written.
class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

fs::path output_dir(const std::string& flag) {
  fs::path dir;
  if (!flag.empty()) {
    dir = flag;
  } else if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') {
    dir = env;
  } else {
    dir = ".";
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw UsageError("output directory " + dir.string() + " is not writable");
  }
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path.string());
  out << text;
  if (!out) throw UsageError("cannot write " + path.string());
}

void write_json(const fs::path& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

[[noreturn]] void fail_with_diagnostics(const fs::path& dir, json diag, const std::string& what) {
  diag["error"] = what;
  write_json(dir / "diagnostics.json", diag);
  throw SolverFailure(what + " (details in " + (dir / "diagnostics.json").string() + ")");
}

/// Label column to use when none is given: the last column if its first
/// value is not a number, otherwise none.
std::string detect_label(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path.string());
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  auto last_field = [](std::string line) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    const auto pos = line.rfind(',');
    std::string f = pos == std::string::npos ? line : line.substr(pos + 1);
    while (!f.empty() && f.front() == ' ') f.erase(f.begin());
    return f;
  };
  const std::string value = last_field(row);
  if (value.empty()) return "";
  double parsed = 0.0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), parsed);
  if (res.ec == std::errc() && res.ptr == value.data() + value.size()) return "";
  return last_field(header);
}

data::LabeledDataset load_data(const std::string& path, const CLI::Option* label_opt,
                               const std::string& label) {
  if (!fs::exists(path)) throw UsageError("data file " + path + " does not exist");
  const std::string column = label_opt->count() > 0 ? label : detect_label(path);
  return data::load_csv(path, column);
}

double parse_lambda(const std::string& text, bool& automatic) {
  automatic = text == "auto";
  if (automatic) return 0.0;
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(v) || v < 0.0) {
    throw UsageError("--lambda must be 'auto' or a finite number >= 0, got '" + text + "'");
  }
  return v;
}

std::optional<Index> parse_planes(const std::string& text) {
  if (text == "n") return std::nullopt;
  long long v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || v < 1) {
    throw UsageError("--planes must be 'n' or a positive integer, got '" + text + "'");
  }
  return static_cast<Index>(v);
}

tasks::ArgumentOrder parse_order(const std::string& text) {
  if (text == "query_first") return tasks::ArgumentOrder::query_first;
  if (text == "query_second") return tasks::ArgumentOrder::query_second;
  throw UsageError("--order must be query_first or query_second");
}

json model_summary(const MaxAffineModeld& model) {
  return {{"planes", model.planes()}, {"dim", model.dim()}, {"lipschitz", model.lipschitz()}};
}


// ---------------------------------------------------------------- train

struct TrainOptions {
  std::string data, label, comparisons, pairs, mode = "comparisons", lambda = "auto",
                                               planes = "n", out;
  Index triplets = 2000;
  int folds = 3;
  std::uint64_t seed = 0;
  double lipschitz_cap = std::numeric_limits<double>::infinity();
  bool feature_scaling = false;
  int max_iter = 50000;
  CLI::Option* label_opt = nullptr;
};

void add_train(CLI::App& app, TrainOptions& o) {
  auto* c = app.add_subcommand("train", "Fit a max-affine Bregman divergence");
  c->add_option("--data", o.data, "CSV of points (header row)")->required();
  o.label_opt = c->add_option("--label", o.label,
                              "Label column; defaults to the last column when it is not numeric");
  c->add_option("--mode", o.mode, "comparisons or regression")
      ->check(CLI::IsMember({"comparisons", "regression"}));
  c->add_option("--triplets", o.triplets, "Triplets sampled from the labels")
      ->check(CLI::NonNegativeNumber);
  c->add_option("--comparisons", o.comparisons, "CSV of comparisons i,j,k,l instead of sampling");
  c->add_option("--pairs", o.pairs, "CSV of regression targets i,j,y");
  c->add_option("--lambda", o.lambda, "Regularization weight, or 'auto' for cross-validation");
  c->add_option("--folds", o.folds, "Cross-validation folds")->check(CLI::Range(2, 1000));
  c->add_option("--planes", o.planes, "Hyperplane count K, or 'n' for one per point");
  c->add_option("--lipschitz-cap", o.lipschitz_cap, "Regression bound on ||a||_1");
  c->add_flag("--feature-scaling", o.feature_scaling, "Standardize features before fitting");
  c->add_option("--seed", o.seed, "Seed");
  c->add_option("--max-iter", o.max_iter, "Solver iteration limit")->check(CLI::PositiveNumber);
  c->add_option("--out", o.out, std::string("Output directory (default $") + kOutDirEnv + " or .)");
}

int cmd_train(const TrainOptions& o, std::ostream& out) {
  const auto start = Clock::now();
  const bool regression = o.mode == "regression";
  bool automatic = false;
  const double lambda = parse_lambda(o.lambda, automatic);

  learn::TrainConfig tc;
  tc.planes = parse_planes(o.planes);
  tc.folds = o.folds;
  tc.seed = experiment::derive_seed(o.seed, kLambda);
  tc.feature_scaling = o.feature_scaling;
  tc.lipschitz_cap = o.lipschitz_cap;
  tc.solver.max_iterations = o.max_iter;

  const data::LabeledDataset ds = load_data(o.data, o.label_opt, o.label);
  const fs::path dir = output_dir(o.out);

  json report;
  report["mode"] = o.mode;
  report["data"] = o.data;
  report["points"] = ds.size();
  report["dim"] = ds.dim();
  report["seed"] = o.seed;
  report["planes_requested"] = o.planes;
  report["feature_scaling"] = o.feature_scaling;

  std::optional<learn::TrainResult> fit;
  learn::QuadrupletSet S;
  learn::RegressionSet R;
  try {
    if (regression) {
      if (o.pairs.empty()) throw UsageError("--mode regression needs --pairs");
      R = learn::read_pairs_csv(o.pairs);
      R.validate(ds.size());
      report["pairs"] = R.size();
      report["lipschitz_cap"] = number_or_null(o.lipschitz_cap);
      fit.emplace(learn::fit_regression(ds.X, R, tc));
    } else {
      if (!o.comparisons.empty()) {
        S = learn::read_quadruplets_csv(o.comparisons);
      } else {
        if (!ds.labeled()) throw UsageError("sampling triplets needs a label column or --comparisons");
        S = data::sample_triplets(ds, o.triplets, experiment::derive_seed(o.seed, kTriplets));
      }
      S.validate(ds.size());
      report["comparisons"] = static_cast<Index>(S.items.size());
      if (automatic) {
        const auto cv = learn::cross_validate(ds.X, S, tc);
        tc.lambda = cv.best_lambda;
        report["cv"] = {{"grid", cv.grid},
                        {"mean_scores", cv.mean_scores},
                        {"fold_scores", cv.fold_scores},
                        {"failed_fits", cv.failed_fits}};
      } else {
        tc.lambda = lambda;
      }
      report["lambda"] = tc.lambda;
      report["lambda_selection"] = automatic ? "auto" : "fixed";
      fit.emplace(learn::fit_comparisons(ds.X, S, tc));
    }
  } catch (const learn::TrainingError& e) {
    fail_with_diagnostics(dir, report, e.what());
  } catch (const optim::UnboundedProblem& e) {
    fail_with_diagnostics(dir, report, e.what());
  }

  report["status"] = optim::to_string(fit->status);
  report["iterations"] = fit->iterations;
  report["objective"] = fit->objective;
  report["model"] = model_summary(fit->model);
  if (regression) {
    report["mse"] = fit->train_loss;
  } else {
    report["hinge_loss"] = learn::hinge_loss(fit->model, ds.X, S);
    report["satisfaction"] = learn::satisfaction_rate(fit->model, ds.X, S);
  }
  if (fit->status != optim::SolveStatus::optimal) {
    report["message"] = fit->message;
    fail_with_diagnostics(dir, report,
                          std::string("solver stopped with status ") + optim::to_string(fit->status));
  }

  save_model(fit->model, dir / "model.json");
  if (!regression && o.comparisons.empty()) learn::write_quadruplets_csv(S, dir / "comparisons.csv");
  write_json(dir / "report.json", report);
  write_json(dir / "timing.json", {{"seconds", seconds_since(start)}});
  out << "model: " << (dir / "model.json").string() << "\n"
      << "K=" << fit->model.planes() << " L=" << format_double(fit->model.lipschitz())
      << " objective=" << format_double(fit->objective) << "\n";
  return kSuccess;
}

// ---------------------------------------------------------------- eval

struct EvalOptions {
  std::string data, label, model, train_data, lambda = "auto", planes = "n", order = "query_first",
                                                                     out;
  int repeats = 1;
  int folds = 3;
  Index triplets = 2000;
  std::uint64_t seed = 0;
  Index k_neighbors = 5;
  int restarts = 10;
  CLI::Option* label_opt = nullptr;
};

void add_eval(CLI::App& app, EvalOptions& o) {
  auto* c = app.add_subcommand(
      "eval", "Clustering, ranking and k-NN scores; trains per repeat unless --model is given");
  c->add_option("--data", o.data, "Labeled CSV (test points when --model is given)")->required();
  o.label_opt = c->add_option("--label", o.label, "Label column");
  c->add_option("--model", o.model, "Model JSON to evaluate instead of training");
  c->add_option("--train-data", o.train_data,
                "Reference points for k-NN with --model (default: leave-one-out on --data)");
  c->add_option("--repeats", o.repeats, "Runs; run r uses seed + r")->check(CLI::Range(1, 100000));
  c->add_option("--folds", o.folds, "Folds; each run tests on one")->check(CLI::Range(2, 1000));
  c->add_option("--triplets", o.triplets, "Training triplets per run")->check(CLI::NonNegativeNumber);
  c->add_option("--lambda", o.lambda, "Regularization weight, or 'auto' for cross-validation");
  c->add_option("--planes", o.planes, "Hyperplane count K, or 'n' for one per point");
  c->add_option("--k-neighbors", o.k_neighbors, "k for k-NN")->check(CLI::PositiveNumber);
  c->add_option("--restarts", o.restarts, "k-means restarts")->check(CLI::PositiveNumber);
  c->add_option("--order", o.order, "query_first or query_second");
  c->add_option("--seed", o.seed, "Base seed");
  c->add_option("--out", o.out, std::string("Output directory (default $") + kOutDirEnv + " or .)");
}

std::vector<int> ids_against(const std::vector<std::string>& labels,
                             const std::vector<std::string>& classes) {
  std::vector<int> ids;
  ids.reserve(labels.size());
  for (const auto& l : labels) {
    ids.push_back(static_cast<int>(std::lower_bound(classes.begin(), classes.end(), l) - classes.begin()));
  }
  return ids;
}

double leave_one_out_knn(const MaxAffineModeld& model, const Eigen::MatrixXd& X,
                         const std::vector<int>& y, Index k, tasks::ArgumentOrder order) {
  const Index n = X.rows();
  if (n < 2) return 0.0;
  Index correct = 0;
  for (Index i = 0; i < n; ++i) {
    Eigen::MatrixXd rest(n - 1, X.cols());
    std::vector<int> y_rest;
    y_rest.reserve(n - 1);
    for (Index j = 0, r = 0; j < n; ++j) {
      if (j == i) continue;
      rest.row(r++) = X.row(j);
      y_rest.push_back(y[j]);
    }
    const auto pred =
        tasks::knn_predict(model, rest, y_rest, X.row(i), std::min<Index>(k, n - 1), order);
    if (pred[0] == y[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(n);
}

void write_eval_outputs(const fs::path& dir, json metrics, const experiment::ProtocolReport& rep,
                        double seconds) {
  metrics["rand_index"] = rep.rand_index.mean;
  metrics["purity"] = rep.purity.mean;
  metrics["auc"] = rep.auc.mean;
  metrics["ave_p"] = rep.ave_p.mean;
  metrics["knn_acc"] = rep.knn_acc.mean;
  metrics["ci95_half_width"] = {{"rand_index", rep.rand_index.half_width},
                                {"purity", rep.purity.half_width},
                                {"auc", rep.auc.half_width},
                                {"ave_p", rep.ave_p.half_width},
                                {"knn_acc", rep.knn_acc.half_width}};
  json per = {{"seed", json::array()},       {"test_fold", json::array()}, {"lambda", json::array()},
              {"planes", json::array()},     {"status", json::array()},    {"rand_index", json::array()},
              {"purity", json::array()},     {"auc", json::array()},       {"ave_p", json::array()},
              {"knn_acc", json::array()}};
  std::ostringstream csv;
  csv << "repeat,seed,test_fold,lambda,planes,status,rand_index,purity,auc,ave_p,knn_acc\n";
  json timing = {{"seconds", seconds}, {"repeat_seconds", json::array()}};
  for (const auto& r : rep.repeats) {
    per["seed"].push_back(r.seed);
    per["test_fold"].push_back(r.test_fold);
    per["lambda"].push_back(r.lambda);
    per["planes"].push_back(r.planes);
    per["status"].push_back(r.status);
    per["rand_index"].push_back(r.scores.rand_index);
    per["purity"].push_back(r.scores.purity);
    per["auc"].push_back(r.scores.auc);
    per["ave_p"].push_back(r.scores.ave_p);
    per["knn_acc"].push_back(r.scores.knn_acc);
    timing["repeat_seconds"].push_back(r.seconds);
    csv << r.repeat << ',' << r.seed << ',' << r.test_fold << ',' << format_double(r.lambda) << ','
        << r.planes << ',' << r.status << ',' << format_double(r.scores.rand_index) << ','
        << format_double(r.scores.purity) << ',' << format_double(r.scores.auc) << ','
        << format_double(r.scores.ave_p) << ',' << format_double(r.scores.knn_acc) << '\n';
  }
  metrics["per_fold"] = per;
  write_json(dir / "metrics.json", metrics);
  write_text(dir / "results.csv", csv.str());
  write_json(dir / "timing.json", timing);
}

int cmd_eval(const EvalOptions& o, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  bool automatic = false;
  const double lambda = parse_lambda(o.lambda, automatic);
  experiment::TaskSettings settings;
  settings.k_neighbors = o.k_neighbors;
  settings.kmeans_restarts = o.restarts;
  settings.order = parse_order(o.order);

  const data::LabeledDataset ds = load_data(o.data, o.label_opt, o.label);
  if (!ds.labeled()) throw UsageError("eval needs a label column");

  json metrics;
  metrics["data"] = o.data;
  metrics["repeats"] = o.repeats;
  metrics["seed"] = o.seed;
  metrics["k_neighbors"] = o.k_neighbors;
  metrics["order"] = o.order;
  std::vector<experiment::RepeatRecord> records;

  if (!o.model.empty()) {
    if (!fs::exists(o.model)) throw UsageError("model file " + o.model + " does not exist");
    const MaxAffineModeld model = load_model(o.model);
    if (model.dim() != ds.dim()) {
      throw UsageError("model dimension " + std::to_string(model.dim()) +
                       " does not match data dimension " + std::to_string(ds.dim()));
    }
    std::optional<data::LabeledDataset> train;
    if (!o.train_data.empty()) {
      train = load_data(o.train_data, o.label_opt, o.label);
      if (!train->labeled()) throw UsageError("--train-data needs a label column");
      if (train->dim() != ds.dim()) throw UsageError("--train-data dimension does not match --data");
    }
    std::vector<std::string> classes = ds.classes();
    if (train) {
      const auto more = train->classes();
      classes.insert(classes.end(), more.begin(), more.end());
      std::sort(classes.begin(), classes.end());
      classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    }
    const fs::path dir = output_dir(o.out);
    const std::vector<int> y = ids_against(ds.labels, classes);
    const Eigen::MatrixXd X_ref = train ? train->X : Eigen::MatrixXd(0, ds.dim());
    const std::vector<int> y_ref = train ? ids_against(train->labels, classes) : std::vector<int>{};
    const double loo = train ? 0.0 : leave_one_out_knn(model, ds.X, y, o.k_neighbors, settings.order);
    const int n_classes = static_cast<int>(ds.classes().size());
    for (int r = 0; r < o.repeats; ++r) {
      const auto t0 = Clock::now();
      experiment::RepeatRecord rec;
      rec.repeat = r;
      rec.seed = o.seed + static_cast<std::uint64_t>(r);
      rec.planes = model.planes();
      rec.lipschitz = model.lipschitz();
      rec.status = "loaded";
      rec.scores = experiment::evaluate_tasks(model, X_ref, y_ref, ds.X, y, n_classes,
                                              experiment::derive_seed(rec.seed, kClustering), settings);
      if (!train) rec.scores.knn_acc = loo;
      rec.seconds = seconds_since(t0);
      records.push_back(rec);
    }
    metrics["mode"] = "model";
    metrics["model"] = o.model;
    metrics["knn_reference"] = train ? "train_data" : "leave_one_out";
    write_eval_outputs(dir, metrics, experiment::summarize(records), seconds_since(start));
  } else {
    experiment::ProtocolConfig cfg;
    cfg.triplets = o.triplets;
    cfg.folds = o.folds;
    cfg.repeats = o.repeats;
    cfg.seed = o.seed;
    if (!automatic) cfg.lambda = lambda;
    cfg.train.planes = parse_planes(o.planes);
    cfg.tasks = settings;
    metrics["mode"] = "protocol";
    metrics["folds"] = o.folds;
    metrics["triplets"] = o.triplets;
    metrics["lambda_selection"] = automatic ? "auto" : "fixed";
    metrics["planes_requested"] = o.planes;
    const fs::path dir = output_dir(o.out);
    json diag = metrics;
    for (int r = 0; r < o.repeats; ++r) {
      try {
        records.push_back(experiment::run_repeat(ds, cfg, r));
      } catch (const learn::TrainingError& e) {
        diag["failed_repeat"] = r;
        fail_with_diagnostics(dir, diag, e.what());
      }
      const auto& rec = records.back();
      err << "repeat " << r + 1 << "/" << o.repeats << " lambda=" << format_double(rec.lambda)
          << " RI=" << format_double(rec.scores.rand_index) << " AUC=" << format_double(rec.scores.auc)
          << " kNN=" << format_double(rec.scores.knn_acc) << "\n";
    }
    const auto rep = experiment::summarize(records);
    write_eval_outputs(dir, metrics, rep, seconds_since(start));
    std::vector<int> bad;
    for (const auto& r : records) {
      if (r.status != "optimal") bad.push_back(r.repeat);
    }
    if (!bad.empty()) {
      diag["non_optimal_repeats"] = bad;
      fail_with_diagnostics(dir, diag, "solver did not reach optimality in every repeat");
    }
  }

  const auto rep = experiment::summarize(records);
  auto line = [&](const char* name, const experiment::Interval& iv) {
    out << name << " " << format_double(100.0 * iv.mean) << " +/- "
        << format_double(100.0 * iv.half_width) << "\n";
  };
  line("rand_index", rep.rand_index);
  line("purity", rep.purity);
  line("auc", rep.auc);
  line("ave_p", rep.ave_p);
  line("knn_acc", rep.knn_acc);
  return kSuccess;
}

// ---------------------------------------------------------------- synth

struct SynthOptions {
  std::string generator, out;
  std::vector<Index> schedule{20, 80, 320};
  int seeds = 10;
  std::uint64_t seed = 0;
  double sigma = 0.05;
  Index test_points = 1000;
  double lipschitz_cap = std::numeric_limits<double>::infinity();
  Index export_points = 0;
};

void add_synth(CLI::App& app, SynthOptions& o) {
  auto* c = app.add_subcommand("synth", "Regression on synthetic Bregman data against a Mahalanobis fit");
  std::string names;
  for (auto k : data::all_generators()) names += std::string(names.empty() ? "" : ", ") + data::to_string(k);
  c->add_option("--generator", o.generator, "One of: " + names)->required();
  c->add_option("--schedule", o.schedule, "Training point counts, e.g. 20,80,320")->delimiter(',');
  c->add_option("--seeds", o.seeds, "Seeds per schedule entry")->check(CLI::Range(1, 100000));
  c->add_option("--seed", o.seed, "Base seed");
  c->add_option("--sigma", o.sigma, "Target noise standard deviation")->check(CLI::NonNegativeNumber);
  c->add_option("--test-points", o.test_points, "Fresh test points")->check(CLI::Range(2, 100000));
  c->add_option("--lipschitz-cap", o.lipschitz_cap, "Bound on ||a||_1 for the PBDL fit");
  c->add_option("--export", o.export_points,
                "Also write points.csv and pairs.csv for this many points and stop");
  c->add_option("--out", o.out, std::string("Output directory (default $") + kOutDirEnv + " or .)");
}

int cmd_synth(const SynthOptions& o, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  const auto kind = data::parse_generator(o.generator);
  if (!kind) throw UsageError("unknown generator '" + o.generator + "'");
  const fs::path dir = output_dir(o.out);

  if (o.export_points > 0) {
    data::SyntheticSpec spec;
    spec.kind = *kind;
    spec.n = o.export_points;
    spec.sigma = o.sigma;
    spec.seed = o.seed;
    const auto gen = data::generate_synthetic(spec);
    data::LabeledDataset ds;
    ds.X = gen.X;
    for (Index c = 0; c < gen.X.cols(); ++c) ds.feature_names.push_back("x" + std::to_string(c + 1));
    data::write_csv(ds, dir / "points.csv");
    learn::write_pairs_csv(gen.pairs, dir / "pairs.csv");
    out << "wrote " << (dir / "points.csv").string() << " and " << (dir / "pairs.csv").string() << "\n";
    return kSuccess;
  }

  experiment::RegressionStudyConfig cfg;
  cfg.kind = *kind;
  cfg.schedule = o.schedule;
  cfg.seeds = o.seeds;
  cfg.seed = o.seed;
  cfg.sigma = o.sigma;
  cfg.test_points = o.test_points;
  cfg.train.lipschitz_cap = o.lipschitz_cap;
  json report = {{"generator", o.generator}, {"schedule", o.schedule}, {"seeds", o.seeds},
                 {"seed", o.seed},           {"sigma", o.sigma},       {"test_points", o.test_points},
                 {"lipschitz_cap", number_or_null(o.lipschitz_cap)}};

  experiment::RegressionStudyReport rep;
  try {
    rep = experiment::run_regression_study(cfg);
  } catch (const learn::TrainingError& e) {
    fail_with_diagnostics(dir, report, e.what());
  } catch (const optim::UnboundedProblem& e) {
    fail_with_diagnostics(dir, report, e.what());
  }

  std::ostringstream table;
  table << "points,pbdl_mse,mahalanobis_mse\n";
  for (std::size_t k = 0; k < rep.schedule.size(); ++k) {
    table << rep.schedule[k] << ',' << format_double(rep.pbdl_median[k]) << ','
          << format_double(rep.mahalanobis_median[k]) << '\n';
  }
  std::ostringstream runs;
  runs << "points,pairs,seed_index,seed,pbdl_mse,mahalanobis_mse,pbdl_train_mse,pbdl_status\n";
  json rows = json::array();
  json timing = {{"seconds", seconds_since(start)}, {"run_seconds", json::array()}};
  std::vector<std::string> bad;
  for (const auto& r : rep.rows) {
    runs << r.points << ',' << r.pairs << ',' << r.seed_index << ',' << r.seed << ','
         << format_double(r.pbdl_mse) << ',' << format_double(r.mahalanobis_mse) << ','
         << format_double(r.pbdl_train_mse) << ',' << r.pbdl_status << '\n';
    rows.push_back({{"points", r.points},
                    {"seed", r.seed},
                    {"pbdl_mse", r.pbdl_mse},
                    {"mahalanobis_mse", r.mahalanobis_mse},
                    {"pbdl_train_mse", r.pbdl_train_mse},
                    {"pbdl_status", r.pbdl_status}});
    timing["run_seconds"].push_back(r.seconds);
    if (r.pbdl_status != "optimal") bad.push_back(std::to_string(r.points) + "/" + std::to_string(r.seed));
  }
  report["pbdl_median"] = rep.pbdl_median;
  report["mahalanobis_median"] = rep.mahalanobis_median;
  report["runs"] = rows;
  write_text(dir / "synth.csv", table.str());
  write_text(dir / "synth_runs.csv", runs.str());
  write_json(dir / "report.json", report);
  write_json(dir / "timing.json", timing);
  out << table.str();
  if (!bad.empty()) {
    report["non_optimal_runs"] = bad;
    fail_with_diagnostics(dir, report, "solver did not reach optimality in every run");
  }
  (void)err;
  return kSuccess;
}

// ---------------------------------------------------------------- bounds

struct BoundsOptions {
  BoundInputs in;
  bool check = false;
  Index per_axis = 201;
};

void add_bounds(CLI::App& app, BoundsOptions& o) {
  auto* c = app.add_subcommand("bounds", "Approximation and generalization bounds");
  c->add_option("--beta", o.in.beta, "Smoothness of the generator");
  c->add_option("--R", o.in.R, "Infinity-norm radius of the data");
  c->add_option("--K", o.in.K, "Hyperplane count");
  c->add_option("--d", o.in.d, "Dimension");
  c->add_option("--L", o.in.L, "Lipschitz budget");
  c->add_option("--m", o.in.m, "Number of comparisons or pairs");
  c->add_option("--delta", o.in.delta, "Failure probability in (0, 1)");
  c->add_option("--sigma", o.in.sigma, "Noise bound for regression");
  c->add_option("--empirical-loss", o.in.empirical_loss, "Average training hinge loss");
  c->add_flag("--check", o.check, "Compare ||x||^2 against its covering-grid approximator");
  c->add_option("--per-axis", o.per_axis, "Lattice points per axis for --check")
      ->check(CLI::Range(2, 100000));
}

int cmd_bounds(const BoundsOptions& o, std::ostream& out) {
  const BoundReport b = bounds(o.in);
  json doc = {{"inputs",
               {{"beta", o.in.beta},
                {"R", o.in.R},
                {"K", o.in.K},
                {"d", o.in.d},
                {"L", o.in.L},
                {"m", o.in.m},
                {"delta", o.in.delta},
                {"sigma", o.in.sigma},
                {"empirical_loss", o.in.empirical_loss}}},
              {"value_bound", b.value_bound},
              {"grad_bound", b.grad_bound},
              {"breg_bound", b.breg_bound},
              {"epsilon_margin", b.epsilon_margin},
              {"rademacher", b.rademacher},
              {"gen_bound_terms", b.gen_bound_terms},
              {"gen_bound", b.gen_bound},
              {"regression_M", b.regression_M},
              {"regression_gen_bound", b.regression_gen_bound},
              {"regression_approx_bound", b.regression_approx_bound},
              {"regression_K", b.regression_K}};
  if (!o.check) {
    out << doc.dump(2) << "\n";
    return kSuccess;
  }
  const auto whole = [](double v) { return v >= 1.0 && v == std::floor(v) && v < 1e9; };
  if (!whole(o.in.d) || !whole(o.in.K)) throw UsageError("--check needs integer --d and --K");
  const auto spec = squared_norm_spec<double>(static_cast<Index>(o.in.d), o.in.R);
  const auto g = grid_check(spec, static_cast<Index>(o.in.K), o.per_axis);
  doc["check"] = {{"generator", "squared_norm"},
                  {"beta", spec.beta},
                  {"planes", g.planes},
                  {"value_error", g.value_error},
                  {"value_bound", g.value_bound},
                  {"minorant_violation", g.minorant_violation},
                  {"breg_checked", g.breg_checked},
                  {"shrunk_radius", g.shrunk_radius},
                  {"breg_error", g.breg_error},
                  {"breg_bound", g.breg_bound},
                  {"pass", g.pass()}};
  out << doc.dump(2) << "\n";
  out << "grid check: " << (g.pass() ? "PASS" : "FAIL") << "\n";
  return g.pass() ? kSuccess : kSolverFailure;
}

// ---------------------------------------------------------------- partition

struct PartitionOptions {
  std::string data, label, out;
  Index K = 1;
  std::uint64_t seed = 0;
  CLI::Option* label_opt = nullptr;
};

void add_partition(CLI::App& app, PartitionOptions& o) {
  auto* c = app.add_subcommand("partition", "Farthest-point partition of the points into K cells");
  c->add_option("--data", o.data, "CSV of points")->required();
  o.label_opt = c->add_option("--label", o.label, "Label column to ignore");
  c->add_option("--K", o.K, "Number of cells")->required()->check(CLI::PositiveNumber);
  c->add_option("--seed", o.seed, "Seed for the first center");
  c->add_option("--out", o.out, std::string("Output directory (default $") + kOutDirEnv + " or .)");
}

int cmd_partition(const PartitionOptions& o, std::ostream& out) {
  const data::LabeledDataset ds = load_data(o.data, o.label_opt, o.label);
  const fs::path dir = output_dir(o.out);
  const auto p = learn::farthest_point_partition(ds.X, o.K, o.seed);
  json doc = {{"data", o.data},
              {"K", o.K},
              {"seed", o.seed},
              {"cells", p.cells()},
              {"radius", p.radius},
              {"centers", p.centers},
              {"assignment", p.assignment}};
  write_json(dir / "partition.json", doc);
  out << "cells=" << p.cells() << " radius=" << format_double(p.radius) << "\n";
  return kSuccess;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Learn Bregman divergences with max-affine generators", "bregman"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "bregman 1.0.0");
  TrainOptions train;
  EvalOptions eval;
  SynthOptions synth;
  BoundsOptions bounds_opts;
  PartitionOptions partition;
  add_train(app, train);
  add_eval(app, eval);
  add_synth(app, synth);
  add_bounds(app, bounds_opts);
  add_partition(app, partition);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageError;
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "train") return cmd_train(train, out);
    if (name == "eval") return cmd_eval(eval, out, err);
    if (name == "synth") return cmd_synth(synth, out, err);
    if (name == "bounds") return cmd_bounds(bounds_opts, out);
    if (name == "partition") return cmd_partition(partition, out);
    err << "error: unknown subcommand " << name << "\n";
    return kUsageError;
  } catch (const SolverFailure& e) {
    err << "error: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const learn::TrainingError& e) {
    err << "error: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const optim::UnboundedProblem& e) {
    err << "error: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed JSON: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("bregman");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace bregman::cli
