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


#include "bregman/data/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string_view>

namespace bregman::data {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool blank(const std::string& line) { return line.find_first_not_of(" \t\r") == std::string::npos; }

}  // namespace

double LabeledDataset::radius() const { return X.size() ? X.lpNorm<Eigen::Infinity>() : 0.0; }

std::vector<std::string> LabeledDataset::classes() const {
  std::vector<std::string> out = labels;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> LabeledDataset::label_ids() const {
  const auto cls = classes();
  std::vector<int> ids(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    ids[i] = static_cast<int>(std::lower_bound(cls.begin(), cls.end(), labels[i]) - cls.begin());
  }
  return ids;
}

LabeledDataset LabeledDataset::subset(const std::vector<Index>& rows) const {
  LabeledDataset out;
  out.feature_names = feature_names;
  out.label_name = label_name;
  out.source = source;
  out.X.resize(static_cast<Index>(rows.size()), dim());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out.X.row(static_cast<Index>(k)) = X.row(rows[k]);
    if (labeled()) out.labels.push_back(labels.at(rows[k]));
  }
  return out;
}

LabeledDataset load_csv(const std::filesystem::path& path, const std::string& label_column) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!blank(line)) break;
  }
  if (blank(line)) throw std::invalid_argument(path.string() + " is empty");

  const auto header = split_line(line);
  int label_at = -1;
  if (!label_column.empty()) {
    const auto it = std::find(header.begin(), header.end(), label_column);
    if (it == header.end()) {
      throw std::invalid_argument(path.string() + ": label column '" + label_column +
                                  "' not found in header");
    }
    label_at = static_cast<int>(it - header.begin());
  }

  LabeledDataset ds;
  ds.source = path.string();
  ds.label_name = label_column;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (static_cast<int>(c) != label_at) ds.feature_names.push_back(header[c]);
  }
  if (ds.feature_names.empty()) throw std::invalid_argument(path.string() + " has no feature columns");

  std::vector<double> values;
  Index rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const auto cells = split_line(line);
    if (cells.size() != header.size()) {
      std::ostringstream os;
      os << path.string() << ": row " << rows << " (line " << line_no << ") has " << cells.size()
         << " cells, header has " << header.size();
      throw std::invalid_argument(os.str());
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (static_cast<int>(c) == label_at) {
        ds.labels.push_back(cells[c]);
        continue;
      }
      double v = 0.0;
      const auto& s = cells[c];
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        std::ostringstream os;
        os << path.string() << ": row " << rows << " (line " << line_no << "), column '"
           << header[c] << "': expected a finite number, got '" << s << "'";
        throw std::invalid_argument(os.str());
      }
      values.push_back(v);
    }
    ++rows;
  }
  if (rows == 0) throw std::invalid_argument(path.string() + " has a header but no rows");

  const Index d = static_cast<Index>(ds.feature_names.size());
  ds.X = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), rows, d);
  return ds;
}

void write_csv(const LabeledDataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  std::vector<std::string> names = ds.feature_names;
  if (static_cast<Index>(names.size()) != ds.dim()) {
    names.clear();
    for (Index c = 0; c < ds.dim(); ++c) names.push_back("x" + std::to_string(c));
  }
  for (std::size_t c = 0; c < names.size(); ++c) out << (c ? "," : "") << names[c];
  if (ds.labeled()) out << ',' << (ds.label_name.empty() ? "label" : ds.label_name);
  out << '\n';
  char buf[64];
  for (Index i = 0; i < ds.size(); ++i) {
    for (Index c = 0; c < ds.dim(); ++c) {
      const auto res = std::to_chars(buf, buf + sizeof(buf), ds.X(i, c));
      out << (c ? "," : "") << std::string_view(buf, res.ptr - buf);
    }
    if (ds.labeled()) out << ',' << ds.labels[i];
    out << '\n';
  }
}

learn::QuadrupletSet sample_triplets(const LabeledDataset& ds, Index m, std::uint64_t seed) {
  if (m < 0) throw std::invalid_argument("triplet count must be >= 0");
  learn::QuadrupletSet out;
  if (m == 0) return out;
  if (!ds.labeled()) throw std::invalid_argument("triplet sampling needs labels");
  const auto ids = ds.label_ids();
  const int classes = static_cast<int>(ds.classes().size());
  if (classes < 2) throw std::invalid_argument("triplet sampling needs at least two classes");
  std::vector<std::vector<Index>> members(classes);
  for (Index i = 0; i < ds.size(); ++i) members[ids[i]].push_back(i);

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_class(0, classes - 1);
  std::uniform_int_distribution<int> pick_other(0, classes - 2);
  constexpr int kMaxRetries = 1000;
  out.items.reserve(m);
  for (Index t = 0; t < m; ++t) {
    int c = -1;
    for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
      const int cand = pick_class(rng);
      if (members[cand].size() >= 2) {
        c = cand;
        break;
      }
    }
    if (c < 0) throw std::runtime_error("no class with at least two members could be drawn");
    const auto& same = members[c];
    std::uniform_int_distribution<std::size_t> pick_same(0, same.size() - 1);
    const std::size_t a = pick_same(rng);
    std::size_t b = pick_same(rng);
    while (b == a) b = pick_same(rng);
    int other = pick_other(rng);
    if (other >= c) ++other;
    const auto& diff = members[other];
    std::uniform_int_distribution<std::size_t> pick_diff(0, diff.size() - 1);
    const Index k = diff[pick_diff(rng)];
    out.items.push_back({same[a], same[b], same[a], k});
  }
  return out;
}

}  // namespace bregman::data
