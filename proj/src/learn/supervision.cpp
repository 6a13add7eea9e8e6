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


#include "bregman/learn/supervision.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace bregman::learn {

namespace {

void check_index(Index v, Index n, Index row, const char* what) {
  if (v < 0 || v >= n) {
    std::ostringstream os;
    os << what << " " << row << " references point " << v << " but only " << n
       << " points are available";
    throw std::out_of_range(os.str());
  }
}

std::vector<std::string> split(const std::string& line) {
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

Index parse_index(const std::string& cell, const std::filesystem::path& path, std::size_t line) {
  Index v = 0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || v < 0) {
    std::ostringstream os;
    os << path.string() << ":" << line << ": expected a non-negative index, got '" << cell << "'";
    throw std::invalid_argument(os.str());
  }
  return v;
}

double parse_value(const std::string& cell, const std::filesystem::path& path, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
    std::ostringstream os;
    os << path.string() << ":" << line << ": expected a finite number, got '" << cell << "'";
    throw std::invalid_argument(os.str());
  }
  return v;
}

std::ifstream open_with_header(const std::filesystem::path& path, const std::string& header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument(path.string() + " is empty");
  std::string joined;
  for (const auto& c : split(line)) joined += (joined.empty() ? "" : ",") + c;
  if (joined != header) {
    throw std::invalid_argument(path.string() + ": expected header '" + header + "', got '" +
                                line + "'");
  }
  return in;
}

template <typename Fn>
void for_each_row(std::ifstream& in, const std::filesystem::path& path, std::size_t width, Fn fn) {
  std::string line;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split(line);
    if (cells.size() != width) {
      std::ostringstream os;
      os << path.string() << ":" << number << ": expected " << width << " columns, got "
         << cells.size();
      throw std::invalid_argument(os.str());
    }
    fn(cells, number);
  }
}

}  // namespace

void QuadrupletSet::validate(Index num_points) const {
  for (Index t = 0; t < size(); ++t) {
    for (Index v : items[t]) check_index(v, num_points, t, "comparison");
  }
  if (!std::isfinite(margin) || margin < 0.0) throw std::invalid_argument("margin must be >= 0");
}

std::vector<Index> QuadrupletSet::used_indices() const {
  std::vector<Index> out;
  out.reserve(items.size() * 4);
  for (const auto& q : items) out.insert(out.end(), q.begin(), q.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

QuadrupletSet QuadrupletSet::subset(const std::vector<Index>& which) const {
  QuadrupletSet out;
  out.margin = margin;
  out.items.reserve(which.size());
  for (Index t : which) out.items.push_back(items.at(t));
  return out;
}

void RegressionSet::validate(Index num_points) const {
  if (targets.size() != pairs.size()) {
    throw std::invalid_argument("regression set has mismatched pair and target counts");
  }
  for (Index t = 0; t < size(); ++t) {
    check_index(pairs[t].first, num_points, t, "pair");
    check_index(pairs[t].second, num_points, t, "pair");
    if (!std::isfinite(targets[t])) {
      std::ostringstream os;
      os << "pair " << t << " has a non-finite target";
      throw std::invalid_argument(os.str());
    }
  }
}

std::vector<Index> RegressionSet::used_indices() const {
  std::vector<Index> out;
  out.reserve(pairs.size() * 2);
  for (const auto& [i, j] : pairs) {
    out.push_back(i);
    out.push_back(j);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

QuadrupletSet read_quadruplets_csv(const std::filesystem::path& path) {
  auto in = open_with_header(path, "i,j,k,l");
  QuadrupletSet set;
  for_each_row(in, path, 4, [&](const std::vector<std::string>& c, std::size_t line) {
    set.items.push_back({parse_index(c[0], path, line), parse_index(c[1], path, line),
                         parse_index(c[2], path, line), parse_index(c[3], path, line)});
  });
  return set;
}

void write_quadruplets_csv(const QuadrupletSet& set, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "i,j,k,l\n";
  for (const auto& q : set.items) out << q[0] << ',' << q[1] << ',' << q[2] << ',' << q[3] << '\n';
}

RegressionSet read_pairs_csv(const std::filesystem::path& path) {
  auto in = open_with_header(path, "i,j,y");
  RegressionSet set;
  for_each_row(in, path, 3, [&](const std::vector<std::string>& c, std::size_t line) {
    set.pairs.emplace_back(parse_index(c[0], path, line), parse_index(c[1], path, line));
    set.targets.push_back(parse_value(c[2], path, line));
  });
  return set;
}

void write_pairs_csv(const RegressionSet& set, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "i,j,y\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Index t = 0; t < set.size(); ++t) {
    out << set.pairs[t].first << ',' << set.pairs[t].second << ',' << set.targets[t] << '\n';
  }
}

}  // namespace bregman::learn
