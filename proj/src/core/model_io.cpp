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

#include "bregman/model_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace bregman {

namespace {

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  return nlohmann::json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j, Eigen::Index expected, const char* what) {
  const auto values = j.get<std::vector<double>>();
  if (static_cast<Eigen::Index>(values.size()) != expected) {
    std::ostringstream os;
    os << what << " has " << values.size() << " entries, expected " << expected;
    throw std::invalid_argument(os.str());
  }
  return Eigen::Map<const Eigen::VectorXd>(values.data(), expected);
}

}  // namespace

nlohmann::json model_to_json(const MaxAffineModeld& model) {
  nlohmann::json doc;
  doc["dim"] = model.dim();
  doc["K"] = model.planes();
  doc["L"] = model.lipschitz();
  nlohmann::json slopes = nlohmann::json::array();
  for (Eigen::Index k = 0; k < model.planes(); ++k) {
    slopes.push_back(vector_to_json(model.slopes().row(k).transpose()));
  }
  doc["slopes"] = std::move(slopes);
  doc["offsets"] = vector_to_json(model.offsets());
  const auto& fs = model.feature_scale();
  nlohmann::json scale;
  scale["enabled"] = fs.enabled();
  if (fs.enabled()) {
    scale["offset"] = vector_to_json(fs.offset);
    scale["scale"] = vector_to_json(fs.scale);
  }
  doc["feature_scale"] = std::move(scale);
  return doc;
}

MaxAffineModeld model_from_json(const nlohmann::json& doc) {
  try {
    const auto d = doc.at("dim").get<Eigen::Index>();
    const auto K = doc.at("K").get<Eigen::Index>();
    if (d < 1 || K < 1) throw std::invalid_argument("model document needs dim >= 1 and K >= 1");
    const auto& rows = doc.at("slopes");
    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != K) {
      throw std::invalid_argument("model document: slopes must hold K rows");
    }
    Eigen::MatrixXd slopes(K, d);
    for (Eigen::Index k = 0; k < K; ++k) {
      slopes.row(k) = vector_from_json(rows[k], d, "slope row").transpose();
    }
    Eigen::VectorXd offsets = vector_from_json(doc.at("offsets"), K, "offsets");
    FeatureScale<double> fs;
    if (doc.contains("feature_scale") && doc["feature_scale"].value("enabled", false)) {
      fs.offset = vector_from_json(doc["feature_scale"].at("offset"), d, "feature_scale.offset");
      fs.scale = vector_from_json(doc["feature_scale"].at("scale"), d, "feature_scale.scale");
    }
    return MaxAffineModeld(std::move(slopes), std::move(offsets), doc.at("L").get<double>(),
                           std::move(fs));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed model document: ") + e.what());
  }
}

void save_model(const MaxAffineModeld& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file " + path.string());
  out << model_to_json(model).dump(2) << '\n';
}

MaxAffineModeld load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read model file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("model file " + path.string() + " is not valid JSON: " + e.what());
  }
  return model_from_json(doc);
}

}  // namespace bregman
