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

#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "bregman/max_affine.hpp"

namespace bregman {

// Model document layout:
//   {"dim": d, "K": K, "L": L, "slopes": [[...], ...], "offsets": [...],
//    "feature_scale": {"enabled": bool, "offset": [...], "scale": [...]}}
// Doubles are written in shortest round-trip form, so save/load is bit exact.

nlohmann::json model_to_json(const MaxAffineModeld& model);
MaxAffineModeld model_from_json(const nlohmann::json& doc);

void save_model(const MaxAffineModeld& model, const std::filesystem::path& path);
MaxAffineModeld load_model(const std::filesystem::path& path);

}  // namespace bregman
