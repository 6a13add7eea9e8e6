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

#include <iosfwd>
#include <string>
#include <vector>

namespace bregman::cli {

/// Process exit codes.
enum ExitCode : int { kSuccess = 0, kSolverFailure = 1, kUsageError = 2 };

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "BREGMAN_OUT_DIR";

/// Runs one command line (without the program name) and returns the exit
/// code. Normal output goes to `out`, errors and progress to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bregman::cli
