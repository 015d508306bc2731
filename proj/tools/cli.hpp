// Copyright 2026 The graphgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GRAPHGAME_TOOLS_CLI_HPP
#define GRAPHGAME_TOOLS_CLI_HPP

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "graphgame/graph.hpp"
#include "graphgame/mixed.hpp"

namespace graphgame::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kInputError = 2,
  kSupportSplit = 3,
  kNotDecomposable = 4,
  kNoConvergence = 5,
};

// Entry point shared by the executable and the tests. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Target file: {"target": [masses]} in node order, or {"target": {label: mass}}
// with omitted labels at zero.
Distribution load_target(const std::filesystem::path& path, const Graph& g);

}  // namespace graphgame::cli

#endif  // GRAPHGAME_TOOLS_CLI_HPP
