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

#ifndef GRAPHGAME_GAME_IO_HPP
#define GRAPHGAME_GAME_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "graphgame/game.hpp"

namespace graphgame {

struct GameDocument {
  GGame game;
  // Non-fatal findings, e.g. direct coalition payoffs disagreeing with the
  // sums of the supplied player payoffs.
  std::vector<std::string> warnings;
};

// Game file layout:
//   "players":        [name...] or a player count
//   "coalitions":     [{"name": .., "players": [..]}...] or [[player...]...];
//                     defaults to singletons
//   "strategies":     per-coalition strategy label lists
//   "payoffs":        per-coalition tensors, flattened row-major over
//                     coalition order
//   "player_payoffs": optional per-player tensors; summed per coalition when
//                     "payoffs" is absent
//   "graph":          "complete" | "isolated" | {"nodes","edges"} |
//                     {"file": path} | {"factors": [factor...]}, where a
//                     factor is a graph object over the coalition's strategy
//                     labels or one of "complete", "isolated", "path",
//                     "cycle", "star"
// `base_dir` resolves relative graph file references.
GameDocument game_from_json(const nlohmann::json& doc,
                            const std::filesystem::path& base_dir = {});
GameDocument load_game(const std::filesystem::path& path);

nlohmann::json game_to_json(const GGame& game);

}  // namespace graphgame

#endif  // GRAPHGAME_GAME_IO_HPP
