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

#ifndef GRAPHGAME_GRAPH_IO_HPP
#define GRAPHGAME_GRAPH_IO_HPP

#include <filesystem>

#include <nlohmann/json.hpp>

#include "graphgame/graph.hpp"

namespace graphgame {

// {"nodes": [label...], "edges": [[label, label]...]}
Graph graph_from_json(const nlohmann::json& doc);
nlohmann::json graph_to_json(const Graph& g);

// Reads a JSON document; parse failures become InvalidInput naming the file.
nlohmann::json read_json_file(const std::filesystem::path& path);

Graph load_graph(const std::filesystem::path& path);

}  // namespace graphgame

#endif  // GRAPHGAME_GRAPH_IO_HPP
