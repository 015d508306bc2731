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

#include "graphgame/graph_io.hpp"

#include <fstream>

#include "graphgame/errors.hpp"

namespace graphgame {

Graph graph_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("nodes")) {
    throw InvalidInput("graph: expected an object with a \"nodes\" array");
  }
  const auto& nodes = doc.at("nodes");
  if (!nodes.is_array()) throw InvalidInput("graph.nodes: expected an array");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!nodes[i].is_string()) {
      throw InvalidInput("graph.nodes[" + std::to_string(i) + "]: expected a string");
    }
    labels.push_back(nodes[i].get<std::string>());
  }
  std::vector<std::pair<std::string, std::string>> edges;
  if (doc.contains("edges")) {
    const auto& e = doc.at("edges");
    if (!e.is_array()) throw InvalidInput("graph.edges: expected an array");
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!e[i].is_array() || e[i].size() != 2 || !e[i][0].is_string() ||
          !e[i][1].is_string()) {
        throw InvalidInput("graph.edges[" + std::to_string(i) +
                           "]: expected a pair of node labels");
      }
      edges.emplace_back(e[i][0].get<std::string>(), e[i][1].get<std::string>());
    }
  }
  return Graph::from_labels(std::move(labels), edges);
}

nlohmann::json graph_to_json(const Graph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (auto [u, v] : g.edges()) edges.push_back({g.label(u), g.label(v)});
  return {{"nodes", g.labels()}, {"edges", std::move(edges)}};
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path.string() + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

Graph load_graph(const std::filesystem::path& path) {
  return graph_from_json(read_json_file(path));
}

}  // namespace graphgame
