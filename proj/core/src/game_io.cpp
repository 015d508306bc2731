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

#include "graphgame/game_io.hpp"

#include <cmath>

#include "graphgame/errors.hpp"
#include "graphgame/graph_io.hpp"

namespace graphgame {
namespace {

using nlohmann::json;

std::string at(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

std::vector<std::string> string_list(const json& j, const std::string& path) {
  if (!j.is_array()) throw InvalidInput(path + ": expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (j[i].is_string()) {
      out.push_back(j[i].get<std::string>());
    } else if (j[i].is_number_integer()) {
      out.push_back(std::to_string(j[i].get<long long>()));
    } else {
      throw InvalidInput(at(path, i) + ": expected a string");
    }
  }
  return out;
}

std::vector<std::vector<double>> tensor_list(const json& j, const std::string& path) {
  if (!j.is_array()) throw InvalidInput(path + ": expected an array of arrays");
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array()) throw InvalidInput(at(path, i) + ": expected an array of numbers");
    std::vector<double> t;
    for (std::size_t k = 0; k < j[i].size(); ++k) {
      if (!j[i][k].is_number()) {
        throw InvalidInput(at(at(path, i), k) + ": expected a number");
      }
      t.push_back(j[i][k].get<double>());
    }
    out.push_back(std::move(t));
  }
  return out;
}

Graph named_graph(const std::string& kind, std::vector<std::string> labels,
                  const std::string& path) {
  if (kind == "complete") return Graph::complete(std::move(labels));
  if (kind == "isolated") return Graph::isolated(std::move(labels));
  if (kind == "path") return Graph::path(std::move(labels));
  if (kind == "cycle") return Graph::cycle(std::move(labels));
  if (kind == "star") return Graph::star(std::move(labels));
  throw InvalidInput(path + ": unknown graph kind '" + kind + "'");
}

Graph parse_graph(const json& j, const std::vector<std::vector<std::string>>& strategies,
                  const std::filesystem::path& base_dir) {
  const std::string path = "game.graph";
  if (j.is_string()) return named_graph(j.get<std::string>(), joint_labels(strategies), path);
  if (!j.is_object()) throw InvalidInput(path + ": expected a string or an object");
  if (j.contains("file")) {
    std::filesystem::path p = j.at("file").get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    return load_graph(p);
  }
  if (j.contains("factors")) {
    const auto& f = j.at("factors");
    if (!f.is_array() || f.size() != strategies.size()) {
      throw InvalidInput(path + ".factors: expected one factor per coalition");
    }
    std::vector<Graph> factors;
    for (std::size_t h = 0; h < f.size(); ++h) {
      if (f[h].is_string()) {
        factors.push_back(named_graph(f[h].get<std::string>(), strategies[h], at(path + ".factors", h)));
      } else {
        factors.push_back(graph_from_json(f[h]));
        if (factors.back().labels() != strategies[h]) {
          throw InvalidInput(at(path + ".factors", h) +
                             ": nodes must list the coalition's strategies in order");
        }
      }
    }
    return strong_product(factors);
  }
  return graph_from_json(j);
}

}  // namespace

GameDocument game_from_json(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw InvalidInput("game: expected a JSON object");
  GameDocument out;

  std::vector<std::string> players;
  if (!doc.contains("players")) throw InvalidInput("game.players: missing");
  if (doc.at("players").is_number_integer()) {
    const auto n = doc.at("players").get<long long>();
    if (n <= 0) throw InvalidInput("game.players: must be positive");
    for (long long i = 1; i <= n; ++i) players.push_back(std::to_string(i));
  } else {
    players = string_list(doc.at("players"), "game.players");
  }
  auto player_index = [&](const std::string& name, const std::string& path) {
    for (std::size_t p = 0; p < players.size(); ++p) {
      if (players[p] == name) return p;
    }
    throw InvalidInput(path + ": unknown player '" + name + "'");
  };

  CoalitionStructure structure;
  if (!doc.contains("coalitions")) {
    structure = CoalitionStructure::singletons(players);
  } else {
    const auto& cj = doc.at("coalitions");
    if (!cj.is_array()) throw InvalidInput("game.coalitions: expected an array");
    std::vector<std::string> names;
    std::vector<std::vector<std::size_t>> members;
    for (std::size_t h = 0; h < cj.size(); ++h) {
      const std::string path = at("game.coalitions", h);
      std::vector<std::string> who;
      if (cj[h].is_object()) {
        names.push_back(cj[h].value("name", "C" + std::to_string(h + 1)));
        if (!cj[h].contains("players")) throw InvalidInput(path + ".players: missing");
        who = string_list(cj[h].at("players"), path + ".players");
      } else {
        names.push_back("C" + std::to_string(h + 1));
        who = string_list(cj[h], path);
      }
      std::vector<std::size_t> ids;
      for (const auto& w : who) ids.push_back(player_index(w, path));
      members.push_back(std::move(ids));
    }
    structure = CoalitionStructure(players, std::move(names), std::move(members));
  }

  if (!doc.contains("strategies")) throw InvalidInput("game.strategies: missing");
  const auto& sj = doc.at("strategies");
  if (!sj.is_array()) throw InvalidInput("game.strategies: expected an array");
  std::vector<std::vector<std::string>> strategies;
  for (std::size_t h = 0; h < sj.size(); ++h) {
    strategies.push_back(string_list(sj[h], at("game.strategies", h)));
  }
  if (strategies.size() != structure.size()) {
    throw InvalidInput("game.strategies: expected " + std::to_string(structure.size()) +
                       " strategy lists (one per coalition), got " +
                       std::to_string(strategies.size()));
  }
  std::size_t joint = 1;
  for (const auto& s : strategies) joint *= s.size();

  std::vector<std::vector<double>> payoffs;
  std::vector<std::vector<double>> derived;
  if (doc.contains("player_payoffs")) {
    auto pp = tensor_list(doc.at("player_payoffs"), "game.player_payoffs");
    for (std::size_t i = 0; i < pp.size(); ++i) {
      if (pp[i].size() != joint) {
        throw InvalidInput(at("game.player_payoffs", i) + ": has " + std::to_string(pp[i].size()) +
                           " entries, expected " + std::to_string(joint));
      }
    }
    derived = coalition_payoff_from_players(pp, structure);
  }
  if (doc.contains("payoffs")) {
    payoffs = tensor_list(doc.at("payoffs"), "game.payoffs");
    if (payoffs.size() != structure.size()) {
      throw InvalidInput("game.payoffs: expected " + std::to_string(structure.size()) +
                         " tensors (one per coalition), got " + std::to_string(payoffs.size()));
    }
    for (std::size_t h = 0; h < payoffs.size(); ++h) {
      if (payoffs[h].size() != joint) {
        throw InvalidInput(at("game.payoffs", h) + ": has " + std::to_string(payoffs[h].size()) +
                           " entries, expected " + std::to_string(joint));
      }
    }
    if (!derived.empty()) {
      for (std::size_t h = 0; h < payoffs.size(); ++h) {
        for (std::size_t j = 0; j < joint; ++j) {
          if (std::abs(payoffs[h][j] - derived[h][j]) > 1e-12 * (1.0 + std::abs(derived[h][j]))) {
            out.warnings.push_back("payoffs of coalition '" + structure.name(h) +
                                   "' differ from the sum of its player payoffs; using the "
                                   "coalition payoffs");
            break;
          }
        }
      }
    }
  } else if (!derived.empty()) {
    payoffs = std::move(derived);
  } else {
    throw InvalidInput("game.payoffs: missing (and no game.player_payoffs given)");
  }

  Graph graph = doc.contains("graph") ? parse_graph(doc.at("graph"), strategies, base_dir)
                                      : Graph::complete(joint_labels(strategies));
  out.game = GGame(std::move(structure), std::move(strategies), std::move(payoffs), graph);
  return out;
}

GameDocument load_game(const std::filesystem::path& path) {
  return game_from_json(read_json_file(path), path.parent_path());
}

json game_to_json(const GGame& game) {
  const auto& cs = game.structure();
  json coalitions = json::array();
  for (std::size_t h = 0; h < cs.size(); ++h) {
    json who = json::array();
    for (std::size_t p : cs.members(h)) who.push_back(cs.players()[p]);
    coalitions.push_back({{"name", cs.name(h)}, {"players", std::move(who)}});
  }
  return {{"players", cs.players()},
          {"coalitions", std::move(coalitions)},
          {"strategies", game.strategy_spaces()},
          {"payoffs", game.payoff_tensors()},
          {"graph", graph_to_json(game.graph())}};
}

}  // namespace graphgame
