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

#include "graphgame/game.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "graphgame/errors.hpp"

namespace graphgame {

CoalitionStructure::CoalitionStructure(std::vector<std::string> players,
                                       std::vector<std::string> names,
                                       std::vector<std::vector<std::size_t>> members)
    : players_(std::move(players)), names_(std::move(names)), members_(std::move(members)) {
  if (members_.empty()) throw InvalidInput("coalition structure needs at least one coalition");
  if (names_.size() != members_.size()) {
    throw InvalidInput("coalition names and member lists differ in length");
  }
  constexpr auto kFree = static_cast<std::size_t>(-1);
  owner_.assign(players_.size(), kFree);
  for (std::size_t h = 0; h < members_.size(); ++h) {
    if (members_[h].empty()) throw InvalidInput("coalition '" + names_[h] + "' is empty");
    for (std::size_t p : members_[h]) {
      if (p >= players_.size()) throw InvalidInput("coalition member out of range");
      if (owner_[p] != kFree) {
        throw InvalidInput("player '" + players_[p] + "' belongs to two coalitions");
      }
      owner_[p] = h;
    }
    for (std::size_t g = 0; g < h; ++g) {
      if (names_[g] == names_[h]) throw InvalidInput("duplicate coalition name '" + names_[h] + "'");
    }
  }
  for (std::size_t p = 0; p < players_.size(); ++p) {
    if (owner_[p] == kFree) {
      throw InvalidInput("player '" + players_[p] + "' is in no coalition");
    }
  }
}

CoalitionStructure CoalitionStructure::singletons(std::vector<std::string> players) {
  std::vector<std::vector<std::size_t>> members;
  for (std::size_t p = 0; p < players.size(); ++p) members.push_back({p});
  auto names = players;
  return CoalitionStructure(std::move(players), std::move(names), std::move(members));
}

CoalitionStructure CoalitionStructure::grand(std::vector<std::string> players, std::string name) {
  std::vector<std::size_t> all(players.size());
  for (std::size_t p = 0; p < all.size(); ++p) all[p] = p;
  return CoalitionStructure(std::move(players), {std::move(name)}, {std::move(all)});
}

std::optional<std::size_t> CoalitionStructure::find(std::string_view coalition_name) const {
  for (std::size_t h = 0; h < names_.size(); ++h) {
    if (names_[h] == coalition_name) return h;
  }
  return std::nullopt;
}

std::vector<std::string> joint_labels(const std::vector<std::vector<std::string>>& strategies) {
  std::vector<std::size_t> sizes;
  for (const auto& s : strategies) sizes.push_back(s.size());
  const TupleIndexer ix(sizes);
  std::vector<std::string> out;
  out.reserve(ix.size());
  std::vector<std::string> coords(strategies.size());
  for (std::size_t j = 0; j < ix.size(); ++j) {
    for (std::size_t h = 0; h < strategies.size(); ++h) {
      coords[h] = strategies[h][ix.coordinate(j, h)];
    }
    out.push_back(join_tuple(coords));
  }
  return out;
}

GGame::GGame(CoalitionStructure structure, std::vector<std::vector<std::string>> strategies,
             std::vector<std::vector<double>> payoffs, const Graph& graph)
    : structure_(std::move(structure)),
      strategies_(std::move(strategies)),
      payoffs_(std::move(payoffs)) {
  const std::size_t r = structure_.size();
  if (strategies_.size() != r) {
    throw InvalidInput("expected " + std::to_string(r) + " strategy spaces, got " +
                       std::to_string(strategies_.size()));
  }
  std::vector<std::size_t> sizes;
  for (std::size_t h = 0; h < r; ++h) {
    if (strategies_[h].empty()) {
      throw InvalidInput("coalition '" + structure_.name(h) + "' has no strategies");
    }
    for (const auto& s : strategies_[h]) {
      if (s.find(kTupleSeparator) != std::string::npos) {
        throw InvalidInput("strategy label '" + s + "' contains '|'");
      }
    }
    sizes.push_back(strategies_[h].size());
  }
  indexer_ = TupleIndexer(sizes);
  if (payoffs_.size() != r) {
    throw InvalidInput("expected " + std::to_string(r) + " payoff tensors, got " +
                       std::to_string(payoffs_.size()));
  }
  for (std::size_t h = 0; h < r; ++h) {
    if (payoffs_[h].size() != indexer_.size()) {
      throw InvalidInput("payoff tensor of coalition '" + structure_.name(h) + "' has " +
                         std::to_string(payoffs_[h].size()) + " entries, expected " +
                         std::to_string(indexer_.size()));
    }
    for (double v : payoffs_[h]) {
      if (!std::isfinite(v)) {
        throw InvalidInput("payoff of coalition '" + structure_.name(h) + "' is not finite");
      }
    }
  }

  // Re-index the graph into flat profile order.
  auto labels = joint_labels(strategies_);
  if (graph.size() != labels.size()) {
    throw InvalidInput("graph has " + std::to_string(graph.size()) +
                       " nodes, expected one per joint profile (" +
                       std::to_string(labels.size()) + ")");
  }
  std::vector<NodeId> to_flat(graph.size());
  std::unordered_map<std::string, NodeId> flat_of;
  for (std::size_t j = 0; j < labels.size(); ++j) flat_of.emplace(labels[j], static_cast<NodeId>(j));
  for (NodeId u = 0; u < graph.size(); ++u) {
    auto it = flat_of.find(graph.label(u));
    if (it == flat_of.end()) {
      throw InvalidInput("graph node '" + graph.label(u) + "' is not a joint profile");
    }
    to_flat[u] = it->second;
  }
  std::vector<Edge> edges;
  edges.reserve(graph.edges().size());
  for (auto [u, v] : graph.edges()) edges.emplace_back(to_flat[u], to_flat[v]);
  graph_ = Graph(std::move(labels), std::move(edges));
}

std::size_t GGame::flat(const StrategyProfile& s) const { return indexer_.flatten(s.choices); }

StrategyProfile GGame::profile(std::size_t flat) const {
  return StrategyProfile{indexer_.unflatten(flat)};
}

std::string GGame::label(const StrategyProfile& s) const {
  return graph_.label(static_cast<NodeId>(flat(s)));
}

StrategyProfile GGame::parse_profile(std::string_view label) const {
  return profile(graph_.id(label));
}

bool GGame::valid(const StrategyProfile& s) const {
  if (s.size() != coalitions()) return false;
  for (std::size_t h = 0; h < s.size(); ++h) {
    if (s[h] >= strategies_[h].size()) return false;
  }
  return true;
}

GGame GGame::with_graph(const Graph& g) const {
  return GGame(structure_, strategies_, payoffs_, g);
}

GGame GGame::with_payoffs(std::vector<std::vector<double>> payoffs) const {
  return GGame(structure_, strategies_, std::move(payoffs), graph_);
}

StrategyProfile substitute(const StrategyProfile& s, const StrategyProfile& t,
                           std::span<const std::size_t> coalitions) {
  if (s.size() != t.size()) throw InvalidInput("substitute: profiles of different shapes");
  StrategyProfile out = s;
  for (std::size_t h : coalitions) {
    if (h >= s.size()) throw InvalidInput("substitute: coalition index out of range");
    out[h] = t[h];
  }
  return out;
}

std::optional<Violation> find_violation(const GGame& game, const StrategyProfile& sbar) {
  if (!game.valid(sbar)) throw InvalidInput("profile does not belong to the game");
  const std::size_t here = game.flat(sbar);
  const auto& ix = game.indexer();
  for (NodeId nb : game.graph().neighbors(static_cast<NodeId>(here))) {
    for (std::size_t c = 0; c < game.coalitions(); ++c) {
      const std::size_t mine = ix.coordinate(here, c);
      const std::size_t theirs = ix.coordinate(nb, c);
      if (mine == theirs) continue;
      // [sbar, s; C] differs from sbar only on block c.
      const std::size_t swapped = here + (theirs - mine) * ix.stride(c);
      const double gain = game.payoff(c, swapped) - game.payoff(c, here);
      if (gain > 0.0) return Violation{c, game.profile(nb), gain};
    }
  }
  return std::nullopt;
}

bool is_pure_c_equilibrium(const GGame& game, const StrategyProfile& sbar) {
  return !find_violation(game, sbar).has_value();
}

bool EquilibriumSet::contains(const StrategyProfile& s) const {
  return std::find(profiles.begin(), profiles.end(), s) != profiles.end();
}

EquilibriumSet pure_c_equilibria(const GGame& game) {
  EquilibriumSet out;
  for (std::size_t j = 0; j < game.profile_count(); ++j) {
    auto s = game.profile(j);
    if (is_pure_c_equilibrium(game, s)) out.profiles.push_back(std::move(s));
  }
  return out;
}

std::vector<std::vector<double>> coalition_payoff_from_players(
    const std::vector<std::vector<double>>& player_payoffs,
    const CoalitionStructure& structure) {
  if (player_payoffs.size() != structure.player_count()) {
    throw InvalidInput("expected " + std::to_string(structure.player_count()) +
                       " player payoff tensors, got " + std::to_string(player_payoffs.size()));
  }
  const std::size_t n = player_payoffs.empty() ? 0 : player_payoffs.front().size();
  for (const auto& t : player_payoffs) {
    if (t.size() != n) throw InvalidInput("player payoff tensors differ in shape");
  }
  std::vector<std::vector<double>> out(structure.size(), std::vector<double>(n, 0.0));
  for (std::size_t h = 0; h < structure.size(); ++h) {
    for (std::size_t p : structure.members(h)) {
      for (std::size_t j = 0; j < n; ++j) out[h][j] += player_payoffs[p][j];
    }
  }
  return out;
}

}  // namespace graphgame
