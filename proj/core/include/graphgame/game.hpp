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

#ifndef GRAPHGAME_GAME_HPP
#define GRAPHGAME_GAME_HPP

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graphgame/graph.hpp"

namespace graphgame {

// Partition of the players into coalitions C_1..C_r, each acting as one
// decision unit.
class CoalitionStructure {
 public:
  CoalitionStructure() = default;
  // `members[h]` lists player indices of coalition h. Throws InvalidInput
  // unless the coalitions are nonempty, disjoint and cover every player.
  CoalitionStructure(std::vector<std::string> players, std::vector<std::string> names,
                     std::vector<std::vector<std::size_t>> members);

  // One coalition per player, named after the player.
  static CoalitionStructure singletons(std::vector<std::string> players);
  // A single coalition containing everyone.
  static CoalitionStructure grand(std::vector<std::string> players,
                                  std::string name = "V");

  std::size_t player_count() const { return players_.size(); }
  std::size_t size() const { return members_.size(); }
  const std::vector<std::string>& players() const { return players_; }
  const std::string& name(std::size_t h) const { return names_.at(h); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<std::size_t>& members(std::size_t h) const { return members_.at(h); }
  std::size_t coalition_of(std::size_t player) const { return owner_.at(player); }
  std::optional<std::size_t> find(std::string_view coalition_name) const;

 private:
  std::vector<std::string> players_;
  std::vector<std::string> names_;
  std::vector<std::vector<std::size_t>> members_;
  std::vector<std::size_t> owner_;
};

// One strategy index per coalition.
struct StrategyProfile {
  std::vector<std::size_t> choices;

  std::size_t size() const { return choices.size(); }
  std::size_t operator[](std::size_t h) const { return choices[h]; }
  std::size_t& operator[](std::size_t h) { return choices[h]; }

  friend auto operator<=>(const StrategyProfile&, const StrategyProfile&) = default;
};

// A game on a graph: coalition payoff tensors over joint profiles plus the
// graph whose nodes are those profiles.
//
// Payoff tensors are dense and row-major over coalition order (coalition 0
// most significant). Graph node ids coincide with flat profile indices.
class GGame {
 public:
  GGame() = default;
  // The graph may list the joint labels in any order; it is re-indexed into
  // flat profile order. Throws InvalidInput on any shape mismatch.
  GGame(CoalitionStructure structure, std::vector<std::vector<std::string>> strategies,
        std::vector<std::vector<double>> payoffs, const Graph& graph);

  const CoalitionStructure& structure() const { return structure_; }
  std::size_t coalitions() const { return structure_.size(); }
  const std::vector<std::string>& strategies(std::size_t h) const { return strategies_.at(h); }
  std::size_t strategy_count(std::size_t h) const { return strategies_.at(h).size(); }
  std::vector<std::vector<std::string>> strategy_spaces() const { return strategies_; }

  const TupleIndexer& indexer() const { return indexer_; }
  std::size_t profile_count() const { return indexer_.size(); }

  std::size_t flat(const StrategyProfile& s) const;
  StrategyProfile profile(std::size_t flat) const;
  std::string label(const StrategyProfile& s) const;
  // Throws InvalidInput for unknown labels.
  StrategyProfile parse_profile(std::string_view label) const;
  bool valid(const StrategyProfile& s) const;

  double payoff(std::size_t coalition, std::size_t flat) const {
    return payoffs_[coalition][flat];
  }
  double payoff(std::size_t coalition, const StrategyProfile& s) const {
    return payoffs_[coalition][flat(s)];
  }
  std::span<const double> payoff_tensor(std::size_t coalition) const {
    return payoffs_.at(coalition);
  }
  const std::vector<std::vector<double>>& payoff_tensors() const { return payoffs_; }

  const Graph& graph() const { return graph_; }

  // Same game on another graph over the same joint labels.
  GGame with_graph(const Graph& g) const;
  GGame with_payoffs(std::vector<std::vector<double>> payoffs) const;

 private:
  CoalitionStructure structure_;
  std::vector<std::vector<std::string>> strategies_;
  TupleIndexer indexer_;
  std::vector<std::vector<double>> payoffs_;
  Graph graph_;
};

// Joint labels of all profiles in flat order.
std::vector<std::string> joint_labels(const std::vector<std::vector<std::string>>& strategies);

// [s, t; C]: the blocks of the coalitions listed in `coalitions` come from t,
// the rest from s.
StrategyProfile substitute(const StrategyProfile& s, const StrategyProfile& t,
                           std::span<const std::size_t> coalitions);

// A profitable substitution: coalition `coalition` gains `gain` > 0 by taking
// its block from the graph neighbour `neighbor`.
struct Violation {
  std::size_t coalition = 0;
  StrategyProfile neighbor;
  double gain = 0.0;
};

// First violation in (neighbour order, coalition order), if any.
std::optional<Violation> find_violation(const GGame& game, const StrategyProfile& sbar);

bool is_pure_c_equilibrium(const GGame& game, const StrategyProfile& sbar);

struct EquilibriumSet {
  std::vector<StrategyProfile> profiles;

  bool empty() const { return profiles.empty(); }
  std::size_t size() const { return profiles.size(); }
  bool contains(const StrategyProfile& s) const;
};

// Exhaustive; profiles in flat order.
EquilibriumSet pure_c_equilibria(const GGame& game);

// Pi_C = sum over i in C of pi_i, pointwise.
std::vector<std::vector<double>> coalition_payoff_from_players(
    const std::vector<std::vector<double>>& player_payoffs,
    const CoalitionStructure& structure);

}  // namespace graphgame

#endif  // GRAPHGAME_GAME_HPP
