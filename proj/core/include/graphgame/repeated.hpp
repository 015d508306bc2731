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

#ifndef GRAPHGAME_REPEATED_HPP
#define GRAPHGAME_REPEATED_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "graphgame/game.hpp"
#include "graphgame/graph.hpp"
#include "graphgame/mixed.hpp"
#include "graphgame/policy.hpp"
#include "graphgame/schedule.hpp"
#include "graphgame/simulator.hpp"

namespace graphgame {

enum class Information { Maximal, Minimal };

struct Horizon {
  std::uint64_t length = 1;
  // Infinite games are evaluated on `length` stages.
  bool infinite = false;

  static Horizon finite(std::uint64_t t) { return {t, false}; }
  static Horizon evaluated(std::uint64_t t_eval) { return {t_eval, true}; }
};

struct Initialization {
  enum class Kind { Players, Referee };
  Kind kind = Kind::Players;
  // Referee only: exactly one of these is set.
  std::optional<StrategyProfile> profile;
  std::optional<MixedProfile> distributions;

  static Initialization players() { return {}; }
  static Initialization referee(StrategyProfile s) { return {Kind::Referee, std::move(s), {}}; }
  static Initialization referee(MixedProfile m) { return {Kind::Referee, {}, std::move(m)}; }
};

struct RepeatedConfig {
  GGame game;
  Decomposition decomposition;
  Horizon horizon;
  Information info = Information::Minimal;
  Initialization init;
  // One prototype per coalition; each run plays on a clone.
  std::vector<PolicyPtr> policies;
};

// Factor graphs of the game graph over the coalitions' strategy spaces.
// Throws NotDecomposable when the graph is not a strong product.
Decomposition require_decomposition(const GGame& game);

// Checks the decomposition against the game graph, the policy count and the
// initialization. Throws InvalidInput or NotDecomposable.
void validate(const RepeatedConfig& config);

RepeatedConfig make_repeated_config(const GGame& game, Horizon horizon, Information info,
                                    Initialization init, std::vector<PolicyPtr> policies);

struct PayoffEstimate {
  double average = 0.0;
  // Minimum running average over [T/2, T]; equals `average` for finite T.
  double tail_liminf = 0.0;
};

// Payoff of coalition c over the first horizon.length stages of a joint trace.
PayoffEstimate repeated_payoff(const Trace& trace, const GGame& game, std::size_t c,
                               const Horizon& horizon);

struct PayoffReport {
  std::uint64_t seed = 0;
  std::uint64_t stages = 0;
  std::vector<PayoffEstimate> coalitions;
};

std::pair<Trace, PayoffReport> simulate_repeated(const RepeatedConfig& config, std::uint64_t seed);

// Same play as simulate_repeated without keeping the trace.
PayoffReport play_repeated(const RepeatedConfig& config, std::uint64_t seed);

struct EquilibriumPolicyOptions {
  Schedule schedule = Schedule::power_gap(1.0, 3.0);
  // When set, case (ii) factors use a homogeneous chain on the target
  // smoothed to within this total variation instead of a schedule.
  std::optional<double> epsilon;
  double tol = 1e-6;
};

std::vector<PolicyPtr> equilibrium_policies(const GGame& game, const Decomposition& decomposition,
                                            const MixedProfile& mixed,
                                            const EquilibriumPolicyOptions& options = {});

struct DeviationReport {
  std::size_t coalition = 0;
  std::string deviation;
  std::uint64_t t_eval = 0;
  double margin = 3.0;
  std::vector<double> equilibrium_values;
  std::vector<double> deviation_values;
  double equilibrium_mean = 0.0;
  double equilibrium_se = 0.0;
  double deviation_mean = 0.0;
  double deviation_se = 0.0;
  double difference_mean = 0.0;
  // Paired standard error of deviation minus equilibrium.
  double difference_se = 0.0;
  bool not_improved = false;
};

// Replays the config with coalition `coalition` switched to `deviation`,
// on the same per-replica seeds as the unchanged config.
DeviationReport deviation_test(const RepeatedConfig& config, std::size_t coalition,
                               const PolicyPtr& deviation, std::uint64_t t_eval,
                               std::size_t replicas, std::uint64_t seed, double margin = 3.0);

// The five stock deviations for one coalition: constant at the first and at
// the last strategy, lazy random walk, myopic greedy against `belief`, and
// round robin.
std::vector<PolicyPtr> stock_deviations(const GGame& game, const Decomposition& decomposition,
                                        std::size_t coalition, const MixedProfile& belief);

// Whether sbar is a Berge equilibrium once each coalition may only move to
// factor-graph neighbours of its own strategy. Throws InvalidInput when sbar
// is not a pure C-equilibrium and NotDecomposable when no factors exist.
bool two_stage_check(const GGame& game, const StrategyProfile& sbar);

struct FolkCheckOptions {
  std::uint64_t t_eval = 1'000'000;
  std::size_t replicas = 20;
  std::uint64_t seed = 1;
  double payoff_tolerance = 0.02;
  double margin = 3.0;
  EquilibriumPolicyOptions chain;
  MixedSolverOptions solver;
  // Skips the solver when set.
  std::optional<MixedProfile> equilibrium;
};

struct CoalitionFolkResult {
  std::string name;
  double expected = 0.0;
  double payoff_range = 0.0;
  std::vector<PayoffEstimate> replicas;
  double max_error = 0.0;
  bool payoff_match = false;
  std::vector<DeviationReport> deviations;
};

struct FolkCheckReport {
  MixedProfile equilibrium;
  std::vector<std::string> chain_cases;
  std::vector<CoalitionFolkResult> coalitions;
  bool pass = false;
};

FolkCheckReport folk_check(const GGame& game, const FolkCheckOptions& options = {});

nlohmann::json to_json(const DeviationReport& report);
nlohmann::json folk_report_json(const GGame& game, const FolkCheckReport& report);
// Per coalition {final_average, tail_liminf_estimate, stderr, replicas}.
nlohmann::json repeated_report_json(const GGame& game, const std::vector<PayoffReport>& runs);

}  // namespace graphgame

#endif  // GRAPHGAME_REPEATED_HPP
