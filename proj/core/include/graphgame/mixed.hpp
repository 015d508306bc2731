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

#ifndef GRAPHGAME_MIXED_HPP
#define GRAPHGAME_MIXED_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "graphgame/game.hpp"

namespace graphgame {

// Probability vector over a finite space.
class Distribution {
 public:
  static constexpr double kSumTolerance = 1e-12;

  Distribution() = default;
  // Throws InvalidInput unless entries lie in [0,1] and sum to 1 within
  // kSumTolerance.
  explicit Distribution(std::vector<double> masses);

  // Clamps tiny negatives to zero and rescales to unit mass.
  static Distribution normalized(std::vector<double> weights);
  static Distribution dirac(std::size_t n, std::size_t at);
  static Distribution uniform(std::size_t n);
  static Distribution uniform_on(std::size_t n, std::span<const std::size_t> support);

  std::size_t size() const { return masses_.size(); }
  double operator[](std::size_t i) const { return masses_[i]; }
  const std::vector<double>& masses() const { return masses_; }

  std::vector<std::size_t> support() const;
  bool is_dirac() const { return support().size() == 1; }

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  std::vector<double> masses_;
};

// 0.5 * sum |p - q|.
double tv_distance(const Distribution& p, const Distribution& q);

// Product of per-coalition distributions.
struct MixedProfile {
  std::vector<Distribution> parts;

  static MixedProfile dirac(const GGame& game, const StrategyProfile& s);
  static MixedProfile uniform(const GGame& game);

  std::size_t size() const { return parts.size(); }
  const Distribution& operator[](std::size_t h) const { return parts[h]; }

  // Probability of a joint profile given by its flat index.
  double joint_mass(const GGame& game, std::size_t flat) const;
};

// Sum over joint profiles of Pi_c(s) * prod_h lambda_h(s_h).
double expected_payoff(const GGame& game, const MixedProfile& profile, std::size_t c);

// Expected payoff of coalition `c` for each of its pure strategies, with the
// other coalitions mixing according to `profile`.
std::vector<double> pure_deviation_payoffs(const GGame& game, const MixedProfile& profile,
                                           std::size_t c);

struct BestResponse {
  double value = 0.0;
  // Maximizers in increasing strategy index; values within
  // 1e-12 * (1 + |value|) of the maximum count as ties.
  std::vector<std::size_t> argmax;
};

BestResponse best_pure_response(const GGame& game, const MixedProfile& profile, std::size_t c);

// Expected payoff is linear in each coalition's own distribution, so
// comparing against the best pure deviation is exact.
bool is_mixed_c_equilibrium(const GGame& game, const MixedProfile& profile, double tol);

// Largest gain any coalition obtains by deviating from `profile`.
double max_deviation_gain(const GGame& game, const MixedProfile& profile);

struct MixedSolverOptions {
  double tol = 1e-6;
  std::uint64_t max_iterations = 100000;
  // Support enumeration is used when every space has at most this many
  // strategies and there are at most `max_enumerated_coalitions` coalitions.
  std::size_t max_enumerated_strategies = 4;
  std::size_t max_enumerated_coalitions = 3;
};

// Certified (is_mixed_c_equilibrium with options.tol) mixed equilibrium.
// Tries pure profiles, then support enumeration over profiles where at most
// two coalitions mix, then fictitious play. Throws NoConvergence when the
// iteration cap is reached without certification.
MixedProfile compute_mixed_equilibrium(const GGame& game, const MixedSolverOptions& options = {});

// The Dirac product at s is a mixed equilibrium (tol = 0).
bool pure_in_mixed(const GGame& game, const StrategyProfile& s);

// {"<coalition name>": [masses...], ...}
nlohmann::json mixed_to_json(const GGame& game, const MixedProfile& profile);
MixedProfile mixed_from_json(const GGame& game, const nlohmann::json& doc);

}  // namespace graphgame

#endif  // GRAPHGAME_MIXED_HPP
