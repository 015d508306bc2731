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

#ifndef GRAPHGAME_POLICY_HPP
#define GRAPHGAME_POLICY_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "graphgame/game.hpp"
#include "graphgame/mixed.hpp"
#include "graphgame/rng.hpp"
#include "graphgame/simulator.hpp"

namespace graphgame {

// What a coalition sees when choosing its stage t+1 strategy.
struct PolicyContext {
  std::uint64_t t = 0;
  std::size_t coalition = 0;
  // s_C(t), the coalition's own current strategy.
  std::size_t current = 0;
  // s_C(0..t); filled only for policies that ask for history.
  std::span<const std::size_t> own_history;
  // Flat joint profiles s(0..t). Empty under minimal information.
  std::span<const std::size_t> joint_history;
};

// Strategy process of one coalition in a repeated game on its factor graph.
// Every choice must be adjacent-or-equal to the current strategy; the engine
// rejects anything else with ConsistencyViolation.
class Policy {
 public:
  virtual ~Policy() = default;

  // Fresh copy with the same configuration and no play state.
  virtual std::unique_ptr<Policy> clone() const = 0;
  virtual std::string name() const = 0;

  // Initial strategy when players pick it themselves.
  virtual std::size_t initial(Rng& rng) = 0;
  // Called once with the initial strategy actually in force.
  virtual void start(std::size_t) {}
  virtual std::size_t next(const PolicyContext& ctx, Rng& rng) = 0;
  virtual bool needs_history() const { return false; }
};

using PolicyPtr = std::shared_ptr<const Policy>;

// Markov chain policy over the coalition's strategies (constant, homogeneous
// or nonhomogeneous, per ChainStepper).
class MarkovPolicy final : public Policy {
 public:
  MarkovPolicy(std::string name, ChainStepper chain, Distribution init);
  std::unique_ptr<Policy> clone() const override;
  std::string name() const override { return name_; }
  std::size_t initial(Rng& rng) override;
  void start(std::size_t s0) override { chain_.reset(static_cast<NodeId>(s0)); }
  std::size_t next(const PolicyContext& ctx, Rng& rng) override;

  const ChainStepper& chain() const { return chain_; }

 private:
  std::string name_;
  ChainStepper chain_;
  Distribution init_;
};

// Replays a fixed strategy sequence; the last entry repeats.
class ScriptedPolicy final : public Policy {
 public:
  explicit ScriptedPolicy(std::vector<std::size_t> script);
  std::unique_ptr<Policy> clone() const override;
  std::string name() const override { return "scripted"; }
  std::size_t initial(Rng&) override { return script_.front(); }
  std::size_t next(const PolicyContext& ctx, Rng&) override;

 private:
  std::vector<std::size_t> script_;
};

class CustomPolicy final : public Policy {
 public:
  using Chooser = std::function<std::size_t(const PolicyContext&, Rng&)>;
  CustomPolicy(std::string name, std::size_t initial, Chooser chooser, bool needs_history = false);
  std::unique_ptr<Policy> clone() const override;
  std::string name() const override { return name_; }
  std::size_t initial(Rng&) override { return initial_; }
  std::size_t next(const PolicyContext& ctx, Rng& rng) override { return chooser_(ctx, rng); }
  bool needs_history() const override { return needs_history_; }

 private:
  std::string name_;
  std::size_t initial_;
  Chooser chooser_;
  bool needs_history_;
};

// Walks a shortest path in the factor graph to `target`, then stays there.
class ConstantPolicy final : public Policy {
 public:
  ConstantPolicy(const Graph& factor, std::size_t target);
  std::unique_ptr<Policy> clone() const override;
  std::string name() const override;
  std::size_t initial(Rng&) override { return target_; }
  std::size_t next(const PolicyContext& ctx, Rng&) override;

 private:
  std::string label_;
  std::size_t target_;
  // Next hop towards the target from each node (the target maps to itself).
  std::vector<std::size_t> hop_;
};

// Stays with probability 1/2, otherwise moves to a uniform neighbour.
class LazyRandomWalkPolicy final : public Policy {
 public:
  explicit LazyRandomWalkPolicy(Graph factor);
  std::unique_ptr<Policy> clone() const override;
  std::string name() const override { return "lazy-random-walk"; }
  std::size_t initial(Rng& rng) override;
  std::size_t next(const PolicyContext& ctx, Rng& rng) override;

 private:
  Graph factor_;
};

// Cycles through the neighbourhood of the current strategy in index order,
// one step per stage.
class RoundRobinPolicy final : public Policy {
 public:
  explicit RoundRobinPolicy(Graph factor);
  std::unique_ptr<Policy> clone() const override;
  std::string name() const override { return "round-robin"; }
  std::size_t initial(Rng&) override { return 0; }
  std::size_t next(const PolicyContext& ctx, Rng&) override;

 private:
  Graph factor_;
};

// Plays as if every stage were the last: the adjacent strategy maximizing
// the coalition's expected stage payoff against a fixed belief about the
// others (lowest index among ties). Uses no information about the others'
// play.
class MyopicGreedyPolicy final : public Policy {
 public:
  MyopicGreedyPolicy(const GGame& game, std::size_t coalition, const MixedProfile& belief,
                     Graph factor);
  std::unique_ptr<Policy> clone() const override;
  std::string name() const override { return "myopic-greedy"; }
  std::size_t initial(Rng&) override;
  std::size_t next(const PolicyContext& ctx, Rng&) override;

 private:
  std::vector<double> value_;
  Graph factor_;
};

}  // namespace graphgame

#endif  // GRAPHGAME_POLICY_HPP
