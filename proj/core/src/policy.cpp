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

#include "graphgame/policy.hpp"

#include <deque>
#include <limits>

#include "graphgame/errors.hpp"

namespace graphgame {

MarkovPolicy::MarkovPolicy(std::string name, ChainStepper chain, Distribution init)
    : name_(std::move(name)), chain_(std::move(chain)), init_(std::move(init)) {
  if (init_.size() != chain_.graph_size()) {
    throw InvalidInput("markov policy: initial law does not match the factor graph");
  }
}

std::unique_ptr<Policy> MarkovPolicy::clone() const { return std::make_unique<MarkovPolicy>(*this); }

std::size_t MarkovPolicy::initial(Rng& rng) { return rng.categorical(init_.masses()); }

std::size_t MarkovPolicy::next(const PolicyContext&, Rng& rng) { return chain_.advance(rng); }

ScriptedPolicy::ScriptedPolicy(std::vector<std::size_t> script) : script_(std::move(script)) {
  if (script_.empty()) throw InvalidInput("scripted policy needs at least one strategy");
}

std::unique_ptr<Policy> ScriptedPolicy::clone() const {
  return std::make_unique<ScriptedPolicy>(*this);
}

std::size_t ScriptedPolicy::next(const PolicyContext& ctx, Rng&) {
  const std::uint64_t i = ctx.t + 1;
  return i < script_.size() ? script_[i] : script_.back();
}

CustomPolicy::CustomPolicy(std::string name, std::size_t initial, Chooser chooser,
                           bool needs_history)
    : name_(std::move(name)),
      initial_(initial),
      chooser_(std::move(chooser)),
      needs_history_(needs_history) {
  if (!chooser_) throw InvalidInput("custom policy needs a chooser");
}

std::unique_ptr<Policy> CustomPolicy::clone() const { return std::make_unique<CustomPolicy>(*this); }

ConstantPolicy::ConstantPolicy(const Graph& factor, std::size_t target)
    : label_(factor.label(static_cast<NodeId>(target))),
      target_(target),
      hop_(factor.size(), std::numeric_limits<std::size_t>::max()) {
  // BFS from the target; each node's hop is its BFS parent.
  std::deque<NodeId> queue{static_cast<NodeId>(target)};
  hop_[target] = target;
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    for (NodeId v : factor.neighbors(u)) {
      if (hop_[v] == std::numeric_limits<std::size_t>::max()) {
        hop_[v] = u;
        queue.push_back(v);
      }
    }
  }
}

std::unique_ptr<Policy> ConstantPolicy::clone() const {
  return std::make_unique<ConstantPolicy>(*this);
}

std::string ConstantPolicy::name() const { return "constant(" + label_ + ")"; }

std::size_t ConstantPolicy::next(const PolicyContext& ctx, Rng&) {
  const std::size_t h = hop_.at(ctx.current);
  // Unreachable targets: stay put.
  return h == std::numeric_limits<std::size_t>::max() ? ctx.current : h;
}

LazyRandomWalkPolicy::LazyRandomWalkPolicy(Graph factor) : factor_(std::move(factor)) {}

std::unique_ptr<Policy> LazyRandomWalkPolicy::clone() const {
  return std::make_unique<LazyRandomWalkPolicy>(*this);
}

std::size_t LazyRandomWalkPolicy::initial(Rng& rng) {
  return static_cast<std::size_t>(rng.uniform() * static_cast<double>(factor_.size()));
}

std::size_t LazyRandomWalkPolicy::next(const PolicyContext& ctx, Rng& rng) {
  const double u = rng.uniform();
  const auto nb = factor_.neighbors(static_cast<NodeId>(ctx.current));
  if (u < 0.5 || nb.empty()) return ctx.current;
  const auto i = static_cast<std::size_t>((u - 0.5) * 2.0 * static_cast<double>(nb.size()));
  return nb[std::min(i, nb.size() - 1)];
}

RoundRobinPolicy::RoundRobinPolicy(Graph factor) : factor_(std::move(factor)) {}

std::unique_ptr<Policy> RoundRobinPolicy::clone() const {
  return std::make_unique<RoundRobinPolicy>(*this);
}

std::size_t RoundRobinPolicy::next(const PolicyContext& ctx, Rng&) {
  // Smallest neighbour above the current index, wrapping to the smallest.
  const auto nb = factor_.neighbors(static_cast<NodeId>(ctx.current));
  if (nb.empty()) return ctx.current;
  for (NodeId v : nb) {
    if (v > ctx.current) return v;
  }
  return nb.front();
}

MyopicGreedyPolicy::MyopicGreedyPolicy(const GGame& game, std::size_t coalition,
                                       const MixedProfile& belief, Graph factor)
    : value_(pure_deviation_payoffs(game, belief, coalition)), factor_(std::move(factor)) {
  if (factor_.size() != value_.size()) {
    throw InvalidInput("myopic policy: factor graph does not match the strategy space");
  }
}

std::unique_ptr<Policy> MyopicGreedyPolicy::clone() const {
  return std::make_unique<MyopicGreedyPolicy>(*this);
}

std::size_t MyopicGreedyPolicy::initial(Rng&) {
  std::size_t best = 0;
  for (std::size_t a = 1; a < value_.size(); ++a) {
    if (value_[a] > value_[best]) best = a;
  }
  return best;
}

std::size_t MyopicGreedyPolicy::next(const PolicyContext& ctx, Rng&) {
  std::size_t best = ctx.current;
  for (NodeId v : factor_.neighbors(static_cast<NodeId>(ctx.current))) {
    if (value_[v] > value_[best] || (value_[v] == value_[best] && v < best)) best = v;
  }
  return best;
}

}  // namespace graphgame
