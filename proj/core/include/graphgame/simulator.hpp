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

#ifndef GRAPHGAME_SIMULATOR_HPP
#define GRAPHGAME_SIMULATOR_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "graphgame/chain.hpp"
#include "graphgame/rng.hpp"

namespace graphgame {

// Realization X(0..T-1) of a chain. `states` are node ids of the governing
// graph; for product chains they are flat indices of the strong product and
// `components` holds the per-factor node ids.
struct Trace {
  std::uint64_t seed = 0;
  std::vector<std::uint32_t> states;
  std::vector<std::uint64_t> counts;
  std::vector<std::vector<std::uint32_t>> components;

  std::size_t length() const { return states.size(); }
};

// Drives one chain step by step over graph node ids: a fixed kernel, or a
// schedule-indexed family whose transition out of X(m) uses P(t_1 + m).
class ChainStepper {
 public:
  static ChainStepper homogeneous(std::shared_ptr<const TransitionKernel> kernel);
  static ChainStepper nonhomogeneous(std::shared_ptr<const NonhomogeneousKernel> family);

  // Node count of the governing graph.
  std::size_t graph_size() const;
  // Nodes the chain may occupy.
  bool is_state(NodeId node) const;

  // Places the chain at `start` with the clock at step 0. Throws
  // InvalidInput when `start` is not a state.
  void reset(NodeId start);
  // Draws X(0) from `init` (indexed by graph node) and resets.
  NodeId reset(const Distribution& init, Rng& rng);

  NodeId current() const { return current_; }
  std::uint64_t step_index() const { return step_; }
  NodeId advance(Rng& rng);

 private:
  std::shared_ptr<const TransitionKernel> kernel_;
  std::shared_ptr<const NonhomogeneousKernel> family_;
  std::uint64_t step_ = 0;
  std::uint32_t state_ = 0;  // sorted index inside the active kernel
  NodeId current_ = 0;
  // Nonhomogeneous bookkeeping.
  std::uint64_t interval_ = 0;
  std::optional<std::uint64_t> next_switch_;

  void enter_interval(std::uint64_t l, std::uint64_t t_l);
};

// X(0) ~ init (over graph nodes), X(t+1) ~ row X(t). T >= 1.
Trace run_homogeneous(const TransitionKernel& kernel, const Distribution& init, std::uint64_t steps,
                      std::uint64_t seed);

Trace run_nonhomogeneous(std::shared_ptr<const NonhomogeneousKernel> family,
                         const Distribution& init, std::uint64_t steps, std::uint64_t seed);
Trace run_nonhomogeneous(const Distribution& mu, const Graph& g, const Schedule& schedule,
                         const Distribution& init, std::uint64_t steps, std::uint64_t seed);

// Runs any stepper from a draw of `init`; the trace has `steps` states.
Trace run_chain(ChainStepper stepper, const Distribution& init, std::uint64_t steps,
                std::uint64_t seed);

// Chain reaching `mu` on g for the consistent cases: constant chain,
// homogeneous kernel on G[supp mu], or the nonhomogeneous family. Throws
// SupportSplit otherwise.
ChainStepper make_target_chain(const Distribution& mu, const Graph& g, const Schedule& schedule);

struct ComponentSpec {
  std::string name;
  Distribution target;
  Graph graph;
  Schedule schedule;
  // Initial law over graph nodes; defaults to the target.
  std::optional<Distribution> init;
};

struct ProductChainSpec {
  std::vector<ComponentSpec> components;
  std::uint64_t steps = 0;
  std::uint64_t seed = 0;
  // Required switching-gap growth: t_{l+1} - t_l >= gap_c * l^gap_exponent.
  double gap_c = 1.0;
  double gap_exponent = 3.0;
};

// Checks the gap requirement for every nonhomogeneous component on the
// intervals reached within `spec.steps`. Throws ScheduleError.
void check_gap_condition(const ProductChainSpec& spec);

// Independent component chains, component h seeded with
// derive_seed(spec.seed, h).
Trace run_product(const ProductChainSpec& spec);

Graph product_graph(const ProductChainSpec& spec);

Distribution empirical_distribution(const Trace& trace);
double ergodic_average(const Trace& trace, std::span<const double> f);
bool verify_consistency(const Trace& trace, const Graph& g);

// (t, TV(empirical of X(0..t-1), target)) at each checkpoint t <= length.
std::vector<std::pair<std::uint64_t, double>> tv_series(const Trace& trace,
                                                        const Distribution& target,
                                                        std::span<const std::uint64_t> checkpoints);
// 1, 2, 5, 10, 20, 50, ... up to and including `steps`.
std::vector<std::uint64_t> log_checkpoints(std::uint64_t steps);

// "t,<name>..." with one row per step; `graphs` label each column.
void write_trace_csv(std::ostream& out, const Trace& trace, std::span<const Graph> graphs,
                     std::span<const std::string> names);
// "state,count,frequency".
void write_empirical_csv(std::ostream& out, const Trace& trace, const Graph& g);

}  // namespace graphgame

#endif  // GRAPHGAME_SIMULATOR_HPP
