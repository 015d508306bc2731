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

#include "graphgame/simulator.hpp"

#include <cmath>
#include <iomanip>

#include "graphgame/errors.hpp"

namespace graphgame {

ChainStepper ChainStepper::homogeneous(std::shared_ptr<const TransitionKernel> kernel) {
  if (!kernel) throw InvalidInput("null kernel");
  ChainStepper s;
  s.kernel_ = std::move(kernel);
  s.current_ = s.kernel_->node(0);
  return s;
}

ChainStepper ChainStepper::nonhomogeneous(std::shared_ptr<const NonhomogeneousKernel> family) {
  if (!family) throw InvalidInput("null kernel family");
  ChainStepper s;
  s.family_ = std::move(family);
  s.enter_interval(1, s.family_->schedule().start());
  s.current_ = s.kernel_->node(0);
  return s;
}

std::size_t ChainStepper::graph_size() const { return kernel_->graph_size(); }

bool ChainStepper::is_state(NodeId node) const {
  if (family_) return family_->component().contains(node);
  return kernel_->state_of(node) >= 0;
}

void ChainStepper::enter_interval(std::uint64_t l, std::uint64_t t_l) {
  interval_ = l;
  kernel_ = family_->for_interval(l);
  next_switch_ = family_->schedule().successor(l, t_l);
}

void ChainStepper::reset(NodeId start) {
  if (family_) enter_interval(1, family_->schedule().start());
  const auto idx = kernel_->state_of(start);
  if (idx < 0) {
    throw InvalidInput("initial state '" + std::to_string(start) +
                       "' is outside the chain's state space");
  }
  state_ = static_cast<std::uint32_t>(idx);
  current_ = start;
  step_ = 0;
}

NodeId ChainStepper::reset(const Distribution& init, Rng& rng) {
  if (init.size() != graph_size()) {
    throw InvalidInput("initial distribution has " + std::to_string(init.size()) +
                       " entries, graph has " + std::to_string(graph_size()) + " nodes");
  }
  const auto start = static_cast<NodeId>(rng.categorical(init.masses()));
  reset(start);
  return start;
}

NodeId ChainStepper::advance(Rng& rng) {
  if (family_) {
    const std::uint64_t now = family_->schedule().start() + step_;
    bool switched = false;
    while (next_switch_ && now >= *next_switch_) {
      const std::uint64_t t_l = *next_switch_;
      ++interval_;
      next_switch_ = family_->schedule().successor(interval_, t_l);
      switched = true;
    }
    if (switched) {
      kernel_ = family_->for_interval(interval_);
      state_ = static_cast<std::uint32_t>(kernel_->state_of(current_));
    }
  }
  state_ = kernel_->step(state_, rng.uniform());
  current_ = kernel_->node(state_);
  ++step_;
  return current_;
}

namespace {

Trace run_chain_impl(ChainStepper stepper, const Distribution& init, std::uint64_t steps,
                  std::uint64_t seed) {
  if (steps == 0) throw InvalidInput("trace length must be at least 1");
  Rng rng(seed);
  Trace trace;
  trace.seed = seed;
  trace.counts.assign(stepper.graph_size(), 0);
  trace.states.reserve(steps);
  NodeId x = stepper.reset(init, rng);
  for (std::uint64_t m = 0; m < steps; ++m) {
    if (m != 0) x = stepper.advance(rng);
    trace.states.push_back(x);
    ++trace.counts[x];
  }
  return trace;
}

}  // namespace

Trace run_homogeneous(const TransitionKernel& kernel, const Distribution& init, std::uint64_t steps,
                      std::uint64_t seed) {
  return run_chain_impl(ChainStepper::homogeneous(std::make_shared<const TransitionKernel>(kernel)),
                     init, steps, seed);
}

Trace run_nonhomogeneous(std::shared_ptr<const NonhomogeneousKernel> family,
                         const Distribution& init, std::uint64_t steps, std::uint64_t seed) {
  return run_chain_impl(ChainStepper::nonhomogeneous(std::move(family)), init, steps, seed);
}

Trace run_nonhomogeneous(const Distribution& mu, const Graph& g, const Schedule& schedule,
                         const Distribution& init, std::uint64_t steps, std::uint64_t seed) {
  return run_nonhomogeneous(std::make_shared<const NonhomogeneousKernel>(mu, g, schedule), init,
                            steps, seed);
}

Trace run_chain(ChainStepper stepper, const Distribution& init, std::uint64_t steps,
                std::uint64_t seed) {
  return run_chain_impl(std::move(stepper), init, steps, seed);
}

ChainStepper make_target_chain(const Distribution& mu, const Graph& g, const Schedule& schedule) {
  switch (classify_case(g, mu)) {
    case CaseLabel::PointMass:
      return ChainStepper::homogeneous(std::make_shared<const TransitionKernel>(
          constant_kernel(g, static_cast<NodeId>(mu.support().front()))));
    case CaseLabel::SupportConnected: {
      std::vector<NodeId> supp;
      for (std::size_t i : mu.support()) supp.push_back(static_cast<NodeId>(i));
      return ChainStepper::homogeneous(std::make_shared<const TransitionKernel>(
          build_kernel_on(mu, g, NodeSubset(std::move(supp)))));
    }
    case CaseLabel::SupportInComponent:
      return ChainStepper::nonhomogeneous(
          std::make_shared<const NonhomogeneousKernel>(mu, g, schedule));
    case CaseLabel::SupportSplit:
      break;
  }
  throw SupportSplit(
      "target support spans several connected components; no process consistent with the graph "
      "can reach it");
}

void check_gap_condition(const ProductChainSpec& spec) {
  for (const auto& c : spec.components) {
    if (classify_case(c.graph, c.target) != CaseLabel::SupportInComponent) continue;
    const auto& sch = c.schedule;
    const std::uint64_t first = sch.start();
    const std::uint64_t horizon = first + spec.steps;
    std::uint64_t t_l = first;
    for (std::uint64_t l = 1; t_l <= horizon; ++l) {
      const auto next = sch.successor(l, t_l);
      if (!next) break;
      const double need = spec.gap_c * std::pow(static_cast<double>(l), spec.gap_exponent);
      if (static_cast<double>(*next - t_l) < need) {
        throw ScheduleError("component '" + c.name + "': switching gap " +
                            std::to_string(*next - t_l) + " at interval " + std::to_string(l) +
                            " is below the required " + std::to_string(need));
      }
      t_l = *next;
    }
  }
}

Graph product_graph(const ProductChainSpec& spec) {
  std::vector<Graph> factors;
  for (const auto& c : spec.components) factors.push_back(c.graph);
  return strong_product(factors);
}

Trace run_product(const ProductChainSpec& spec) {
  if (spec.components.empty()) throw InvalidInput("product chain needs at least one component");
  if (spec.steps == 0) throw InvalidInput("trace length must be at least 1");
  check_gap_condition(spec);

  const std::size_t r = spec.components.size();
  std::vector<ChainStepper> chains;
  std::vector<Rng> rngs;
  std::vector<std::size_t> sizes;
  for (std::size_t h = 0; h < r; ++h) {
    const auto& c = spec.components[h];
    chains.push_back(make_target_chain(c.target, c.graph, c.schedule));
    rngs.emplace_back(derive_seed(spec.seed, h));
    sizes.push_back(c.graph.size());
  }
  const TupleIndexer ix(sizes);

  Trace trace;
  trace.seed = spec.seed;
  trace.counts.assign(ix.size(), 0);
  trace.components.assign(r, {});
  trace.states.reserve(spec.steps);
  for (auto& col : trace.components) col.reserve(spec.steps);
  std::vector<NodeId> x(r);
  for (std::size_t h = 0; h < r; ++h) {
    const auto& c = spec.components[h];
    x[h] = chains[h].reset(c.init ? *c.init : c.target, rngs[h]);
  }
  for (std::uint64_t m = 0; m < spec.steps; ++m) {
    std::size_t flat = 0;
    for (std::size_t h = 0; h < r; ++h) {
      if (m != 0) x[h] = chains[h].advance(rngs[h]);
      trace.components[h].push_back(x[h]);
      flat += x[h] * ix.stride(h);
    }
    trace.states.push_back(static_cast<std::uint32_t>(flat));
    ++trace.counts[flat];
  }
  return trace;
}

Distribution empirical_distribution(const Trace& trace) {
  if (trace.length() == 0) throw InvalidInput("empty trace");
  std::vector<double> f(trace.counts.size());
  const auto total = static_cast<double>(trace.length());
  for (std::size_t s = 0; s < f.size(); ++s) f[s] = static_cast<double>(trace.counts[s]) / total;
  return Distribution::normalized(std::move(f));
}

double ergodic_average(const Trace& trace, std::span<const double> f) {
  if (trace.length() == 0) throw InvalidInput("empty trace");
  if (f.size() != trace.counts.size()) throw InvalidInput("function size does not match trace space");
  double sum = 0.0;
  for (std::size_t s = 0; s < f.size(); ++s) {
    if (trace.counts[s] != 0) sum += f[s] * static_cast<double>(trace.counts[s]);
  }
  return sum / static_cast<double>(trace.length());
}

bool verify_consistency(const Trace& trace, const Graph& g) {
  for (std::size_t m = 0; m < trace.length(); ++m) {
    if (trace.states[m] >= g.size()) return false;
    if (m != 0 && !g.adjacent(trace.states[m - 1], trace.states[m])) return false;
  }
  return true;
}

std::vector<std::pair<std::uint64_t, double>> tv_series(const Trace& trace,
                                                        const Distribution& target,
                                                        std::span<const std::uint64_t> checkpoints) {
  if (target.size() != trace.counts.size()) throw InvalidInput("target size does not match trace");
  std::vector<std::uint64_t> running(target.size(), 0);
  std::vector<std::pair<std::uint64_t, double>> out;
  std::uint64_t m = 0;
  for (std::uint64_t t : checkpoints) {
    if (t == 0 || t > trace.length()) continue;
    for (; m < t; ++m) ++running[trace.states[m]];
    double sum = 0.0;
    for (std::size_t s = 0; s < running.size(); ++s) {
      sum += std::abs(static_cast<double>(running[s]) / static_cast<double>(t) - target[s]);
    }
    out.emplace_back(t, 0.5 * sum);
  }
  return out;
}

std::vector<std::uint64_t> log_checkpoints(std::uint64_t steps) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t decade = 1; decade <= steps; decade *= 10) {
    for (std::uint64_t f : {1u, 2u, 5u}) {
      if (decade * f <= steps) out.push_back(decade * f);
    }
    if (decade > steps / 10) break;
  }
  if (out.empty() || out.back() != steps) out.push_back(steps);
  return out;
}

void write_trace_csv(std::ostream& out, const Trace& trace, std::span<const Graph> graphs,
                     std::span<const std::string> names) {
  const bool product = !trace.components.empty();
  const std::size_t cols = product ? trace.components.size() : 1;
  if (graphs.size() != cols || names.size() != cols) {
    throw InvalidInput("trace CSV needs one graph and name per component");
  }
  out << "t";
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  for (std::size_t m = 0; m < trace.length(); ++m) {
    out << m;
    for (std::size_t h = 0; h < cols; ++h) {
      const auto node = product ? trace.components[h][m] : trace.states[m];
      out << ',' << graphs[h].label(node);
    }
    out << '\n';
  }
}

void write_empirical_csv(std::ostream& out, const Trace& trace, const Graph& g) {
  out << "state,count,frequency\n" << std::setprecision(17);
  const auto total = static_cast<double>(trace.length());
  for (std::size_t s = 0; s < trace.counts.size(); ++s) {
    out << g.label(static_cast<NodeId>(s)) << ',' << trace.counts[s] << ','
        << static_cast<double>(trace.counts[s]) / total << '\n';
  }
}

}  // namespace graphgame
