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

#ifndef GRAPHGAME_CHAIN_HPP
#define GRAPHGAME_CHAIN_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "graphgame/graph.hpp"
#include "graphgame/mixed.hpp"
#include "graphgame/schedule.hpp"

namespace graphgame {

// Answer classes for "can a chain consistent with G have empirical law mu?".
enum class CaseLabel {
  PointMass,           // mu is a Dirac: the constant chain works
  SupportInComponent,  // G[supp] disconnected, supp inside one component
  SupportSplit,        // supp spans several components: impossible
  SupportConnected,    // G[supp] connected: a homogeneous chain works
};

std::string_view to_string(CaseLabel c);

CaseLabel classify_case(const Graph& g, const Distribution& mu);

// mu_k = (1/k) uniform(A_k) + ((k-1)/k) mu over A_k = {s : mu(s) < 1/k}.
struct SmoothedTarget {
  Distribution base;
  double k = 1.0;
  Distribution smoothed;
  NodeSubset low_set;
};

// k >= 1 and integral. Throws EmptyLowSet when A_k is empty.
SmoothedTarget smooth(const Distribution& mu, double k);

// Smallest integer strictly greater than 1 / min positive mass.
std::uint64_t min_valid_k(const Distribution& mu);

// max(min_valid_k(mu), N - 1): from here on every smoothed mass is at least
// 1 / ((N-1) k) and the mass ordering of mu is preserved.
std::uint64_t smoothing_threshold(const Distribution& mu);

// Reversible kernel on a connected graph: states sorted by target mass
// (descending, ties by node id), p_{l,m} = p for l < m adjacent,
// (target_m / target_l) p for l > m adjacent, diagonal the remainder, with
// p the largest value keeping every diagonal >= 1/2.
class TransitionKernel {
 public:
  struct Move {
    std::uint32_t state;
    double cumulative;
  };

  TransitionKernel() = default;

  std::size_t size() const { return nodes_.size(); }
  // Node count of the graph the kernel was built on.
  std::size_t graph_size() const { return state_of_.size(); }
  // Rows/columns follow the sorted state order.
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  double p() const { return p_; }
  // Graph node of sorted state i.
  NodeId node(std::size_t i) const { return nodes_[i]; }
  const std::vector<NodeId>& nodes() const { return nodes_; }
  const std::vector<std::string>& labels() const { return labels_; }
  // Target masses in sorted state order.
  const std::vector<double>& target() const { return target_; }
  // Sorted index of a graph node, or -1 if the node is not a state.
  std::int64_t state_of(NodeId node) const;

  // Row of `state` as cumulative moves, self-move first.
  const std::vector<Move>& moves(std::size_t state) const { return moves_[state]; }
  std::uint32_t step(std::uint32_t state, double u) const {
    for (const auto& m : moves_[state]) {
      if (u < m.cumulative) return m.state;
    }
    return moves_[state].back().state;
  }

 private:
  friend TransitionKernel build_kernel_on(const Distribution&, const Graph&, const NodeSubset&);
  friend TransitionKernel constant_kernel(const Graph&, NodeId);

  Eigen::MatrixXd matrix_;
  double p_ = 0.0;
  std::vector<NodeId> nodes_;
  std::vector<std::string> labels_;
  std::vector<double> target_;
  std::vector<std::int64_t> state_of_;
  std::vector<std::vector<Move>> moves_;
};

// `target` is indexed by node of g and must be strictly positive; g must be
// connected. Throws NonPositiveTarget / NotConnected.
TransitionKernel build_kernel(const Distribution& target, const Graph& g);

// Kernel on G[subset] for the restriction of `target` (indexed by node of g,
// renormalized on the subset). States keep their node ids in g.
TransitionKernel build_kernel_on(const Distribution& target, const Graph& g,
                                 const NodeSubset& subset);

// Single absorbing state at `node`.
TransitionKernel constant_kernel(const Graph& g, NodeId node);

// 1 - min over row pairs of sum_h min(p_ih, p_jh). Throws InvalidInput for
// non-stochastic input.
double dobrushin(const Eigen::MatrixXd& p);

Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& p, std::uint64_t exponent);

// c_N = 1 / (2 (N-1)^2); the (N-1)-step coefficient of a smoothed kernel is
// bounded by 1 - (c_N / k)^(N-1). c_N^(N-1) is the per-block coupling rate.
double lemma_constant(std::size_t n);
double lemma_bound(std::size_t n, double k);
inline double lemma_bound(const TransitionKernel& kernel, double k) {
  return lemma_bound(kernel.size(), k);
}

// Largest |target_l p_lm - target_m p_ml|.
double detailed_balance_residual(const TransitionKernel& kernel);

// Left eigenvector for eigenvalue 1 by power iteration from the uniform law.
std::vector<double> stationary_distribution(const Eigen::MatrixXd& p, double tol = 1e-13,
                                            std::uint64_t max_iterations = 10000000);

// Piecewise-constant kernel family P(t) = P^(mu_k(t), G). The state space is
// the connected component holding supp mu. Built kernels are cached per
// smoothing level; the cache is internally synchronized.
class NonhomogeneousKernel {
 public:
  // Requires classify_case(g, mu) == SupportInComponent; throws SupportSplit
  // for split supports and InvalidInput for the other cases.
  NonhomogeneousKernel(Distribution mu, Graph g, Schedule schedule);

  const Schedule& schedule() const { return schedule_; }
  const Graph& graph() const { return graph_; }
  const Distribution& target() const { return mu_; }
  const NodeSubset& component() const { return component_; }

  std::shared_ptr<const TransitionKernel> for_interval(std::uint64_t l) const;
  std::shared_ptr<const TransitionKernel> at_time(std::uint64_t t) const {
    return for_interval(schedule_.interval_of(t));
  }

 private:
  Distribution mu_;
  Graph graph_;
  Schedule schedule_;
  NodeSubset component_;
  mutable std::mutex mutex_;
  mutable std::map<double, std::shared_ptr<const TransitionKernel>> cache_;
};

// One-off P(t) for the family above.
TransitionKernel nonhomogeneous_kernel(std::uint64_t t, const Schedule& schedule,
                                       const Distribution& mu, const Graph& g);

// Header row of state labels, then one row per state, 17 significant digits.
void write_kernel_csv(std::ostream& out, const TransitionKernel& kernel);

}  // namespace graphgame

#endif  // GRAPHGAME_CHAIN_HPP
