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

#include "graphgame/chain.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>

#include "graphgame/errors.hpp"

namespace graphgame {

std::string_view to_string(CaseLabel c) {
  switch (c) {
    case CaseLabel::PointMass: return "PointMass";
    case CaseLabel::SupportInComponent: return "SupportInComponent";
    case CaseLabel::SupportSplit: return "SupportSplit";
    case CaseLabel::SupportConnected: return "SupportConnected";
  }
  return "?";
}

namespace {

void check_over(const Graph& g, const Distribution& mu) {
  if (mu.size() != g.size()) {
    throw InvalidInput("distribution has " + std::to_string(mu.size()) +
                       " entries but the graph has " + std::to_string(g.size()) + " nodes");
  }
}

NodeSubset support_of(const Distribution& mu) {
  std::vector<NodeId> ids;
  for (std::size_t i : mu.support()) ids.push_back(static_cast<NodeId>(i));
  return NodeSubset(std::move(ids));
}

}  // namespace

CaseLabel classify_case(const Graph& g, const Distribution& mu) {
  check_over(g, mu);
  const auto supp = support_of(mu);
  if (supp.size() == 1) return CaseLabel::PointMass;
  if (is_connected(induced_subgraph(g, supp))) return CaseLabel::SupportConnected;
  for (const auto& comp : connected_components(g)) {
    if (comp.contains(supp.members.front())) {
      const bool inside = std::all_of(supp.members.begin(), supp.members.end(),
                                      [&](NodeId u) { return comp.contains(u); });
      return inside ? CaseLabel::SupportInComponent : CaseLabel::SupportSplit;
    }
  }
  return CaseLabel::SupportSplit;
}

SmoothedTarget smooth(const Distribution& mu, double k) {
  if (!(k >= 1.0) || std::floor(k) != k || !std::isfinite(k)) {
    throw InvalidInput("smoothing level k must be a positive integer");
  }
  const double inv = 1.0 / k;
  std::vector<NodeId> low;
  for (std::size_t s = 0; s < mu.size(); ++s) {
    if (mu[s] < inv) low.push_back(static_cast<NodeId>(s));
  }
  if (low.empty()) {
    throw EmptyLowSet("no state has mass below 1/k for k = " + std::to_string(k));
  }
  const double eta = 1.0 / static_cast<double>(low.size());
  std::vector<double> m(mu.size());
  for (std::size_t s = 0; s < mu.size(); ++s) m[s] = (k - 1.0) / k * mu[s];
  for (NodeId s : low) m[s] += eta / k;
  return SmoothedTarget{mu, k, Distribution::normalized(std::move(m)), NodeSubset(std::move(low))};
}

std::uint64_t min_valid_k(const Distribution& mu) {
  double smallest = 2.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] > 0.0) smallest = std::min(smallest, mu[i]);
  }
  if (smallest > 1.0) throw InvalidInput("distribution has no positive mass");
  return static_cast<std::uint64_t>(std::floor(1.0 / smallest)) + 1;
}

std::uint64_t smoothing_threshold(const Distribution& mu) {
  const std::uint64_t n = mu.size();
  return std::max<std::uint64_t>(min_valid_k(mu), n > 1 ? n - 1 : 1);
}

std::int64_t TransitionKernel::state_of(NodeId node) const {
  return node < state_of_.size() ? state_of_[node] : -1;
}

TransitionKernel build_kernel_on(const Distribution& target, const Graph& g,
                                 const NodeSubset& subset) {
  check_over(g, target);
  if (subset.empty()) throw InvalidInput("kernel state space is empty");
  double mass = 0.0;
  for (NodeId u : subset.members) {
    if (u >= g.size()) throw InvalidInput("kernel state out of range");
    if (!(target[u] > 0.0)) {
      throw NonPositiveTarget("target mass of '" + g.label(u) + "' is not positive");
    }
    mass += target[u];
  }
  if (!is_connected(induced_subgraph(g, subset))) {
    throw NotConnected("kernel graph is not connected");
  }

  TransitionKernel k;
  k.nodes_ = subset.members;
  std::stable_sort(k.nodes_.begin(), k.nodes_.end(),
                   [&](NodeId a, NodeId b) { return target[a] > target[b]; });
  const std::size_t n = k.nodes_.size();
  k.state_of_.assign(g.size(), -1);
  for (std::size_t i = 0; i < n; ++i) {
    k.state_of_[k.nodes_[i]] = static_cast<std::int64_t>(i);
    k.labels_.push_back(g.label(k.nodes_[i]));
    k.target_.push_back(target[k.nodes_[i]] / mass);
  }
  const auto& t = k.target_;

  // Off-diagonal row weights in units of p.
  std::vector<double> weight(n, 0.0);
  for (std::size_t l = 0; l < n; ++l) {
    for (NodeId v : g.neighbors(k.nodes_[l])) {
      const auto m = k.state_of_[v];
      if (m < 0) continue;
      weight[l] += static_cast<std::size_t>(m) > l ? 1.0 : t[m] / t[l];
    }
  }
  k.p_ = 0.5;
  for (std::size_t l = 0; l < n; ++l) {
    if (weight[l] > 0.0) k.p_ = std::min(k.p_, 1.0 / (2.0 * weight[l]));
  }

  k.matrix_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  k.moves_.resize(n);
  for (std::size_t l = 0; l < n; ++l) {
    double off = 0.0;
    std::vector<TransitionKernel::Move> row;
    for (NodeId v : g.neighbors(k.nodes_[l])) {
      const auto m = k.state_of_[v];
      if (m < 0) continue;
      const auto mu = static_cast<std::size_t>(m);
      const double pr = mu > l ? k.p_ : t[mu] / t[l] * k.p_;
      k.matrix_(l, mu) = pr;
      off += pr;
      row.push_back({static_cast<std::uint32_t>(mu), pr});
    }
    k.matrix_(l, l) = 1.0 - off;
    auto& moves = k.moves_[l];
    double cum = 1.0 - off;
    moves.push_back({static_cast<std::uint32_t>(l), cum});
    for (auto mv : row) {
      cum += mv.cumulative;
      moves.push_back({mv.state, cum});
    }
    moves.back().cumulative = 1.0;
  }
  return k;
}

TransitionKernel build_kernel(const Distribution& target, const Graph& g) {
  check_over(g, target);
  std::vector<NodeId> all(g.size());
  std::iota(all.begin(), all.end(), NodeId{0});
  return build_kernel_on(target, g, NodeSubset(std::move(all)));
}

TransitionKernel constant_kernel(const Graph& g, NodeId node) {
  return build_kernel_on(Distribution::dirac(g.size(), node), g, NodeSubset({node}));
}

double dobrushin(const Eigen::MatrixXd& p) {
  if (p.rows() != p.cols() || p.rows() == 0) throw InvalidInput("dobrushin: matrix is not square");
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    if ((p.row(i).array() < -1e-12).any() || std::abs(p.row(i).sum() - 1.0) > 1e-9) {
      throw InvalidInput("dobrushin: matrix is not row-stochastic");
    }
  }
  double best = 1.0;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < p.rows(); ++j) {
      best = std::min(best, p.row(i).cwiseMin(p.row(j)).sum());
    }
  }
  return 1.0 - best;
}

Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& p, std::uint64_t exponent) {
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(p.rows(), p.cols());
  Eigen::MatrixXd base = p;
  while (exponent != 0) {
    if (exponent & 1u) result = result * base;
    exponent >>= 1;
    if (exponent != 0) base = base * base;
  }
  return result;
}

double lemma_constant(std::size_t n) {
  if (n < 2) throw InvalidInput("lemma constant needs N >= 2");
  const double d = static_cast<double>(n - 1);
  return 1.0 / (2.0 * d * d);
}

double lemma_bound(std::size_t n, double k) {
  return 1.0 - std::pow(lemma_constant(n) / k, static_cast<double>(n - 1));
}

double detailed_balance_residual(const TransitionKernel& kernel) {
  const auto& p = kernel.matrix();
  const auto& t = kernel.target();
  double worst = 0.0;
  for (Eigen::Index l = 0; l < p.rows(); ++l) {
    for (Eigen::Index m = l + 1; m < p.cols(); ++m) {
      worst = std::max(worst, std::abs(t[l] * p(l, m) - t[m] * p(m, l)));
    }
  }
  return worst;
}

std::vector<double> stationary_distribution(const Eigen::MatrixXd& p, double tol,
                                            std::uint64_t max_iterations) {
  const auto n = p.rows();
  Eigen::RowVectorXd x = Eigen::RowVectorXd::Constant(n, 1.0 / static_cast<double>(n));
  for (std::uint64_t it = 0; it < max_iterations; ++it) {
    Eigen::RowVectorXd next = x * p;
    next /= next.sum();
    const double delta = (next - x).cwiseAbs().maxCoeff();
    x = std::move(next);
    if (delta < tol) break;
  }
  return {x.data(), x.data() + n};
}

NonhomogeneousKernel::NonhomogeneousKernel(Distribution mu, Graph g, Schedule schedule)
    : mu_(std::move(mu)), graph_(std::move(g)), schedule_(std::move(schedule)) {
  const auto label = classify_case(graph_, mu_);
  if (label == CaseLabel::SupportSplit) {
    throw SupportSplit("target support spans several connected components");
  }
  if (label != CaseLabel::SupportInComponent) {
    throw InvalidInput("nonhomogeneous construction applies to SupportInComponent targets, not " +
                       std::string(to_string(label)));
  }
  const auto first = static_cast<NodeId>(mu_.support().front());
  for (auto& comp : connected_components(graph_)) {
    if (comp.contains(first)) component_ = std::move(comp);
  }
}

std::shared_ptr<const TransitionKernel> NonhomogeneousKernel::for_interval(std::uint64_t l) const {
  const double k = schedule_.smoothing_level(l);
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(k); it != cache_.end()) return it->second;
  }
  // Smooth within the component (mu vanishes outside it).
  std::vector<double> local;
  for (NodeId u : component_.members) local.push_back(mu_[u]);
  const auto smoothed = smooth(Distribution::normalized(local), k).smoothed;
  std::vector<double> full(graph_.size(), 0.0);
  for (std::size_t i = 0; i < component_.size(); ++i) full[component_.members[i]] = smoothed[i];
  auto built = std::make_shared<const TransitionKernel>(
      build_kernel_on(Distribution::normalized(full), graph_, component_));
  std::lock_guard lock(mutex_);
  return cache_.emplace(k, std::move(built)).first->second;
}

TransitionKernel nonhomogeneous_kernel(std::uint64_t t, const Schedule& schedule,
                                       const Distribution& mu, const Graph& g) {
  NonhomogeneousKernel family(mu, g, schedule);
  return *family.at_time(t);
}

void write_kernel_csv(std::ostream& out, const TransitionKernel& kernel) {
  const auto& labels = kernel.labels();
  for (std::size_t i = 0; i < labels.size(); ++i) out << (i ? "," : "") << labels[i];
  out << '\n' << std::setprecision(17);
  const auto& p = kernel.matrix();
  for (Eigen::Index l = 0; l < p.rows(); ++l) {
    for (Eigen::Index m = 0; m < p.cols(); ++m) out << (m ? "," : "") << p(l, m);
    out << '\n';
  }
}

}  // namespace graphgame
