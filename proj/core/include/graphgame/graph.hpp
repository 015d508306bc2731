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

#ifndef GRAPHGAME_GRAPH_HPP
#define GRAPHGAME_GRAPH_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace graphgame {

using NodeId = std::uint32_t;

// Unordered edge stored with first < second.
using Edge = std::pair<NodeId, NodeId>;

// Separator used for tuple-valued node labels, e.g. "H|T".
inline constexpr char kTupleSeparator = '|';

std::string join_tuple(std::span<const std::string> coords);
std::vector<std::string> split_tuple(std::string_view label);

// Finite simple undirected graph over labelled nodes. Node ids are the
// positions in the label table; all orderings downstream follow that table.
// Self-adjacency is a property of `adjacent`, never a stored edge.
//
// Immutable after construction.
class Graph {
 public:
  Graph() = default;

  // Throws InvalidInput on duplicate labels, out-of-range endpoints,
  // self-loops or duplicate edges.
  Graph(std::vector<std::string> labels, std::vector<Edge> edges);

  static Graph from_labels(
      std::vector<std::string> labels,
      const std::vector<std::pair<std::string, std::string>>& edges);

  static Graph complete(std::vector<std::string> labels);
  static Graph isolated(std::vector<std::string> labels);
  static Graph path(std::vector<std::string> labels);
  static Graph cycle(std::vector<std::string> labels);
  // First label is the hub.
  static Graph star(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }

  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(NodeId u) const { return labels_.at(u); }

  // Throws UnknownNode.
  NodeId id(std::string_view label) const;
  std::optional<NodeId> find(std::string_view label) const;

  // {u,v} is an edge or u == v.
  bool adjacent(NodeId u, NodeId v) const {
    return u == v || matrix_[static_cast<std::size_t>(u) * size() + v] != 0;
  }
  bool has_edge(NodeId u, NodeId v) const {
    return u != v && matrix_[static_cast<std::size_t>(u) * size() + v] != 0;
  }

  // Strict neighbours in increasing id order.
  std::span<const NodeId> neighbors(NodeId u) const { return adjacency_.at(u); }
  std::size_t degree(NodeId u) const { return adjacency_.at(u).size(); }

  const std::vector<Edge>& edges() const { return edges_; }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.labels_ == b.labels_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<Edge> edges_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<std::uint8_t> matrix_;
};

// Sorted set of node ids of some graph.
struct NodeSubset {
  std::vector<NodeId> members;

  NodeSubset() = default;
  explicit NodeSubset(std::vector<NodeId> ids);

  bool contains(NodeId u) const;
  std::size_t size() const { return members.size(); }
  bool empty() const { return members.empty(); }

  friend bool operator==(const NodeSubset&, const NodeSubset&) = default;
};

// Label-level adjacency. Throws UnknownNode.
bool are_adjacent(const Graph& g, std::string_view u, std::string_view v);

// Maximal connected sets, ordered by smallest member.
std::vector<NodeSubset> connected_components(const Graph& g);
bool is_connected(const Graph& g);

// Nodes of `s` in the order of `g`; edges are those of g with both ends in s.
Graph induced_subgraph(const Graph& g, const NodeSubset& s);

// Strong product. Joint nodes are enumerated row-major (first factor most
// significant) and labelled by joining factor labels with '|'.
Graph strong_product(std::span<const Graph> factors);

// Row-major mixed-radix indexing over per-axis sizes.
class TupleIndexer {
 public:
  TupleIndexer() = default;
  explicit TupleIndexer(std::vector<std::size_t> radices);

  std::size_t size() const { return total_; }
  std::size_t axes() const { return radices_.size(); }
  const std::vector<std::size_t>& radices() const { return radices_; }
  std::size_t stride(std::size_t axis) const { return strides_[axis]; }

  std::size_t flatten(std::span<const std::size_t> coords) const;
  std::vector<std::size_t> unflatten(std::size_t flat) const;
  std::size_t coordinate(std::size_t flat, std::size_t axis) const {
    return (flat / strides_[axis]) % radices_[axis];
  }

 private:
  std::vector<std::size_t> radices_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 0;
};

// Factor graphs of a strong-product decomposition plus the joint-node to
// factor-tuple bijection.
struct Decomposition {
  std::vector<Graph> factors;
  // axis_map[joint] = per-factor node ids.
  std::vector<std::vector<NodeId>> axis_map;

  // Inverse of axis_map, indexed row-major over the factor sizes.
  std::vector<NodeId> joint_by_tuple;

  std::size_t joint_size() const { return axis_map.size(); }
  TupleIndexer indexer() const;
  // Throws InvalidInput for malformed tuples.
  NodeId joint_of(std::span<const NodeId> coords) const;
};

// Recovers factor graphs over `axes` (per-coalition node label lists) such
// that g equals their strong product, or nullopt when no such factors exist.
// Joint labels must be '|'-joined tuples covering the full Cartesian product
// of the axes; anything else throws InvalidInput.
std::optional<Decomposition> factorize(
    const Graph& g, const std::vector<std::vector<std::string>>& axes);

}  // namespace graphgame

#endif  // GRAPHGAME_GRAPH_HPP
