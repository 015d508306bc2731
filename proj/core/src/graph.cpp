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

#include "graphgame/graph.hpp"

#include <algorithm>
#include <numeric>

#include "graphgame/errors.hpp"

namespace graphgame {

std::string join_tuple(std::span<const std::string> coords) {
  std::string out;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (i != 0) out.push_back(kTupleSeparator);
    out += coords[i];
  }
  return out;
}

std::vector<std::string> split_tuple(std::string_view label) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = label.find(kTupleSeparator, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(label.substr(start));
      return out;
    }
    out.emplace_back(label.substr(start, pos - start));
    start = pos + 1;
  }
}

Graph::Graph(std::vector<std::string> labels, std::vector<Edge> edges)
    : labels_(std::move(labels)) {
  const std::size_t n = labels_.size();
  index_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!index_.emplace(labels_[i], static_cast<NodeId>(i)).second) {
      throw InvalidInput("duplicate node '" + labels_[i] + "'");
    }
  }
  matrix_.assign(n * n, 0);
  adjacency_.resize(n);
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw InvalidInput("edge endpoint out of range");
    if (u == v) throw InvalidInput("self-loop on '" + labels_[u] + "'");
    if (u > v) std::swap(u, v);
    auto& cell = matrix_[static_cast<std::size_t>(u) * n + v];
    if (cell != 0) {
      throw InvalidInput("duplicate edge {" + labels_[u] + "," + labels_[v] + "}");
    }
    cell = 1;
    matrix_[static_cast<std::size_t>(v) * n + u] = 1;
    edges_.emplace_back(u, v);
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
  }
  std::sort(edges_.begin(), edges_.end());
  for (auto& row : adjacency_) std::sort(row.begin(), row.end());
}

Graph Graph::from_labels(
    std::vector<std::string> labels,
    const std::vector<std::pair<std::string, std::string>>& edges) {
  std::unordered_map<std::string, NodeId> idx;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    idx.emplace(labels[i], static_cast<NodeId>(i));
  }
  auto lookup = [&](const std::string& l) {
    auto it = idx.find(l);
    if (it == idx.end()) throw UnknownNode(l);
    return it->second;
  };
  std::vector<Edge> ids;
  ids.reserve(edges.size());
  for (const auto& [a, b] : edges) ids.emplace_back(lookup(a), lookup(b));
  return Graph(std::move(labels), std::move(ids));
}

Graph Graph::complete(std::vector<std::string> labels) {
  std::vector<Edge> e;
  const auto n = static_cast<NodeId>(labels.size());
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) e.emplace_back(u, v);
  return Graph(std::move(labels), std::move(e));
}

Graph Graph::isolated(std::vector<std::string> labels) {
  return Graph(std::move(labels), {});
}

Graph Graph::path(std::vector<std::string> labels) {
  std::vector<Edge> e;
  for (NodeId u = 1; u < labels.size(); ++u) e.emplace_back(u - 1, u);
  return Graph(std::move(labels), std::move(e));
}

Graph Graph::cycle(std::vector<std::string> labels) {
  if (labels.size() < 3) return path(std::move(labels));
  std::vector<Edge> e;
  const auto n = static_cast<NodeId>(labels.size());
  for (NodeId u = 1; u < n; ++u) e.emplace_back(u - 1, u);
  e.emplace_back(0, n - 1);
  return Graph(std::move(labels), std::move(e));
}

Graph Graph::star(std::vector<std::string> labels) {
  std::vector<Edge> e;
  for (NodeId u = 1; u < labels.size(); ++u) e.emplace_back(0, u);
  return Graph(std::move(labels), std::move(e));
}

NodeId Graph::id(std::string_view label) const {
  if (auto found = find(label)) return *found;
  throw UnknownNode(std::string(label));
}

std::optional<NodeId> Graph::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NodeSubset::NodeSubset(std::vector<NodeId> ids) : members(std::move(ids)) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
}

bool NodeSubset::contains(NodeId u) const {
  return std::binary_search(members.begin(), members.end(), u);
}

bool are_adjacent(const Graph& g, std::string_view u, std::string_view v) {
  return g.adjacent(g.id(u), g.id(v));
}

std::vector<NodeSubset> connected_components(const Graph& g) {
  const std::size_t n = g.size();
  std::vector<bool> seen(n, false);
  std::vector<NodeSubset> out;
  std::vector<NodeId> stack;
  for (NodeId root = 0; root < n; ++root) {
    if (seen[root]) continue;
    std::vector<NodeId> comp;
    stack.push_back(root);
    seen[root] = true;
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      comp.push_back(u);
      for (NodeId v : g.neighbors(u)) {
        if (!seen[v]) {
          seen[v] = true;
          stack.push_back(v);
        }
      }
    }
    out.emplace_back(std::move(comp));
  }
  return out;
}

bool is_connected(const Graph& g) {
  return g.size() <= 1 || connected_components(g).size() == 1;
}

Graph induced_subgraph(const Graph& g, const NodeSubset& s) {
  std::vector<std::string> labels;
  std::vector<NodeId> local(g.size(), static_cast<NodeId>(-1));
  for (NodeId u : s.members) {
    if (u >= g.size()) throw InvalidInput("subset member out of range");
    local[u] = static_cast<NodeId>(labels.size());
    labels.push_back(g.label(u));
  }
  std::vector<Edge> edges;
  for (auto [u, v] : g.edges()) {
    if (s.contains(u) && s.contains(v)) edges.emplace_back(local[u], local[v]);
  }
  return Graph(std::move(labels), std::move(edges));
}

TupleIndexer::TupleIndexer(std::vector<std::size_t> radices)
    : radices_(std::move(radices)), strides_(radices_.size(), 1), total_(1) {
  for (std::size_t a = radices_.size(); a-- > 0;) {
    strides_[a] = total_;
    total_ *= radices_[a];
  }
}

std::size_t TupleIndexer::flatten(std::span<const std::size_t> coords) const {
  if (coords.size() != radices_.size()) {
    throw InvalidInput("tuple arity does not match indexer");
  }
  std::size_t flat = 0;
  for (std::size_t a = 0; a < coords.size(); ++a) {
    if (coords[a] >= radices_[a]) throw InvalidInput("tuple coordinate out of range");
    flat += coords[a] * strides_[a];
  }
  return flat;
}

std::vector<std::size_t> TupleIndexer::unflatten(std::size_t flat) const {
  std::vector<std::size_t> coords(radices_.size());
  for (std::size_t a = 0; a < radices_.size(); ++a) coords[a] = coordinate(flat, a);
  return coords;
}

Graph strong_product(std::span<const Graph> factors) {
  if (factors.empty()) throw InvalidInput("strong product needs at least one factor");
  std::vector<std::size_t> sizes;
  for (const auto& f : factors) {
    if (f.empty()) throw InvalidInput("strong product factor is empty");
    sizes.push_back(f.size());
  }
  const TupleIndexer ix(sizes);
  const std::size_t n = ix.size();

  std::vector<std::string> labels;
  labels.reserve(n);
  std::vector<std::string> coords(factors.size());
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t a = 0; a < factors.size(); ++a) {
      coords[a] = factors[a].label(static_cast<NodeId>(ix.coordinate(j, a)));
    }
    labels.push_back(join_tuple(coords));
  }

  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      bool ok = true;
      for (std::size_t a = 0; a < factors.size() && ok; ++a) {
        ok = factors[a].adjacent(static_cast<NodeId>(ix.coordinate(u, a)),
                                 static_cast<NodeId>(ix.coordinate(v, a)));
      }
      if (ok) edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    }
  }
  return Graph(std::move(labels), std::move(edges));
}

TupleIndexer Decomposition::indexer() const {
  std::vector<std::size_t> sizes;
  for (const auto& f : factors) sizes.push_back(f.size());
  return TupleIndexer(std::move(sizes));
}

NodeId Decomposition::joint_of(std::span<const NodeId> coords) const {
  std::vector<std::size_t> c(coords.begin(), coords.end());
  return joint_by_tuple.at(indexer().flatten(c));
}

std::optional<Decomposition> factorize(
    const Graph& g, const std::vector<std::vector<std::string>>& axes) {
  if (axes.empty()) throw InvalidInput("factorize needs at least one axis");
  std::vector<std::size_t> sizes;
  std::vector<std::unordered_map<std::string, NodeId>> axis_index(axes.size());
  for (std::size_t a = 0; a < axes.size(); ++a) {
    if (axes[a].empty()) throw InvalidInput("empty axis");
    for (std::size_t i = 0; i < axes[a].size(); ++i) {
      if (!axis_index[a].emplace(axes[a][i], static_cast<NodeId>(i)).second) {
        throw InvalidInput("duplicate axis value '" + axes[a][i] + "'");
      }
    }
    sizes.push_back(axes[a].size());
  }
  const TupleIndexer ix(sizes);
  if (g.size() != ix.size()) {
    throw InvalidInput("graph node count " + std::to_string(g.size()) +
                       " is not the product of the axis sizes " +
                       std::to_string(ix.size()));
  }

  Decomposition d;
  d.axis_map.resize(g.size());
  constexpr auto kUnset = static_cast<NodeId>(-1);
  d.joint_by_tuple.assign(ix.size(), kUnset);
  for (NodeId u = 0; u < g.size(); ++u) {
    const auto parts = split_tuple(g.label(u));
    if (parts.size() != axes.size()) {
      throw InvalidInput("node '" + g.label(u) + "' is not a " +
                         std::to_string(axes.size()) + "-tuple");
    }
    std::vector<std::size_t> coords(axes.size());
    for (std::size_t a = 0; a < axes.size(); ++a) {
      auto it = axis_index[a].find(parts[a]);
      if (it == axis_index[a].end()) {
        throw InvalidInput("node '" + g.label(u) + "' has unknown coordinate '" +
                           parts[a] + "'");
      }
      coords[a] = it->second;
      d.axis_map[u].push_back(it->second);
    }
    auto& slot = d.joint_by_tuple[ix.flatten(coords)];
    if (slot != kUnset) throw InvalidInput("repeated tuple '" + g.label(u) + "'");
    slot = u;
  }

  // Candidate factor h: {x,y} is an edge iff every joint pair that differs
  // only on axis h, by x <-> y, is adjacent in g.
  for (std::size_t h = 0; h < axes.size(); ++h) {
    const std::size_t stride = ix.stride(h);
    std::vector<Edge> edges;
    for (NodeId x = 0; x < sizes[h]; ++x) {
      for (NodeId y = x + 1; y < sizes[h]; ++y) {
        bool all = true;
        for (std::size_t flat = 0; flat < ix.size() && all; ++flat) {
          if (ix.coordinate(flat, h) != x) continue;
          const std::size_t other = flat + (y - x) * stride;
          all = g.has_edge(d.joint_by_tuple[flat], d.joint_by_tuple[other]);
        }
        if (all) edges.emplace_back(x, y);
      }
    }
    d.factors.emplace_back(axes[h], std::move(edges));
  }

  // Verify g is exactly the strong product of the candidates.
  for (NodeId u = 0; u < g.size(); ++u) {
    for (NodeId v = u + 1; v < g.size(); ++v) {
      bool product_adjacent = true;
      for (std::size_t h = 0; h < axes.size() && product_adjacent; ++h) {
        product_adjacent = d.factors[h].adjacent(d.axis_map[u][h], d.axis_map[v][h]);
      }
      if (product_adjacent != g.has_edge(u, v)) return std::nullopt;
    }
  }
  return d;
}

}  // namespace graphgame
