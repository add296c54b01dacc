#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "netreal/errors.hpp"

namespace netreal {

using Index = std::ptrdiff_t;

/// Ordered pair (receiver, sender). Edge (i, j) lets node i read node j.
struct Edge {
  Index to = 0;
  Index from = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Directed communication graph over nodes 0..N-1.
///
/// An edge (i, j) permits the blocks A_ij and C_ij of a compatible
/// realization to be nonzero, i.e. information flows from node j to node i.
/// Self-loops are never implied: a node with internal dynamics must declare
/// (i, i) explicitly. Instances are immutable once built.
class NetworkGraph {
 public:
  NetworkGraph() = default;

  NetworkGraph(Index num_nodes, std::vector<Edge> edges) : num_nodes_(num_nodes) {
    if (num_nodes <= 0) {
      throw InputError("graph: num_nodes must be positive, got " + std::to_string(num_nodes));
    }
    for (const auto& e : edges) {
      if (e.to < 0 || e.to >= num_nodes || e.from < 0 || e.from >= num_nodes) {
        throw InputError("graph: edge (" + std::to_string(e.to) + "," + std::to_string(e.from) +
                         ") out of range for " + std::to_string(num_nodes) + " nodes");
      }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);
    adjacency_.assign(static_cast<std::size_t>(num_nodes * num_nodes), false);
    for (const auto& e : edges_) adjacency_[slot(e.to, e.from)] = true;
  }

  [[nodiscard]] Index num_nodes() const { return num_nodes_; }
  [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }

  [[nodiscard]] bool has_edge(Index i, Index j) const {
    if (i < 0 || i >= num_nodes_ || j < 0 || j >= num_nodes_) {
      throw InputError("graph: has_edge index out of range");
    }
    return adjacency_[slot(i, j)];
  }

  /// Senders j with (i, j) in E, ascending, including i itself when declared.
  [[nodiscard]] std::vector<Index> in_neighbors(Index i) const {
    std::vector<Index> out;
    for (Index j = 0; j < num_nodes_; ++j) {
      if (has_edge(i, j)) out.push_back(j);
    }
    return out;
  }

  [[nodiscard]] std::size_t num_non_self_edges() const {
    return static_cast<std::size_t>(
        std::count_if(edges_.begin(), edges_.end(), [](const Edge& e) { return e.to != e.from; }));
  }

  friend bool operator==(const NetworkGraph& a, const NetworkGraph& b) {
    return a.num_nodes_ == b.num_nodes_ && a.edges_ == b.edges_;
  }

 private:
  [[nodiscard]] std::size_t slot(Index i, Index j) const {
    return static_cast<std::size_t>(i * num_nodes_ + j);
  }

  Index num_nodes_ = 0;
  std::vector<Edge> edges_;
  std::vector<bool> adjacency_;
};

/// Validates and deduplicates an edge list given as (receiver, sender) pairs.
inline NetworkGraph build_graph(Index num_nodes, const std::vector<std::pair<Index, Index>>& edges) {
  std::vector<Edge> list;
  list.reserve(edges.size());
  for (const auto& [i, j] : edges) list.push_back({i, j});
  return NetworkGraph(num_nodes, std::move(list));
}

inline NetworkGraph transpose(const NetworkGraph& g) {
  std::vector<Edge> flipped;
  flipped.reserve(g.edges().size());
  for (const auto& e : g.edges()) flipped.push_back({e.from, e.to});
  return NetworkGraph(g.num_nodes(), std::move(flipped));
}

/// Every ordered pair, self-loops included.
inline NetworkGraph complete_graph(Index num_nodes) {
  std::vector<Edge> all;
  for (Index i = 0; i < num_nodes; ++i) {
    for (Index j = 0; j < num_nodes; ++j) all.push_back({i, j});
  }
  return NetworkGraph(num_nodes, std::move(all));
}

/// Per-node state, input and output counts.
struct NodeDim {
  Index n = 0;
  Index m = 0;
  Index p = 0;

  friend bool operator==(const NodeDim&, const NodeDim&) = default;
};

/// Partition of the global state, input and output vectors into node-major
/// segments. Offsets are precomputed so block lookups are O(1).
class NodeDims {
 public:
  NodeDims() = default;

  explicit NodeDims(std::vector<NodeDim> nodes) : nodes_(std::move(nodes)) {
    for (const auto& d : nodes_) {
      if (d.n < 0 || d.m < 0 || d.p < 0) throw InputError("dims: negative dimension");
    }
    state_off_ = prefix([](const NodeDim& d) { return d.n; });
    input_off_ = prefix([](const NodeDim& d) { return d.m; });
    output_off_ = prefix([](const NodeDim& d) { return d.p; });
  }

  /// Builds dims from three parallel per-node count lists.
  static NodeDims from_counts(const std::vector<Index>& n, const std::vector<Index>& m,
                              const std::vector<Index>& p) {
    if (n.size() != m.size() || n.size() != p.size()) {
      throw InputError("dims: count lists differ in length");
    }
    std::vector<NodeDim> nodes(n.size());
    for (std::size_t k = 0; k < n.size(); ++k) nodes[k] = {n[k], m[k], p[k]};
    return NodeDims(std::move(nodes));
  }

  [[nodiscard]] Index size() const { return static_cast<Index>(nodes_.size()); }
  [[nodiscard]] const NodeDim& operator[](Index k) const { return nodes_[static_cast<std::size_t>(k)]; }
  [[nodiscard]] const std::vector<NodeDim>& nodes() const { return nodes_; }

  [[nodiscard]] Index n() const { return state_off_.back(); }
  [[nodiscard]] Index m() const { return input_off_.back(); }
  [[nodiscard]] Index p() const { return output_off_.back(); }

  [[nodiscard]] Index state_offset(Index k) const { return state_off_[static_cast<std::size_t>(k)]; }
  [[nodiscard]] Index input_offset(Index k) const { return input_off_[static_cast<std::size_t>(k)]; }
  [[nodiscard]] Index output_offset(Index k) const { return output_off_[static_cast<std::size_t>(k)]; }

  [[nodiscard]] std::vector<Index> states() const { return column([](const NodeDim& d) { return d.n; }); }
  [[nodiscard]] std::vector<Index> inputs() const { return column([](const NodeDim& d) { return d.m; }); }
  [[nodiscard]] std::vector<Index> outputs() const { return column([](const NodeDim& d) { return d.p; }); }

  friend bool operator==(const NodeDims& a, const NodeDims& b) { return a.nodes_ == b.nodes_; }

 private:
  template <typename Field>
  std::vector<Index> prefix(Field field) const {
    std::vector<Index> off(nodes_.size() + 1, 0);
    for (std::size_t k = 0; k < nodes_.size(); ++k) off[k + 1] = off[k] + field(nodes_[k]);
    return off;
  }

  template <typename Field>
  std::vector<Index> column(Field field) const {
    std::vector<Index> out;
    out.reserve(nodes_.size());
    for (const auto& d : nodes_) out.push_back(field(d));
    return out;
  }

  std::vector<NodeDim> nodes_;
  std::vector<Index> state_off_{0};
  std::vector<Index> input_off_{0};
  std::vector<Index> output_off_{0};
};

}  // namespace netreal
