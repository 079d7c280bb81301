#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sngen {

using NodeId = std::uint32_t;

/// Per-node degree split. A reciprocal neighbour is counted once, in
/// `reciprocal`; the other two count strictly one-directional edges.
struct DegreeTriple {
  std::size_t reciprocal = 0;
  std::size_t in_only = 0;
  std::size_t out_only = 0;

  std::size_t total() const noexcept { return reciprocal + in_only + out_only; }
  friend bool operator==(const DegreeTriple&, const DegreeTriple&) = default;
};

/// Simple directed graph over nodes 0..n-1.
///
/// Outgoing and incoming adjacency are both kept as ID-sorted vectors, so
/// membership is a binary search and iteration is in ascending ID order.
/// A reciprocal edge is stored as its two directed entries.
class DirectedGraph {
 public:
  DirectedGraph() = default;
  explicit DirectedGraph(std::size_t n) : out_(n), in_(n) {}

  std::size_t node_count() const noexcept { return out_.size(); }
  /// Directed entries; a reciprocal pair counts as 2.
  std::size_t edge_count() const noexcept { return edge_count_; }

  void add_directed_edge(NodeId from, NodeId to) {
    check_node(from);
    check_node(to);
    if (from == to) throw std::invalid_argument("self-loop at node " + std::to_string(from));
    auto& out = out_[from];
    auto pos = std::lower_bound(out.begin(), out.end(), to);
    if (pos != out.end() && *pos == to) {
      throw std::invalid_argument("parallel edge " + std::to_string(from) + "->" + std::to_string(to));
    }
    out.insert(pos, to);
    auto& in = in_[to];
    in.insert(std::lower_bound(in.begin(), in.end(), from), from);
    ++edge_count_;
  }

  void add_reciprocal_edge(NodeId a, NodeId b) {
    check_node(a);
    check_node(b);
    if (a == b) throw std::invalid_argument("self-loop at node " + std::to_string(a));
    if (connected(a, b)) {
      throw std::invalid_argument("parallel edge " + std::to_string(a) + "-" + std::to_string(b));
    }
    add_directed_edge(a, b);
    add_directed_edge(b, a);
  }

  void remove_directed_edge(NodeId from, NodeId to) {
    check_node(from);
    check_node(to);
    auto& out = out_[from];
    auto pos = std::lower_bound(out.begin(), out.end(), to);
    if (pos == out.end() || *pos != to) {
      throw std::invalid_argument("missing edge " + std::to_string(from) + "->" + std::to_string(to));
    }
    out.erase(pos);
    auto& in = in_[to];
    in.erase(std::lower_bound(in.begin(), in.end(), from));
    --edge_count_;
  }

  bool has_directed_edge(NodeId from, NodeId to) const {
    check_node(from);
    check_node(to);
    return std::binary_search(out_[from].begin(), out_[from].end(), to);
  }

  /// True when an edge exists in either direction.
  bool connected(NodeId a, NodeId b) const { return has_directed_edge(a, b) || has_directed_edge(b, a); }

  std::span<const NodeId> out_neighbors(NodeId v) const {
    check_node(v);
    return out_[v];
  }
  std::span<const NodeId> in_neighbors(NodeId v) const {
    check_node(v);
    return in_[v];
  }

  DegreeTriple degree_triple(NodeId v) const {
    check_node(v);
    const auto& out = out_[v];
    const auto& in = in_[v];
    std::size_t common = 0;
    for (auto o = out.begin(), i = in.begin(); o != out.end() && i != in.end();) {
      if (*o < *i) {
        ++o;
      } else if (*i < *o) {
        ++i;
      } else {
        ++common, ++o, ++i;
      }
    }
    return {common, in.size() - common, out.size() - common};
  }

  std::size_t total_degree(NodeId v) const { return degree_triple(v).total(); }

  /// Union of successors and predecessors, ascending, each node once.
  std::vector<NodeId> neighbors(NodeId v) const {
    check_node(v);
    std::vector<NodeId> result;
    result.reserve(out_[v].size() + in_[v].size());
    std::set_union(out_[v].begin(), out_[v].end(), in_[v].begin(), in_[v].end(),
                   std::back_inserter(result));
    return result;
  }

  friend bool operator==(const DirectedGraph& a, const DirectedGraph& b) {
    return a.edge_count_ == b.edge_count_ && a.out_ == b.out_;
  }

 private:
  void check_node(NodeId v) const {
    if (v >= out_.size()) {
      throw std::out_of_range("node " + std::to_string(v) + " out of range [0, " +
                              std::to_string(out_.size()) + ")");
    }
  }

  std::vector<std::vector<NodeId>> out_;
  std::vector<std::vector<NodeId>> in_;
  std::size_t edge_count_ = 0;
};

/// Degree triples of all nodes, indexed by node ID.
inline std::vector<DegreeTriple> degree_triples(const DirectedGraph& g) {
  std::vector<DegreeTriple> triples(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) triples[v] = g.degree_triple(v);
  return triples;
}

}  // namespace sngen
