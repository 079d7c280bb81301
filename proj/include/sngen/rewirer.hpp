#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sngen/graph.hpp"
#include "sngen/log.hpp"
#include "sngen/random.hpp"

namespace sngen {

struct RewireConfig {
  double degree_percentile = 95.0;
  double pair_fraction = 0.6;
  unsigned attempts = 10;
  std::uint64_t max_iterations_per_node = 1'000'000;

  void validate() const {
    if (!(degree_percentile > 0.0 && degree_percentile <= 100.0)) {
      throw std::invalid_argument("degree percentile must lie in (0, 100]");
    }
    if (!(pair_fraction > 0.0 && pair_fraction <= 1.0)) {
      throw std::invalid_argument("pair fraction must lie in (0, 1]");
    }
    if (attempts < 1) throw std::invalid_argument("attempts must be at least 1");
    if (max_iterations_per_node < 1) throw std::invalid_argument("iteration cap must be at least 1");
  }
};

struct RewireReport {
  std::size_t candidate_nodes = 0;    // |V'|
  std::size_t degree_threshold = 0;   // t
  std::size_t median_degree = 0;      // m
  std::uint64_t iterations = 0;       // sum of alpha over V'
  std::uint64_t connected_pairs = 0;  // (y1, y2) already adjacent
  std::uint64_t empty_candidates = 0; // no admissible z1 or z2
  std::uint64_t exhausted = 0;        // every z-pair draw was adjacent
  std::uint64_t attempted = 0;        // rewire_step calls
  std::uint64_t successful = 0;       // rewire_step calls that mutated the graph
  std::size_t capped_nodes = 0;       // nodes whose alpha hit the cap
};

/// Nearest-rank percentile of `values` (p in (0, 100]). Empty input yields 0.
inline std::size_t nearest_rank_percentile(std::vector<std::size_t> values, double p) {
  if (values.empty()) return 0;
  std::sort(values.begin(), values.end());
  auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(values.size())));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

/// Direction-aware rewiring of (y1 - z1), (y2 - z2) into (y1 - y2), (z1 - z2).
///
/// Fires only when the two old connections have matching shapes:
///   y1 -> z1 and z2 -> y2 (one-directional)  =>  y1 -> y2, z2 -> z1
///   z1 -> y1 and y2 -> z2 (one-directional)  =>  y2 -> y1, z1 -> z2
///   y1 <-> z1 and y2 <-> z2                  =>  y1 <-> y2, z1 <-> z2
/// Otherwise returns false and leaves the graph untouched. Every node keeps
/// its degree triple.
inline bool rewire_step(DirectedGraph& g, NodeId y1, NodeId y2, NodeId z1, NodeId z2) {
  if (y1 == y2 || y1 == z1 || y1 == z2 || y2 == z1 || y2 == z2 || z1 == z2) {
    throw std::invalid_argument("rewire_step: nodes must be distinct");
  }
  if (g.connected(y1, y2)) throw std::invalid_argument("rewire_step: y1 and y2 are connected");
  if (g.connected(z1, z2)) throw std::invalid_argument("rewire_step: z1 and z2 are connected");

  const bool y1z1 = g.has_directed_edge(y1, z1);
  const bool z1y1 = g.has_directed_edge(z1, y1);
  const bool y2z2 = g.has_directed_edge(y2, z2);
  const bool z2y2 = g.has_directed_edge(z2, y2);
  if (!(y1z1 || z1y1)) throw std::invalid_argument("rewire_step: z1 is not a neighbour of y1");
  if (!(y2z2 || z2y2)) throw std::invalid_argument("rewire_step: z2 is not a neighbour of y2");

  if (y1z1 && !z1y1 && !y2z2 && z2y2) {
    g.remove_directed_edge(y1, z1);
    g.remove_directed_edge(z2, y2);
    g.add_directed_edge(y1, y2);
    g.add_directed_edge(z2, z1);
    return true;
  }
  if (!y1z1 && z1y1 && y2z2 && !z2y2) {
    g.remove_directed_edge(z1, y1);
    g.remove_directed_edge(y2, z2);
    g.add_directed_edge(y2, y1);
    g.add_directed_edge(z1, z2);
    return true;
  }
  if (y1z1 && z1y1 && y2z2 && z2y2) {
    g.remove_directed_edge(y1, z1);
    g.remove_directed_edge(z1, y1);
    g.remove_directed_edge(y2, z2);
    g.remove_directed_edge(z2, y2);
    g.add_reciprocal_edge(y1, y2);
    g.add_reciprocal_edge(z1, z2);
    return true;
  }
  return false;
}

namespace detail {

inline void sorted_insert(std::vector<NodeId>& list, NodeId v) {
  list.insert(std::lower_bound(list.begin(), list.end(), v), v);
}

inline void sorted_erase(std::vector<NodeId>& list, NodeId v) {
  auto pos = std::lower_bound(list.begin(), list.end(), v);
  if (pos != list.end() && *pos == v) list.erase(pos);
}

}  // namespace detail

/// Runs the clustering-raising rewiring over every node whose total degree
/// lies in [2, t], t being the configured percentile of all total degrees.
///
/// The rewirer keeps its own ID-sorted copy of every node's undirected
/// neighbourhood, updated after each successful step. Second-degree
/// candidates are taken from the tail of those lists at or above the current
/// node's ID; the common neighbours of y1 and y2 are found by binary
/// searching the shorter list in the longer one.
class Rewirer {
 public:
  Rewirer(DirectedGraph& g, RewireConfig cfg) : g_(g), cfg_(cfg) { cfg_.validate(); }

  RewireReport run(Rng& rng) {
    const std::size_t n = g_.node_count();
    nbr_.assign(n, {});
    std::vector<std::size_t> degrees(n);
    for (NodeId v = 0; v < n; ++v) {
      nbr_[v] = g_.neighbors(v);
      degrees[v] = nbr_[v].size();
    }

    RewireReport report;
    report.degree_threshold = nearest_rank_percentile(degrees, cfg_.degree_percentile);
    std::vector<NodeId> selected;
    std::vector<std::size_t> selected_degrees;
    for (NodeId v = 0; v < n; ++v) {
      if (degrees[v] >= 2 && degrees[v] <= report.degree_threshold) {
        selected.push_back(v);
        selected_degrees.push_back(degrees[v]);
      }
    }
    report.candidate_nodes = selected.size();
    report.median_degree = nearest_rank_percentile(selected_degrees, 50.0);

    for (const NodeId x : selected) {
      const std::uint64_t deg = degrees[x];
      std::uint64_t alpha = deg * (deg - 1) / 2;
      if (deg > report.median_degree) {
        alpha = static_cast<std::uint64_t>(std::ceil(static_cast<double>(alpha) * cfg_.pair_fraction));
      }
      if (alpha > cfg_.max_iterations_per_node) {
        log::warn("rewiring iterations for node " + std::to_string(x) + " capped at " +
                  std::to_string(cfg_.max_iterations_per_node));
        alpha = cfg_.max_iterations_per_node;
        ++report.capped_nodes;
      }
      for (std::uint64_t it = 0; it < alpha; ++it) iterate(x, rng, report);
      report.iterations += alpha;
    }
    return report;
  }

 private:
  void iterate(NodeId x, Rng& rng, RewireReport& report) {
    const auto& nx = nbr_[x];
    const std::size_t first = uniform_index(rng, nx.size());
    std::size_t second = uniform_index(rng, nx.size() - 1);
    if (second >= first) ++second;
    const NodeId y1 = nx[first];
    const NodeId y2 = nx[second];
    if (g_.connected(y1, y2)) {
      ++report.connected_pairs;
      return;
    }

    candidates(x, y1, y2);
    if (cand1_.empty() || cand2_.empty()) {
      ++report.empty_candidates;
      return;
    }
    for (unsigned attempt = 0; attempt < cfg_.attempts; ++attempt) {
      const NodeId z1 = cand1_[uniform_index(rng, cand1_.size())];
      const NodeId z2 = cand2_[uniform_index(rng, cand2_.size())];
      if (g_.connected(z1, z2)) continue;
      ++report.attempted;
      if (rewire_step(g_, y1, y2, z1, z2)) {
        ++report.successful;
        detail::sorted_erase(nbr_[y1], z1);
        detail::sorted_erase(nbr_[z1], y1);
        detail::sorted_erase(nbr_[y2], z2);
        detail::sorted_erase(nbr_[z2], y2);
        detail::sorted_insert(nbr_[y1], y2);
        detail::sorted_insert(nbr_[y2], y1);
        detail::sorted_insert(nbr_[z1], z2);
        detail::sorted_insert(nbr_[z2], z1);
      }
      return;
    }
    ++report.exhausted;
  }

  // cand1_ = ne(y1) \ ne(y2), cand2_ = ne(y2) \ ne(y1), both without IDs < x.
  void candidates(NodeId x, NodeId y1, NodeId y2) {
    const auto& n1 = nbr_[y1];
    const auto& n2 = nbr_[y2];
    const auto b1 = std::lower_bound(n1.begin(), n1.end(), x);
    const auto b2 = std::lower_bound(n2.begin(), n2.end(), x);
    const bool first_shorter = (n1.end() - b1) <= (n2.end() - b2);
    const auto small_begin = first_shorter ? b1 : b2;
    const auto small_end = first_shorter ? n1.end() : n2.end();
    const auto large_begin = first_shorter ? b2 : b1;
    const auto large_end = first_shorter ? n2.end() : n1.end();

    common_.clear();
    for (auto it = small_begin; it != small_end; ++it) {
      if (std::binary_search(large_begin, large_end, *it)) common_.push_back(*it);
    }
    cand1_.clear();
    cand2_.clear();
    std::set_difference(b1, n1.end(), common_.begin(), common_.end(), std::back_inserter(cand1_));
    std::set_difference(b2, n2.end(), common_.begin(), common_.end(), std::back_inserter(cand2_));
  }

  DirectedGraph& g_;
  RewireConfig cfg_;
  std::vector<std::vector<NodeId>> nbr_;
  std::vector<NodeId> common_, cand1_, cand2_;
};

inline RewireReport rewire_graph(DirectedGraph& g, const RewireConfig& cfg, Rng& rng) {
  return Rewirer(g, cfg).run(rng);
}

}  // namespace sngen
