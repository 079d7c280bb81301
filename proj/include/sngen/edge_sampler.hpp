#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sngen/degree_model.hpp"
#include "sngen/graph.hpp"
#include "sngen/random.hpp"

namespace sngen {

/// Normalization constants and eligibility counts for Bernoulli edge sampling.
struct EdgeSamplingPlan {
  double recip_sum = 0.0;              // r = sum of reciprocal degrees
  double directed_expectation = 0.0;   // d = (sum out + sum in) / 2
  std::uint64_t recip_eligible = 0;    // unordered pairs with both reciprocal degrees nonzero
  std::uint64_t directed_eligible = 0; // ordered pairs i != j with out(i), in(j) nonzero
};

inline EdgeSamplingPlan plan_edge_sampling(const DegreeSequences& seq) {
  EdgeSamplingPlan plan;
  std::uint64_t with_recip = 0, with_out = 0, with_in = 0, with_both = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    plan.recip_sum += seq.recip[i];
    plan.directed_expectation += 0.5 * (static_cast<double>(seq.outdeg[i]) + seq.indeg[i]);
    with_recip += seq.recip[i] != 0;
    with_out += seq.outdeg[i] != 0;
    with_in += seq.indeg[i] != 0;
    with_both += seq.outdeg[i] != 0 && seq.indeg[i] != 0;
  }
  plan.recip_eligible = with_recip * (with_recip - (with_recip > 0)) / 2;
  plan.directed_eligible = with_out * with_in - with_both;
  return plan;
}

/// Places reciprocal edges between node pairs with probability
/// min(1, R(i) R(j) / r + L / |eligible pairs|), where L = sum R(i)^2 / (2r)
/// is the self-loop mass spread uniformly over the eligible pairs.
inline void sample_reciprocal_edges(DirectedGraph& g, std::span<const std::uint32_t> recip, Rng& rng) {
  if (recip.size() != g.node_count()) throw std::invalid_argument("reciprocal degree sequence length mismatch");
  if (g.edge_count() != 0) throw std::invalid_argument("reciprocal sampling needs an empty graph");

  std::vector<NodeId> eligible;
  double r = 0.0, squares = 0.0;
  for (NodeId i = 0; i < recip.size(); ++i) {
    if (recip[i] == 0) continue;
    eligible.push_back(i);
    r += recip[i];
    squares += static_cast<double>(recip[i]) * recip[i];
  }
  if (eligible.size() < 2) return;
  const double pairs = 0.5 * static_cast<double>(eligible.size()) * static_cast<double>(eligible.size() - 1);
  const double increment = squares / (2.0 * r) / pairs;

  for (std::size_t a = 0; a < eligible.size(); ++a) {
    const NodeId i = eligible[a];
    const double wi = recip[i] / r;
    for (std::size_t b = a + 1; b < eligible.size(); ++b) {
      const NodeId j = eligible[b];
      const double p = wi * recip[j] + increment;
      if (uniform01(rng) < p) g.add_reciprocal_edge(i, j);
    }
  }
}

/// Places directed edges (i -> j) with probability min(1, O(i) I(j) / d + U).
///
/// Pairs already present as one half of a reciprocal edge are skipped and
/// their mass O(i) I(j) / d goes into a reservoir. U spreads the reservoir
/// plus the directed self-loop mass sum O(i) I(i) / d uniformly over the
/// remaining eligible pairs. U is fixed before any pair is drawn.
inline void sample_directed_edges(DirectedGraph& g, std::span<const std::uint32_t> outdeg,
                                  std::span<const std::uint32_t> indeg, Rng& rng) {
  const std::size_t n = g.node_count();
  if (outdeg.size() != n || indeg.size() != n) throw std::invalid_argument("directed degree sequence length mismatch");
  for (NodeId v = 0; v < n; ++v) {
    const auto t = g.degree_triple(v);
    if (t.in_only != 0 || t.out_only != 0) {
      throw std::invalid_argument("directed sampling expects a graph holding only reciprocal edges");
    }
  }

  double d = 0.0, self_mass = 0.0;
  std::vector<NodeId> sources, targets;
  for (NodeId i = 0; i < n; ++i) {
    d += 0.5 * (static_cast<double>(outdeg[i]) + indeg[i]);
    if (outdeg[i] != 0) sources.push_back(i);
    if (indeg[i] != 0) targets.push_back(i);
  }
  if (sources.empty() || targets.empty()) return;
  std::uint64_t eligible = static_cast<std::uint64_t>(sources.size()) * targets.size();
  for (NodeId i = 0; i < n; ++i) {
    if (outdeg[i] != 0 && indeg[i] != 0) {
      --eligible;
      self_mass += static_cast<double>(outdeg[i]) * indeg[i] / d;
    }
  }

  // Reservoir of pairs already realized by reciprocal edges.
  double reservoir = 0.0;
  std::uint64_t overlapping = 0;
  for (const NodeId i : sources) {
    for (const NodeId j : g.out_neighbors(i)) {
      if (indeg[j] == 0) continue;
      reservoir += static_cast<double>(outdeg[i]) * indeg[j] / d;
      ++overlapping;
    }
  }
  const std::uint64_t remaining = eligible - overlapping;
  if (remaining == 0) return;
  const double increment = (reservoir + self_mass) / static_cast<double>(remaining);

  std::vector<std::pair<NodeId, NodeId>> placed;
  std::vector<char> existing(n, 0);
  for (const NodeId i : sources) {
    const auto out = g.out_neighbors(i);
    for (const NodeId j : out) existing[j] = 1;
    const double wi = outdeg[i] / d;
    for (const NodeId j : targets) {
      if (j == i || existing[j]) continue;
      const double p = wi * indeg[j] + increment;
      if (uniform01(rng) < p) placed.emplace_back(i, j);
    }
    for (const NodeId j : out) existing[j] = 0;
  }
  for (const auto& [i, j] : placed) g.add_directed_edge(i, j);
}

/// Degree sampling followed by reciprocal and directed edge sampling. The
/// result is the intermediary graph, before any rewiring.
inline DirectedGraph build_graph_from_degrees(const DegreeSequences& seq, Rng& rng) {
  DirectedGraph g(seq.size());
  sample_reciprocal_edges(g, seq.recip, rng);
  sample_directed_edges(g, seq.outdeg, seq.indeg, rng);
  return g;
}

inline DirectedGraph build_graph(const DegreeModel& model, Rng& rng) {
  const auto seq = sample_correlated_degrees(model, rng);
  return build_graph_from_degrees(seq, rng);
}

}  // namespace sngen
