#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sngen/degree_model.hpp"
#include "sngen/graph.hpp"
#include "sngen/random.hpp"

namespace sngen {

// ---------------------------------------------------------------------------
// Undirected projection of an induced subgraph, in CSR form over local indices.

struct Projection {
  std::vector<NodeId> nodes;           // local index -> global ID, ascending
  std::vector<std::size_t> offsets;    // size nodes.size() + 1
  std::vector<std::uint32_t> adjacency;

  std::size_t size() const noexcept { return nodes.size(); }
  std::span<const std::uint32_t> neighbors(std::size_t local) const {
    return {adjacency.data() + offsets[local], offsets[local + 1] - offsets[local]};
  }
  std::size_t degree(std::size_t local) const { return offsets[local + 1] - offsets[local]; }
};

/// Builds the projection of the subgraph induced by `nodes` (any order, no
/// duplicates). Neighbour lists are sorted by local index.
inline Projection project(const DirectedGraph& g, std::span<const NodeId> nodes) {
  constexpr auto kAbsent = std::numeric_limits<std::uint32_t>::max();
  Projection proj;
  proj.nodes.assign(nodes.begin(), nodes.end());
  std::sort(proj.nodes.begin(), proj.nodes.end());
  if (std::adjacent_find(proj.nodes.begin(), proj.nodes.end()) != proj.nodes.end()) {
    throw std::invalid_argument("node set contains duplicates");
  }
  std::vector<std::uint32_t> local(g.node_count(), kAbsent);
  for (std::uint32_t i = 0; i < proj.nodes.size(); ++i) {
    if (proj.nodes[i] >= g.node_count()) throw std::out_of_range("node set references a missing node");
    local[proj.nodes[i]] = i;
  }
  proj.offsets.assign(proj.nodes.size() + 1, 0);
  for (std::uint32_t i = 0; i < proj.nodes.size(); ++i) {
    // neighbors() is ascending in global ID, hence ascending in local index.
    for (const NodeId u : g.neighbors(proj.nodes[i])) {
      if (local[u] != kAbsent) proj.adjacency.push_back(local[u]);
    }
    proj.offsets[i + 1] = proj.adjacency.size();
  }
  return proj;
}

inline std::vector<NodeId> all_nodes(const DirectedGraph& g) {
  std::vector<NodeId> nodes(g.node_count());
  std::iota(nodes.begin(), nodes.end(), NodeId{0});
  return nodes;
}

// ---------------------------------------------------------------------------
// Components

struct Components {
  std::vector<NodeId> lscc;  // ascending
  std::vector<NodeId> lwcc;  // ascending
};

namespace detail {

// Picks the label with the most members; ties go to the label containing the
// smallest node ID. Labels are assigned so that scanning nodes in ascending
// order meets each label's smallest member first.
inline std::vector<NodeId> largest_labelled(const std::vector<std::uint32_t>& label) {
  if (label.empty()) return {};
  const std::uint32_t count = *std::max_element(label.begin(), label.end()) + 1;
  std::vector<std::size_t> sizes(count, 0);
  std::vector<NodeId> min_node(count, std::numeric_limits<NodeId>::max());
  for (NodeId v = 0; v < label.size(); ++v) {
    ++sizes[label[v]];
    min_node[label[v]] = std::min(min_node[label[v]], v);
  }
  std::uint32_t best = 0;
  for (std::uint32_t c = 1; c < count; ++c) {
    if (sizes[c] > sizes[best] || (sizes[c] == sizes[best] && min_node[c] < min_node[best])) best = c;
  }
  std::vector<NodeId> members;
  members.reserve(sizes[best]);
  for (NodeId v = 0; v < label.size(); ++v) {
    if (label[v] == best) members.push_back(v);
  }
  return members;
}

// Iterative Tarjan; returns a component label per node.
inline std::vector<std::uint32_t> strong_component_labels(const DirectedGraph& g) {
  constexpr auto kUnvisited = std::numeric_limits<std::uint32_t>::max();
  const std::size_t n = g.node_count();
  std::vector<std::uint32_t> index(n, kUnvisited), low(n, 0), label(n, kUnvisited);
  std::vector<char> on_stack(n, 0);
  std::vector<NodeId> stack;
  std::vector<std::pair<NodeId, std::size_t>> call;  // node, next out-edge position
  std::uint32_t next_index = 0, next_label = 0;

  for (NodeId root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call.emplace_back(root, 0);
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      const auto out = g.out_neighbors(v);
      if (pos < out.size()) {
        const NodeId w = out[pos++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const NodeId done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        NodeId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          label[w] = next_label;
        } while (w != done);
        ++next_label;
      }
    }
  }
  return label;
}

inline std::vector<std::uint32_t> weak_component_labels(const DirectedGraph& g) {
  constexpr auto kUnvisited = std::numeric_limits<std::uint32_t>::max();
  const std::size_t n = g.node_count();
  std::vector<std::uint32_t> label(n, kUnvisited);
  std::vector<NodeId> queue;
  std::uint32_t next_label = 0;
  for (NodeId root = 0; root < n; ++root) {
    if (label[root] != kUnvisited) continue;
    label[root] = next_label;
    queue.assign(1, root);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const NodeId v = queue[head];
      for (auto adj : {g.out_neighbors(v), g.in_neighbors(v)}) {
        for (const NodeId u : adj) {
          if (label[u] == kUnvisited) {
            label[u] = next_label;
            queue.push_back(u);
          }
        }
      }
    }
    ++next_label;
  }
  return label;
}

}  // namespace detail

inline Components connected_components(const DirectedGraph& g) {
  return {detail::largest_labelled(detail::strong_component_labels(g)),
          detail::largest_labelled(detail::weak_component_labels(g))};
}

// ---------------------------------------------------------------------------
// Scalar features

inline double density(std::size_t edge_entries, std::size_t n) {
  if (n < 2) throw std::invalid_argument("density needs at least two nodes");
  return static_cast<double>(edge_entries) / (static_cast<double>(n) * static_cast<double>(n - 1));
}

/// Directed entries with both endpoints in `nodes`.
inline std::size_t induced_edge_entries(const DirectedGraph& g, std::span<const NodeId> nodes) {
  std::vector<char> member(g.node_count(), 0);
  for (const NodeId v : nodes) member.at(v) = 1;
  std::size_t entries = 0;
  for (const NodeId v : nodes) {
    for (const NodeId u : g.out_neighbors(v)) entries += member[u];
  }
  return entries;
}

struct PathOptions {
  std::size_t sample_cap = 20'000;      // above this, ASPL is estimated from sampled sources
  std::size_t sample_sources = 1'000;
  std::uint64_t seed = 0;
  unsigned threads = 0;                 // 0 = hardware concurrency
};

struct PathStats {
  double aspl = 0.0;
  std::uint32_t diameter = 0;
  bool estimated = false;  // aspl sampled, diameter a lower bound
};

namespace detail {

struct BfsTotals {
  std::uint64_t distance_sum = 0;
  std::uint64_t reached = 0;  // excluding the source
  std::uint32_t eccentricity = 0;
  std::uint32_t farthest = 0;
  std::size_t best_source = std::numeric_limits<std::size_t>::max();
};

inline BfsTotals bfs(const Projection& proj, std::uint32_t source, std::vector<std::uint32_t>& dist,
                     std::vector<std::uint32_t>& queue) {
  constexpr auto kInf = std::numeric_limits<std::uint32_t>::max();
  std::fill(dist.begin(), dist.end(), kInf);
  BfsTotals totals;
  totals.farthest = source;
  dist[source] = 0;
  queue.assign(1, source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const auto v = queue[head];
    for (const auto u : proj.neighbors(v)) {
      if (dist[u] != kInf) continue;
      dist[u] = dist[v] + 1;
      totals.distance_sum += dist[u];
      ++totals.reached;
      if (dist[u] > totals.eccentricity) {
        totals.eccentricity = dist[u];
        totals.farthest = u;
      }
      queue.push_back(u);
    }
  }
  return totals;
}

inline unsigned resolve_threads(unsigned requested, std::size_t work) {
  unsigned threads = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(work, 1)));
}

}  // namespace detail

/// Mean hop distance over ordered pairs and the maximum hop distance in the
/// undirected projection of the subgraph induced by `nodes`.
inline PathStats aspl_and_diameter(const DirectedGraph& g, std::span<const NodeId> nodes,
                                   const PathOptions& options = {}) {
  const Projection proj = project(g, nodes);
  const std::size_t n = proj.size();
  PathStats stats;
  if (n < 2) return stats;

  std::vector<std::uint32_t> sources;
  if (n > options.sample_cap) {
    stats.estimated = true;
    Rng rng{options.seed};
    std::vector<std::uint32_t> all(n);
    std::iota(all.begin(), all.end(), 0u);
    const std::size_t k = std::min(options.sample_sources, n);
    for (std::size_t i = 0; i < k; ++i) {
      std::swap(all[i], all[i + uniform_index(rng, n - i)]);
    }
    sources.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
  } else {
    sources.resize(n);
    std::iota(sources.begin(), sources.end(), 0u);
  }

  const unsigned threads = detail::resolve_threads(options.threads, sources.size());
  std::vector<detail::BfsTotals> partial(threads);
  std::vector<char> disconnected(threads, 0);
  auto worker = [&](unsigned t) {
    std::vector<std::uint32_t> dist(n), queue;
    auto& acc = partial[t];
    for (std::size_t i = t; i < sources.size(); i += threads) {
      const auto totals = detail::bfs(proj, sources[i], dist, queue);
      if (totals.reached + 1 != n) disconnected[t] = 1;
      acc.distance_sum += totals.distance_sum;
      acc.reached += totals.reached;
      // Ties keep the earliest source so the result is independent of the thread count.
      if (totals.eccentricity > acc.eccentricity ||
          (totals.eccentricity == acc.eccentricity && i < acc.best_source)) {
        acc.eccentricity = totals.eccentricity;
        acc.farthest = totals.farthest;
        acc.best_source = i;
      }
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  if (std::any_of(disconnected.begin(), disconnected.end(), [](char c) { return c != 0; })) {
    throw std::invalid_argument("node set is not connected in the undirected projection");
  }

  std::uint64_t distance_sum = 0, pairs = 0;
  std::uint32_t farthest = 0;
  std::size_t best_source = std::numeric_limits<std::size_t>::max();
  for (const auto& acc : partial) {
    distance_sum += acc.distance_sum;
    pairs += acc.reached;
    if (acc.eccentricity > stats.diameter || (acc.eccentricity == stats.diameter && acc.best_source < best_source)) {
      stats.diameter = acc.eccentricity;
      farthest = acc.farthest;
      best_source = acc.best_source;
    }
  }
  stats.aspl = static_cast<double>(distance_sum) / static_cast<double>(pairs);

  if (stats.estimated) {
    // Double sweeps from the farthest node seen tighten the lower bound.
    std::vector<std::uint32_t> dist(n), queue;
    for (int sweep = 0; sweep < 4; ++sweep) {
      const auto totals = detail::bfs(proj, farthest, dist, queue);
      if (totals.eccentricity <= stats.diameter && sweep > 0) break;
      stats.diameter = std::max(stats.diameter, totals.eccentricity);
      farthest = totals.farthest;
    }
  }
  return stats;
}

/// Local clustering coefficients on the undirected projection of the
/// subgraph induced by `nodes`; entries follow ascending node ID.
inline std::vector<double> local_clustering(const DirectedGraph& g, std::span<const NodeId> nodes) {
  const Projection proj = project(g, nodes);
  std::vector<double> cc(proj.size(), 0.0);
  std::vector<char> mark(proj.size(), 0);
  for (std::size_t v = 0; v < proj.size(); ++v) {
    const auto nv = proj.neighbors(v);
    const std::size_t k = nv.size();
    if (k < 2) continue;
    for (const auto u : nv) mark[u] = 1;
    std::uint64_t links = 0;  // each neighbour-neighbour edge is seen twice
    for (const auto u : nv) {
      for (const auto w : proj.neighbors(u)) links += mark[w];
    }
    for (const auto u : nv) mark[u] = 0;
    cc[v] = static_cast<double>(links) / (static_cast<double>(k) * static_cast<double>(k - 1));
  }
  return cc;
}

/// Mean local clustering coefficient; nodes with projected degree < 2 count as 0.
inline double average_clustering(const DirectedGraph& g, std::span<const NodeId> nodes) {
  if (nodes.empty()) throw std::invalid_argument("average clustering of an empty node set");
  const auto cc = local_clustering(g, nodes);
  return std::accumulate(cc.begin(), cc.end(), 0.0) / static_cast<double>(cc.size());
}

inline OptionalCorrelations degree_rank_correlations(const DirectedGraph& g) {
  return degree_sequence_correlations(observed_degrees(g));
}

// ---------------------------------------------------------------------------
// Spectrum

struct Spectrum {
  std::vector<double> eigenvalues;  // ascending
};

/// Eigenvalues of I - D^-1/2 A D^-1/2 for the undirected projection of the
/// connected subgraph induced by `nodes`. Dense solver; `cap` bounds the size.
inline Spectrum laplacian_spectrum(const DirectedGraph& g, std::span<const NodeId> nodes, std::size_t cap = 6'000) {
  if (nodes.size() > cap) {
    throw std::invalid_argument("node set of size " + std::to_string(nodes.size()) +
                                " exceeds the dense spectrum cap " + std::to_string(cap));
  }
  const Projection proj = project(g, nodes);
  const std::size_t n = proj.size();
  if (n == 0) return {};
  {
    std::vector<std::uint32_t> dist(n), queue;
    if (detail::bfs(proj, 0, dist, queue).reached + 1 != n) {
      throw std::invalid_argument("node set is not connected in the undirected projection");
    }
  }
  if (n == 1) return {{0.0}};

  Eigen::MatrixXd lap = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<double> inv_sqrt_deg(n);
  for (std::size_t v = 0; v < n; ++v) inv_sqrt_deg[v] = 1.0 / std::sqrt(static_cast<double>(proj.degree(v)));
  for (std::size_t v = 0; v < n; ++v) {
    for (const auto u : proj.neighbors(v)) {
      lap(static_cast<Eigen::Index>(v), u) = -inv_sqrt_deg[v] * inv_sqrt_deg[u];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigenvalue solver did not converge");
  const auto& values = solver.eigenvalues();
  return {std::vector<double>(values.data(), values.data() + values.size())};
}

struct HistogramBin {
  double center = 0.0;
  std::size_t count = 0;
};

/// Equal-width histogram over [0, 2]; values on the upper edge go to the last bin.
inline std::vector<HistogramBin> spectrum_histogram(const Spectrum& spectrum, std::size_t bins = 100) {
  std::vector<HistogramBin> hist(bins);
  const double width = 2.0 / static_cast<double>(bins);
  for (std::size_t b = 0; b < bins; ++b) hist[b].center = (static_cast<double>(b) + 0.5) * width;
  for (const double x : spectrum.eigenvalues) {
    auto b = static_cast<std::ptrdiff_t>(std::floor(x / width));
    b = std::clamp<std::ptrdiff_t>(b, 0, static_cast<std::ptrdiff_t>(bins) - 1);
    ++hist[static_cast<std::size_t>(b)].count;
  }
  return hist;
}

// ---------------------------------------------------------------------------
// Full report

/// Feature record of one graph. Fields computed on the LWCC are optional and
/// absent when the LWCC has fewer than two nodes.
struct GraphStats {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::optional<double> density;
  std::size_t lscc_size = 0;
  std::size_t lwcc_size = 0;
  std::optional<double> density_lwcc;
  std::optional<double> aspl_lwcc;
  std::optional<std::uint32_t> diameter_lwcc;
  std::optional<double> avg_cc_lwcc;
  std::optional<double> rho1;
  std::optional<double> rho2;
  std::optional<double> rho3;
  bool aspl_estimated = false;

  friend bool operator==(const GraphStats&, const GraphStats&) = default;
};

inline GraphStats stats_report(const DirectedGraph& g, const PathOptions& path_options = {}) {
  GraphStats stats;
  stats.nodes = g.node_count();
  stats.edges = g.edge_count();
  if (stats.nodes >= 2) stats.density = density(stats.edges, stats.nodes);

  const auto comps = connected_components(g);
  stats.lscc_size = comps.lscc.size();
  stats.lwcc_size = comps.lwcc.size();
  if (stats.lwcc_size >= 2) {
    stats.density_lwcc = density(induced_edge_entries(g, comps.lwcc), stats.lwcc_size);
    const auto paths = aspl_and_diameter(g, comps.lwcc, path_options);
    stats.aspl_lwcc = paths.aspl;
    stats.diameter_lwcc = paths.diameter;
    stats.aspl_estimated = paths.estimated;
    stats.avg_cc_lwcc = average_clustering(g, comps.lwcc);
  }
  const auto rho = degree_rank_correlations(g);
  stats.rho1 = rho.recip_in;
  stats.rho2 = rho.recip_out;
  stats.rho3 = rho.in_out;
  return stats;
}

}  // namespace sngen
