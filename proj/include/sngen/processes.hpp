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
#include <vector>

#include "sngen/graph.hpp"
#include "sngen/metrics.hpp"
#include "sngen/random.hpp"

namespace sngen {

enum class Process { kPushPull, kSir };

/// ceil(2 ln n), at least 1.
inline std::size_t default_seed_count(std::size_t n) {
  if (n <= 1) return 1;
  return static_cast<std::size_t>(std::ceil(2.0 * std::log(static_cast<double>(n))));
}

/// 10 ceil(log2 n) + 50.
inline std::uint32_t default_max_rounds(std::size_t n) {
  const double lg = n > 1 ? std::ceil(std::log2(static_cast<double>(n))) : 0.0;
  return static_cast<std::uint32_t>(10.0 * lg + 50.0);
}

/// `count` distinct nodes drawn uniformly from `pool` (partial Fisher-Yates).
inline std::vector<NodeId> draw_seed_nodes(std::span<const NodeId> pool, std::size_t count, Rng& rng) {
  std::vector<NodeId> items(pool.begin(), pool.end());
  count = std::min(count, items.size());
  for (std::size_t i = 0; i < count; ++i) {
    std::swap(items[i], items[i + uniform_index(rng, items.size() - i)]);
  }
  items.resize(count);
  std::sort(items.begin(), items.end());
  return items;
}

namespace detail {

inline std::vector<std::uint32_t> to_local(const std::vector<NodeId>& sorted_nodes, std::span<const NodeId> seeds) {
  std::vector<std::uint32_t> local;
  local.reserve(seeds.size());
  for (const NodeId s : seeds) {
    auto pos = std::lower_bound(sorted_nodes.begin(), sorted_nodes.end(), s);
    if (pos == sorted_nodes.end() || *pos != s) throw std::invalid_argument("seed node outside the node set");
    local.push_back(static_cast<std::uint32_t>(pos - sorted_nodes.begin()));
  }
  return local;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Push-pull

struct PushPullResult {
  std::uint32_t rounds = 0;
  bool completed = false;  // false when max_rounds was reached first
};

/// Synchronous push-pull on a projection. Every node opens a channel to a
/// uniformly chosen neighbour; each channel with an informed endpoint
/// (before the round) informs both endpoints.
inline PushPullResult push_pull(const Projection& proj, std::span<const std::uint32_t> local_seeds, Rng& rng,
                                std::uint32_t max_rounds) {
  const std::size_t n = proj.size();
  std::vector<char> informed(n, 0);
  std::size_t count = 0;
  for (const auto s : local_seeds) {
    if (!informed[s]) ++count;
    informed[s] = 1;
  }
  PushPullResult result;
  std::vector<char> next;
  while (count < n) {
    if (result.rounds >= max_rounds) return result;
    next = informed;
    for (std::size_t v = 0; v < n; ++v) {
      const auto nv = proj.neighbors(v);
      if (nv.empty()) continue;
      const auto u = nv[uniform_index(rng, nv.size())];
      if (informed[v] || informed[u]) {
        next[v] = 1;
        next[u] = 1;
      }
    }
    informed.swap(next);
    count = static_cast<std::size_t>(std::count(informed.begin(), informed.end(), 1));
    ++result.rounds;
  }
  result.completed = true;
  return result;
}

inline PushPullResult push_pull(const DirectedGraph& g, std::span<const NodeId> nodes, std::span<const NodeId> seeds,
                                Rng& rng, std::uint32_t max_rounds) {
  const Projection proj = project(g, nodes);
  return push_pull(proj, detail::to_local(proj.nodes, seeds), rng, max_rounds);
}

// ---------------------------------------------------------------------------
// SIR

/// Directed out-adjacency of an induced subgraph over local indices.
struct DirectedView {
  std::vector<NodeId> nodes;  // ascending global IDs
  std::vector<std::size_t> offsets;
  std::vector<std::uint32_t> targets;

  std::size_t size() const noexcept { return nodes.size(); }
  std::span<const std::uint32_t> out(std::size_t v) const {
    return {targets.data() + offsets[v], offsets[v + 1] - offsets[v]};
  }
};

inline DirectedView directed_view(const DirectedGraph& g, std::span<const NodeId> nodes) {
  constexpr auto kAbsent = std::numeric_limits<std::uint32_t>::max();
  DirectedView view;
  view.nodes.assign(nodes.begin(), nodes.end());
  std::sort(view.nodes.begin(), view.nodes.end());
  std::vector<std::uint32_t> local(g.node_count(), kAbsent);
  for (std::uint32_t i = 0; i < view.nodes.size(); ++i) local.at(view.nodes[i]) = i;
  view.offsets.assign(view.nodes.size() + 1, 0);
  for (std::uint32_t i = 0; i < view.nodes.size(); ++i) {
    for (const NodeId u : g.out_neighbors(view.nodes[i])) {
      if (local[u] != kAbsent) view.targets.push_back(local[u]);
    }
    view.offsets[i + 1] = view.targets.size();
  }
  return view;
}

struct SirResult {
  double recovered_fraction = 0.0;
  std::uint32_t rounds = 0;
};

/// Synchronous SIR over directed out-edges. Each infected node tries every
/// out-neighbour once with probability p, then recovers.
///
/// The transmission coin of edge (v -> u) is a hash of a per-run key drawn
/// from `rng` and the edge's endpoints, so runs sharing a seed are coupled
/// across different p: the recovered set can only grow with p.
inline SirResult sir(const DirectedView& view, std::span<const std::uint32_t> local_seeds, double p, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("infection probability must lie in [0, 1]");
  enum : char { kSusceptible = 0, kInfected = 1, kRecovered = 2 };
  const std::uint64_t key = rng();
  const std::size_t n = view.size();
  std::vector<char> state(n, kSusceptible);
  std::vector<std::uint32_t> infected, next;
  for (const auto s : local_seeds) {
    if (state[s] == kSusceptible) infected.push_back(s);
    state[s] = kInfected;
  }
  SirResult result;
  std::size_t recovered = 0;
  while (!infected.empty()) {
    next.clear();
    for (const auto v : infected) {
      const std::uint64_t source_key = mix64(key ^ view.nodes[v]);
      for (const auto u : view.out(v)) {
        if (state[u] != kSusceptible) continue;
        if (to_unit(mix64(source_key ^ (static_cast<std::uint64_t>(view.nodes[u]) << 32))) < p) {
          state[u] = kInfected;
          next.push_back(u);
        }
      }
    }
    for (const auto v : infected) state[v] = kRecovered;
    recovered += infected.size();
    infected.swap(next);
    ++result.rounds;
  }
  result.recovered_fraction = n == 0 ? 0.0 : static_cast<double>(recovered) / static_cast<double>(n);
  return result;
}

inline SirResult sir(const DirectedGraph& g, std::span<const NodeId> nodes, std::span<const NodeId> seeds, double p,
                     Rng& rng) {
  const DirectedView view = directed_view(g, nodes);
  return sir(view, detail::to_local(view.nodes, seeds), p, rng);
}

// ---------------------------------------------------------------------------
// Repeated experiments

struct SpreadSpec {
  Process process = Process::kPushPull;
  std::vector<NodeId> seed_nodes;          // explicit seeds; empty means draw per run
  std::optional<std::size_t> seed_count;   // defaults to ceil(2 ln n), n = graph node count
  double p = 0.1;                          // SIR only
  std::size_t repetitions = 100;
  std::optional<std::uint32_t> max_rounds; // push-pull cap; defaults to 10 ceil(log2 |LWCC|) + 50
  std::uint64_t seed = 0;

  void validate() const {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("infection probability must lie in [0, 1]");
    if (repetitions < 1) throw std::invalid_argument("repetitions must be at least 1");
    if (seed_count && *seed_count < 1) throw std::invalid_argument("seed count must be at least 1");
  }
};

struct SpreadSummary {
  std::vector<double> per_run;  // rounds (push-pull) or recovered fraction (SIR)
  double mean = 0.0;
  double stddev = 0.0;          // sample standard deviation; 0 for a single run
  std::size_t incomplete = 0;   // push-pull runs that hit max_rounds
  std::size_t lwcc_size = 0;

  friend bool operator==(const SpreadSummary&, const SpreadSummary&) = default;
};

/// Runs `spec.repetitions` independent simulations on the LWCC. Run i uses
/// an engine seeded with derive_seed(spec.seed, i); that engine first draws
/// the seed nodes (unless given explicitly) and then drives the process.
inline SpreadSummary run_experiment(const DirectedGraph& g, const SpreadSpec& spec) {
  spec.validate();
  const auto lwcc = connected_components(g).lwcc;
  SpreadSummary summary;
  summary.lwcc_size = lwcc.size();
  if (lwcc.empty()) throw std::invalid_argument("cannot simulate on an empty graph");

  const std::size_t count = spec.seed_count.value_or(default_seed_count(g.node_count()));
  const std::uint32_t max_rounds = spec.max_rounds.value_or(default_max_rounds(lwcc.size()));
  std::optional<Projection> proj;
  std::optional<DirectedView> view;
  if (spec.process == Process::kPushPull) {
    proj = project(g, lwcc);
  } else {
    view = directed_view(g, lwcc);
  }
  const auto& sorted_nodes = proj ? proj->nodes : view->nodes;

  for (std::size_t run = 0; run < spec.repetitions; ++run) {
    Rng rng{derive_seed(spec.seed, run)};
    const auto seeds = spec.seed_nodes.empty() ? draw_seed_nodes(lwcc, count, rng) : spec.seed_nodes;
    const auto local = detail::to_local(sorted_nodes, seeds);
    if (spec.process == Process::kPushPull) {
      const auto r = push_pull(*proj, local, rng, max_rounds);
      if (!r.completed) ++summary.incomplete;
      summary.per_run.push_back(r.rounds);
    } else {
      summary.per_run.push_back(sir(*view, local, spec.p, rng).recovered_fraction);
    }
  }

  const double n = static_cast<double>(summary.per_run.size());
  summary.mean = std::accumulate(summary.per_run.begin(), summary.per_run.end(), 0.0) / n;
  if (summary.per_run.size() > 1) {
    double ss = 0.0;
    for (const double x : summary.per_run) ss += (x - summary.mean) * (x - summary.mean);
    summary.stddev = std::sqrt(ss / (n - 1.0));
  }
  return summary;
}

}  // namespace sngen
