#include "sngen/edge_sampler.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "oracles/edge_probabilities.hpp"
#include "test_util.hpp"

namespace {

using sngen::DirectedGraph;
using sngen::Rng;

std::vector<std::uint32_t> random_degrees(std::size_t n, std::uint32_t max, double zero_share, Rng& rng) {
  std::vector<std::uint32_t> out(n);
  for (auto& x : out) x = sngen::uniform01(rng) < zero_share ? 0 : 1 + sngen::uniform_index(rng, max);
  return out;
}

std::vector<std::vector<bool>> arcs_of(const DirectedGraph& g) {
  std::vector<std::vector<bool>> a(g.node_count(), std::vector<bool>(g.node_count(), false));
  for (sngen::NodeId v = 0; v < g.node_count(); ++v)
    for (auto u : g.out_neighbors(v)) a[v][u] = true;
  return a;
}

TEST(EdgeSamplingPlan, Counts) {
  sngen::DegreeSequences seq{{0, 2, 3, 1}, {1, 0, 2, 0}, {2, 1, 0, 0}};
  const auto plan = sngen::plan_edge_sampling(seq);
  EXPECT_EQ(plan.recip_sum, 6.0);
  EXPECT_EQ(plan.directed_expectation, 3.0);
  EXPECT_EQ(plan.recip_eligible, 3u);  // among nodes 1, 2, 3
  // sources {0, 1}, targets {0, 2}, minus the self-pair (0, 0)
  EXPECT_EQ(plan.directed_eligible, 3u);
}

TEST(SampleReciprocalEdges, AllZeroDegrees) {
  DirectedGraph g(5);
  Rng rng{1};
  sngen::sample_reciprocal_edges(g, std::vector<std::uint32_t>(5, 0), rng);
  EXPECT_EQ(g.edge_count(), 0u);
}

TEST(SampleReciprocalEdges, TwoNodesAlwaysConnected) {
  // r = 2, base 1/2, L = 1/2 over one pair: p = 1.
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    DirectedGraph g(2);
    Rng rng{seed};
    sngen::sample_reciprocal_edges(g, std::vector<std::uint32_t>{1, 1}, rng);
    ASSERT_EQ(g.edge_count(), 2u);
    EXPECT_EQ(g.degree_triple(0), (sngen::DegreeTriple{1, 0, 0}));
  }
}

TEST(SampleReciprocalEdges, Preconditions) {
  DirectedGraph g(3);
  Rng rng{1};
  EXPECT_THROW(sngen::sample_reciprocal_edges(g, std::vector<std::uint32_t>{1, 1}, rng), std::invalid_argument);
  g.add_directed_edge(0, 1);
  EXPECT_THROW(sngen::sample_reciprocal_edges(g, std::vector<std::uint32_t>{1, 1, 1}, rng), std::invalid_argument);
}

TEST(SampleDirectedEdges, AllZeroDegrees) {
  DirectedGraph g(4);
  Rng rng{1};
  const std::vector<std::uint32_t> zero(4, 0);
  sngen::sample_directed_edges(g, zero, zero, rng);
  EXPECT_EQ(g.edge_count(), 0u);
}

TEST(SampleDirectedEdges, SinglePairAlwaysPlaced) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    DirectedGraph g(2);
    Rng rng{seed};
    sngen::sample_directed_edges(g, std::vector<std::uint32_t>{1, 0}, std::vector<std::uint32_t>{0, 1}, rng);
    ASSERT_EQ(g.edge_count(), 1u);
    EXPECT_TRUE(g.has_directed_edge(0, 1));
  }
}

TEST(SampleDirectedEdges, Preconditions) {
  auto g = testutil::directed(3, {{0, 1}});
  Rng rng{1};
  const std::vector<std::uint32_t> ones(3, 1);
  EXPECT_THROW(sngen::sample_directed_edges(g, ones, ones, rng), std::invalid_argument);
  DirectedGraph h(3);
  EXPECT_THROW(sngen::sample_directed_edges(h, std::vector<std::uint32_t>{1, 1}, ones, rng), std::invalid_argument);
}

// Oracle checks: expected per-node reciprocal degree and expected directed
// edge count against Monte-Carlo averages.
TEST(SampleReciprocalEdges, PerNodeMeansMatchOracle) {
  Rng setup{31337};
  const auto R = random_degrees(50, 12, 0.2, setup);
  const auto p = oracle::reciprocal_probabilities(R);
  constexpr int kRuns = 500;
  std::vector<double> total(R.size(), 0.0);
  Rng rng{4242};
  for (int run = 0; run < kRuns; ++run) {
    DirectedGraph g(R.size());
    sngen::sample_reciprocal_edges(g, R, rng);
    for (sngen::NodeId v = 0; v < R.size(); ++v) total[v] += g.degree_triple(v).reciprocal;
  }
  std::size_t outside = 0;
  for (std::size_t i = 0; i < R.size(); ++i) {
    double mean = 0.0, var = 0.0;
    for (std::size_t j = 0; j < R.size(); ++j) {
      mean += p[i][j];
      var += p[i][j] * (1.0 - p[i][j]);
    }
    const double se = std::sqrt(var / kRuns);
    const double got = total[i] / kRuns;
    if (se == 0.0) {
      EXPECT_EQ(got, mean) << "node " << i;
    } else if (std::fabs(got - mean) > 3.0 * se) {
      ++outside;
    }
  }
  // Expect about 0.3% of nodes beyond 3 standard errors by chance.
  EXPECT_LE(outside, 1u);
}

TEST(SampleDirectedEdges, EdgeCountMatchesOracleWithOverlap) {
  Rng setup{8080};
  const auto R = random_degrees(50, 8, 0.3, setup);
  const auto O = random_degrees(50, 10, 0.2, setup);
  const auto I = random_degrees(50, 10, 0.2, setup);
  DirectedGraph base(50);
  sngen::sample_reciprocal_edges(base, R, setup);
  ASSERT_GT(base.edge_count(), 0u);
  const auto p = oracle::directed_probabilities(O, I, arcs_of(base));

  double mean = 0.0, var = 0.0;
  for (const auto& row : p)
    for (double x : row) {
      mean += x;
      var += x * (1.0 - x);
    }
  constexpr int kRuns = 500;
  double total = 0.0;
  Rng rng{99};
  for (int run = 0; run < kRuns; ++run) {
    DirectedGraph g = base;
    sngen::sample_directed_edges(g, O, I, rng);
    total += static_cast<double>(g.edge_count() - base.edge_count());
  }
  EXPECT_NEAR(total / kRuns, mean, 3.0 * std::sqrt(var / kRuns));
}

TEST(EdgeProbabilities, ReciprocalMassIsConserved) {
  Rng rng{5};
  for (int trial = 0; trial < 50; ++trial) {
    const auto R = random_degrees(40, 4, 0.3, rng);
    const double r = std::accumulate(R.begin(), R.end(), 0.0);
    if (r == 0.0) continue;
    const auto p = oracle::reciprocal_probabilities(R);
    bool clamped = false;
    for (auto& row : p)
      for (double x : row) clamped |= x >= 1.0;
    if (clamped) continue;
    EXPECT_NEAR(oracle::reciprocal_unclamped_total(R), r / 2.0, 1e-9 * r);
  }
}

TEST(EdgeProbabilities, DirectedMassIsConserved) {
  // Equal out and in sums make the full directed mass exactly d.
  Rng rng{6};
  for (int trial = 0; trial < 50; ++trial) {
    auto O = random_degrees(40, 4, 0.2, rng);
    auto I = O;
    std::shuffle(I.begin(), I.end(), rng);
    const double d = std::accumulate(O.begin(), O.end(), 0.0);
    DirectedGraph base(40);
    sngen::sample_reciprocal_edges(base, random_degrees(40, 2, 0.5, rng), rng);
    const auto p = oracle::directed_probabilities(O, I, arcs_of(base));
    double total = 0.0;
    bool clamped = false;
    for (const auto& row : p)
      for (double x : row) {
        total += x;
        clamped |= x >= 1.0;
      }
    if (clamped) continue;
    EXPECT_NEAR(total, d, 1e-9 * d);
  }
}

TEST(EdgeProbabilities, ScalingDegreesRaisesProbabilities) {
  Rng rng{17};
  const auto R = random_degrees(30, 3, 0.2, rng);
  auto R2 = R;
  for (auto& x : R2) x *= 2;
  const auto p1 = oracle::reciprocal_probabilities(R);
  const auto p2 = oracle::reciprocal_probabilities(R2);
  for (std::size_t i = 0; i < R.size(); ++i)
    for (std::size_t j = 0; j < R.size(); ++j)
      if (p2[i][j] < 1.0) { EXPECT_GE(p2[i][j], p1[i][j]); }
}

TEST(BuildGraph, SimpleAcrossRandomModels) {
  Rng rng{2718};
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + sngen::uniform_index(rng, 40);
    sngen::DegreeSequences seq;
    seq.recip = random_degrees(n, 6, 0.3, rng);
    seq.indeg = random_degrees(n, 6, 0.3, rng);
    seq.outdeg = random_degrees(n, 6, 0.3, rng);
    const auto g = sngen::build_graph_from_degrees(seq, rng);
    ASSERT_TRUE(testutil::is_simple_and_consistent(g)) << "trial " << trial;
  }
}

TEST(BuildGraph, ZeroDegreesGiveEmptyGraph) {
  sngen::DegreeSequences seq{std::vector<std::uint32_t>(10, 0), std::vector<std::uint32_t>(10, 0),
                             std::vector<std::uint32_t>(10, 0)};
  Rng rng{1};
  const auto g = sngen::build_graph_from_degrees(seq, rng);
  EXPECT_EQ(g.node_count(), 10u);
  EXPECT_EQ(g.edge_count(), 0u);
}

TEST(BuildGraph, Deterministic) {
  const auto model = testutil::small_model(300, 3.0, 4.0);
  Rng a{12}, b{12};
  EXPECT_EQ(sngen::build_graph(model, a), sngen::build_graph(model, b));
}

}  // namespace
