#include "sngen/rewirer.hpp"

#include <gtest/gtest.h>

#include "sngen/edge_sampler.hpp"
#include "sngen/metrics.hpp"
#include "test_util.hpp"

namespace {

using sngen::DegreeTriple;
using sngen::DirectedGraph;
using testutil::directed;
using testutil::reciprocal;

std::vector<DegreeTriple> triples(const DirectedGraph& g) {
  std::vector<DegreeTriple> out;
  for (sngen::NodeId v = 0; v < g.node_count(); ++v) out.push_back(g.degree_triple(v));
  return out;
}

double avg_cc(const DirectedGraph& g) {
  const auto nodes = sngen::all_nodes(g);
  return sngen::average_clustering(g, nodes);
}

TEST(NearestRankPercentile, Values) {
  EXPECT_EQ(sngen::nearest_rank_percentile({}, 95), 0u);
  EXPECT_EQ(sngen::nearest_rank_percentile({7}, 50), 7u);
  EXPECT_EQ(sngen::nearest_rank_percentile({4, 1, 3, 2}, 50), 2u);
  EXPECT_EQ(sngen::nearest_rank_percentile({4, 1, 3, 2}, 51), 3u);
  std::vector<std::size_t> hundred(100);
  for (std::size_t i = 0; i < 100; ++i) hundred[i] = 100 - i;
  EXPECT_EQ(sngen::nearest_rank_percentile(hundred, 95), 95u);
  EXPECT_EQ(sngen::nearest_rank_percentile(hundred, 100), 100u);
}

TEST(RewireConfig, Validation) {
  sngen::RewireConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.degree_percentile = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.pair_fraction = 1.5;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.attempts = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

// ---------------------------------------------------------------------------

TEST(RewireStep, ReciprocalCase) {
  // y1=0, y2=1, z1=2, z2=3
  auto g = reciprocal(4, {{0, 2}, {1, 3}});
  const auto before = triples(g);
  EXPECT_TRUE(sngen::rewire_step(g, 0, 1, 2, 3));
  EXPECT_TRUE(g.has_directed_edge(0, 1) && g.has_directed_edge(1, 0));
  EXPECT_TRUE(g.has_directed_edge(2, 3) && g.has_directed_edge(3, 2));
  EXPECT_FALSE(g.connected(0, 2));
  EXPECT_FALSE(g.connected(1, 3));
  EXPECT_EQ(triples(g), before);
}

TEST(RewireStep, OutInCase) {
  // y1 -> z1, z2 -> y2  =>  y1 -> y2, z2 -> z1
  auto g = directed(4, {{0, 2}, {3, 1}});
  const auto before = triples(g);
  EXPECT_TRUE(sngen::rewire_step(g, 0, 1, 2, 3));
  EXPECT_TRUE(g.has_directed_edge(0, 1));
  EXPECT_TRUE(g.has_directed_edge(3, 2));
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(triples(g), before);
}

TEST(RewireStep, InOutCase) {
  // z1 -> y1, y2 -> z2  =>  y2 -> y1, z1 -> z2
  auto g = directed(4, {{2, 0}, {1, 3}});
  const auto before = triples(g);
  EXPECT_TRUE(sngen::rewire_step(g, 0, 1, 2, 3));
  EXPECT_TRUE(g.has_directed_edge(1, 0));
  EXPECT_TRUE(g.has_directed_edge(2, 3));
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(triples(g), before);
}

TEST(RewireStep, MixedShapesDoNothing) {
  for (auto g : {directed(4, {{0, 2}, {1, 3}}), directed(4, {{2, 0}, {3, 1}})}) {
    const auto copy = g;
    EXPECT_FALSE(sngen::rewire_step(g, 0, 1, 2, 3));
    EXPECT_EQ(g, copy);
  }
  auto half = reciprocal(4, {{0, 2}});
  half.add_directed_edge(3, 1);
  const auto copy = half;
  EXPECT_FALSE(sngen::rewire_step(half, 0, 1, 2, 3));
  EXPECT_EQ(half, copy);
}

TEST(RewireStep, PreconditionErrors) {
  auto g = reciprocal(5, {{0, 2}, {1, 3}});
  EXPECT_THROW(sngen::rewire_step(g, 0, 0, 2, 3), std::invalid_argument);
  EXPECT_THROW(sngen::rewire_step(g, 0, 1, 4, 3), std::invalid_argument);  // z1 not adjacent to y1
  g.add_directed_edge(2, 3);
  EXPECT_THROW(sngen::rewire_step(g, 0, 1, 2, 3), std::invalid_argument);  // z1, z2 connected
  auto h = reciprocal(4, {{0, 2}, {1, 3}});
  h.add_directed_edge(1, 0);
  EXPECT_THROW(sngen::rewire_step(h, 0, 1, 2, 3), std::invalid_argument);  // y1, y2 connected
}

// ---------------------------------------------------------------------------

TEST(RewireGraph, PathHasNoOpportunity) {
  auto g = reciprocal(3, {{0, 1}, {1, 2}});
  const auto copy = g;
  sngen::Rng rng{1};
  const auto report = sngen::rewire_graph(g, {}, rng);
  EXPECT_EQ(report.successful, 0u);
  EXPECT_EQ(g, copy);
}

TEST(RewireGraph, ClosesTriangleInSmallInstance) {
  // 1 - 0 - 2 with pendant 3 on 1 and 4 on 2: the only move closes (0, 1, 2).
  auto g = reciprocal(5, {{0, 1}, {0, 2}, {1, 3}, {2, 4}});
  const auto before = triples(g);
  sngen::Rng rng{3};
  const auto report = sngen::rewire_graph(g, {}, rng);
  EXPECT_EQ(report.degree_threshold, 2u);
  EXPECT_EQ(report.candidate_nodes, 3u);
  EXPECT_EQ(report.median_degree, 2u);
  EXPECT_EQ(report.iterations, 3u);
  EXPECT_EQ(report.successful, 1u);
  EXPECT_EQ(report.connected_pairs, 2u);
  EXPECT_EQ(g, reciprocal(5, {{0, 1}, {0, 2}, {1, 2}, {3, 4}}));
  EXPECT_EQ(triples(g), before);
}

TEST(RewireGraph, AlphaCapWarns) {
  sngen::Rng setup{4};
  auto g = sngen::build_graph(testutil::small_model(200, 4.0, 6.0), setup);
  sngen::RewireConfig cfg;
  cfg.max_iterations_per_node = 2;
  std::size_t warnings = 0;
  sngen::log::ScopedSink guard([&](const std::string&) { ++warnings; });
  sngen::Rng rng{5};
  const auto report = sngen::rewire_graph(g, cfg, rng);
  EXPECT_GT(report.capped_nodes, 0u);
  EXPECT_EQ(warnings, report.capped_nodes);
  EXPECT_LE(report.iterations, 2 * report.candidate_nodes);
}

TEST(RewireGraph, PreservesDegreesAndRaisesClustering) {
  sngen::Rng rng{2023};
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 50 + sngen::uniform_index(rng, 200);
    auto g = sngen::build_graph(testutil::small_model(n, 3.0, 4.0), rng);
    const auto before = triples(g);
    const auto edges = g.edge_count();
    const double cc_before = avg_cc(g);
    const auto report = sngen::rewire_graph(g, {}, rng);
    ASSERT_EQ(triples(g), before) << "trial " << trial;
    ASSERT_TRUE(testutil::is_simple_and_consistent(g));
    EXPECT_EQ(g.edge_count(), edges);
    EXPECT_LE(report.successful, report.attempted);
    if (report.successful > 10) { EXPECT_GT(avg_cc(g), cc_before); }
  }
}

TEST(RewireGraph, Deterministic) {
  sngen::Rng setup{8};
  const auto g0 = sngen::build_graph(testutil::small_model(300, 4.0, 5.0), setup);
  auto a = g0, b = g0;
  sngen::Rng ra{77}, rb{77};
  sngen::rewire_graph(a, {}, ra);
  sngen::rewire_graph(b, {}, rb);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, g0);
}

}  // namespace
