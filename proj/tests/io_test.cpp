#include "sngen/io.hpp"

#include <gtest/gtest.h>

#include <filesystem>

#include "sngen/edge_sampler.hpp"
#include "test_util.hpp"

namespace {

namespace fs = std::filesystem;
using sngen::DirectedGraph;
using sngen::io::ParseError;
using testutil::reciprocal;

std::string error_of(std::string_view text) {
  try {
    sngen::io::parse_edge_list(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("sngen_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name())) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

TEST(EdgeList, ReadReciprocalPair) {
  const auto g = sngen::io::parse_edge_list("0\t1\n1\t0\n");
  EXPECT_EQ(g.node_count(), 2u);
  EXPECT_EQ(g.degree_triple(0), (sngen::DegreeTriple{1, 0, 0}));
}

TEST(EdgeList, HeaderDeclaresIsolatedNodes) {
  const auto g = sngen::io::parse_edge_list("# nodes=5\n0 1\n\n# comment\n3\t1\n");
  EXPECT_EQ(g.node_count(), 5u);
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_TRUE(g.has_directed_edge(3, 1));
}

TEST(EdgeList, Errors) {
  EXPECT_EQ(error_of("0\t1\n3 3\n"), "self-loop at line 2");
  EXPECT_EQ(error_of("0\t1\nx\t2\n"), "parse error at line 2");
  EXPECT_EQ(error_of("0\t1 2\n"), "parse error at line 1");
  EXPECT_EQ(error_of("7\n"), "parse error at line 1");
  EXPECT_EQ(error_of("# nodes=3\n0\t1\n0\t3\n"), "ID out of range at line 3");
  EXPECT_EQ(error_of("0\t1\n1\t2\n0\t1\n"), "duplicate entry at line 3");
  EXPECT_EQ(error_of("0\t1\n# nodes=3\n"), "misplaced nodes header at line 2");
  EXPECT_EQ(error_of("-1\t2\n"), "parse error at line 1");
}

TEST(EdgeList, CanonicalFormat) {
  EXPECT_EQ(sngen::io::format_edge_list(DirectedGraph(3)), "# nodes=3\n");
  EXPECT_EQ(sngen::io::format_edge_list(reciprocal(2, {{0, 1}})), "# nodes=2\n0\t1\n1\t0\n");
  // Insertion order does not matter.
  DirectedGraph a(3), b(3);
  a.add_directed_edge(2, 0);
  a.add_directed_edge(0, 2);
  a.add_directed_edge(0, 1);
  b.add_directed_edge(0, 1);
  b.add_directed_edge(0, 2);
  b.add_directed_edge(2, 0);
  EXPECT_EQ(sngen::io::format_edge_list(a), sngen::io::format_edge_list(b));
  EXPECT_EQ(sngen::io::format_edge_list(a), "# nodes=3\n0\t1\n0\t2\n2\t0\n");
}

TEST(EdgeList, FileRoundTripIsByteIdentical) {
  TempDir dir;
  sngen::Rng rng{3};
  const auto g = sngen::build_graph(testutil::small_model(500, 3.0, 4.0), rng);
  sngen::io::write_edge_list(g, dir / "a.tsv");
  const auto back = sngen::io::read_edge_list(dir / "a.tsv");
  EXPECT_EQ(back, g);
  sngen::io::write_edge_list(back, dir / "b.tsv");
  EXPECT_EQ(sngen::io::read_file(dir / "a.tsv"), sngen::io::read_file(dir / "b.tsv"));
  EXPECT_THROW(sngen::io::read_edge_list(dir / "missing.tsv"), std::runtime_error);
}

TEST(Record, FormatParseRoundTrip) {
  sngen::io::Record rec;
  rec.set("name", "value with spaces");
  rec.set("x", 0.1);
  rec.set("n", std::uint64_t{42});
  rec.set("flag", true);
  rec.set("missing", std::optional<double>{});
  rec.set("x", 0.25);  // overwrite keeps position
  const auto text = rec.format("title");
  EXPECT_EQ(text, "# title\nname = value with spaces\nx = 0.25\nn = 42\nflag = true\nmissing = NA\n");
  const auto back = sngen::io::Record::parse(text);
  EXPECT_EQ(back.entries(), rec.entries());
  EXPECT_EQ(back.get_number<double>("x"), 0.25);
  EXPECT_EQ(back.get_number<int>("n"), 42);
  EXPECT_THROW(back.get("nope"), ParseError);
  EXPECT_THROW(back.get_number<double>("name"), ParseError);
}

TEST(Record, ParseErrors) {
  EXPECT_THROW(sngen::io::Record::parse("a = 1\nno equals sign\n"), ParseError);
  EXPECT_THROW(sngen::io::Record::parse("= 3\n"), ParseError);
  EXPECT_THROW(sngen::io::Record::parse("a = 1\na = 2\n"), ParseError);
}

TEST(Record, DoublesRoundTripExactly) {
  for (double x : {0.1, 1.0 / 3.0, 2.6666666666666665, 1e-300, 123456789.125}) {
    EXPECT_EQ(sngen::io::parse_number<double>(sngen::io::format_double(x)), x);
  }
}

TEST(ModelRecord, RoundTrip) {
  sngen::DegreeModel m;
  m.nodes = 459;
  m.recip = {1.7, 2.3};
  m.indeg = {0.9, 8.1};
  m.outdeg = {1.1, 7.3};
  m.corr = {0.465, 0.606, 0.24};
  m.mode = sngen::DegreeMode::kIndependent;
  const auto back = sngen::io::model_from_record(sngen::io::Record::parse(sngen::io::model_record(m).format()));
  EXPECT_EQ(back.nodes, m.nodes);
  EXPECT_EQ(back.recip, m.recip);
  EXPECT_EQ(back.indeg, m.indeg);
  EXPECT_EQ(back.outdeg, m.outdeg);
  EXPECT_EQ(back.corr, m.corr);
  EXPECT_EQ(back.mode, m.mode);
}

TEST(ModelRecord, MeanAndSdForm) {
  const auto m = sngen::io::model_from_record(sngen::io::Record::parse(
      "nodes = 10\nrecip.mean = 12\nrecip.sd = 8\nin.mean = 4\nin.sd = 4\nout.dof = 2\nout.scale = 1\n"
      "rho1 = 0.5\nrho2 = 0.6\nrho3 = 0.3\n"));
  EXPECT_NEAR(m.recip.dof, 4.5, 1e-12);
  EXPECT_NEAR(m.recip.scale, 64.0 / 24.0, 1e-12);
  EXPECT_EQ(m.outdeg, (sngen::ScaledChiSquare{2.0, 1.0}));
  EXPECT_EQ(m.mode, sngen::DegreeMode::kCorrelated);
}

TEST(ModelRecord, Errors) {
  const std::string base = "nodes = 10\nin.mean = 4\nin.sd = 4\nout.mean = 4\nout.sd = 4\nrho1 = 0.5\nrho2 = 0.6\n";
  using sngen::io::Record;
  EXPECT_THROW(sngen::io::model_from_record(Record::parse(base + "recip.mean = 1\nrecip.sd = 1\n")), ParseError);
  EXPECT_THROW(sngen::io::model_from_record(Record::parse(base + "rho3 = 1.5\nrecip.mean = 1\nrecip.sd = 1\n")),
               ParseError);
  EXPECT_THROW(
      sngen::io::model_from_record(Record::parse(base + "rho3 = 0.1\nrecip.dof = -1\nrecip.scale = 1\n")),
      ParseError);
  EXPECT_THROW(
      sngen::io::model_from_record(Record::parse(base + "rho3 = 0.1\nrecip.mean = 0\nrecip.sd = 1\n")),
      std::invalid_argument);
  EXPECT_THROW(sngen::io::model_from_record(
                   Record::parse(base + "rho3 = 0.1\nrecip.mean = 1\nrecip.sd = 1\nmode = other\n")),
               ParseError);
}

TEST(StatsRecord, KeysMirrorFields) {
  const auto s = sngen::stats_report(testutil::directed(3, {{0, 1}, {1, 2}, {2, 0}}));
  const auto rec = sngen::io::stats_record(s);
  std::vector<std::string> keys;
  for (const auto& [k, v] : rec.entries()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"nodes", "edges", "density", "lscc_size", "lwcc_size", "density_lwcc",
                                            "aspl_lwcc", "diameter_lwcc", "avg_cc_lwcc", "rho1", "rho2", "rho3",
                                            "aspl_estimated"}));
  EXPECT_EQ(rec.get("density"), "0.5");
  EXPECT_EQ(rec.get("diameter_lwcc"), "1");
  EXPECT_EQ(rec.get("rho3"), "NA");
}

TEST(SpreadRecord, PerRunList) {
  sngen::SpreadSpec spec;
  spec.process = sngen::Process::kSir;
  spec.p = 0.05;
  spec.repetitions = 3;
  sngen::SpreadSummary summary;
  summary.per_run = {0.5, 0.25, 0.75};
  summary.mean = 0.5;
  summary.stddev = 0.25;
  summary.lwcc_size = 8;
  const auto rec = sngen::io::spread_record(spec, summary);
  EXPECT_EQ(rec.get("process"), "sir");
  EXPECT_EQ(rec.get("p"), "0.05");
  EXPECT_EQ(rec.get("per_run"), "0.5,0.25,0.75");
  EXPECT_FALSE(rec.contains("incomplete"));
}

TEST(Histogram, TwoColumns) {
  EXPECT_EQ(sngen::io::histogram_text({{0.5, 3}, {1.5, 0}}), "0.5\t3\n1.5\t0\n");
}

}  // namespace
