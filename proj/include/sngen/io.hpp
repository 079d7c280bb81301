#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sngen/degree_model.hpp"
#include "sngen/graph.hpp"
#include "sngen/metrics.hpp"
#include "sngen/processes.hpp"
#include "sngen/rewirer.hpp"

namespace sngen::io {

/// Raised for malformed input files; the message carries the line number.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Text helpers

/// Shortest representation that parses back to the same double.
inline std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) throw std::runtime_error("cannot format number");
  return {buf, end};
}

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
  s = trim(s);
  T value{};
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || end != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw std::runtime_error("I/O failure writing " + path.string());
}

// ---------------------------------------------------------------------------
// Edge lists: optional "# nodes=N" header, then "src<TAB>dst" lines.

inline std::string format_edge_list(const DirectedGraph& g) {
  std::string out = "# nodes=" + std::to_string(g.node_count()) + "\n";
  out.reserve(out.size() + g.edge_count() * 12);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const std::string src = std::to_string(v) + '\t';
    for (const NodeId u : g.out_neighbors(v)) {
      out += src;
      out += std::to_string(u);
      out += '\n';
    }
  }
  return out;
}

inline DirectedGraph parse_edge_list(std::string_view text) {
  std::optional<std::size_t> declared_nodes;
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::vector<std::size_t> line_of;
  std::size_t line_no = 0;
  std::size_t max_id_plus_one = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    const std::string_view raw = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;
    const std::string where = " at line " + std::to_string(line_no);
    if (line.front() == '#') {
      const auto body = trim(line.substr(1));
      if (body.starts_with("nodes=")) {
        if (declared_nodes || !edges.empty()) throw ParseError("misplaced nodes header" + where);
        declared_nodes = parse_number<std::size_t>(body.substr(6));
        if (!declared_nodes) throw ParseError("parse error" + where);
      }
      continue;
    }
    const auto split = line.find_first_of(" \t");
    if (split == std::string_view::npos) throw ParseError("parse error" + where);
    const auto src = parse_number<NodeId>(line.substr(0, split));
    const auto dst = parse_number<NodeId>(line.substr(split + 1));
    if (!src || !dst) throw ParseError("parse error" + where);
    if (*src == *dst) throw ParseError("self-loop" + where);
    if (declared_nodes && (*src >= *declared_nodes || *dst >= *declared_nodes)) {
      throw ParseError("ID out of range" + where);
    }
    edges.emplace_back(*src, *dst);
    line_of.push_back(line_no);
    max_id_plus_one = std::max<std::size_t>(max_id_plus_one, std::max(*src, *dst) + std::size_t{1});
  }
  DirectedGraph g(declared_nodes.value_or(max_id_plus_one));
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (g.has_directed_edge(edges[e].first, edges[e].second)) {
      throw ParseError("duplicate entry at line " + std::to_string(line_of[e]));
    }
    g.add_directed_edge(edges[e].first, edges[e].second);
  }
  return g;
}

inline DirectedGraph read_edge_list(const std::filesystem::path& path) { return parse_edge_list(read_file(path)); }

inline void write_edge_list(const DirectedGraph& g, const std::filesystem::path& path) {
  write_file(path, format_edge_list(g));
}

// ---------------------------------------------------------------------------
// Key-value records: "key = value" lines, '#' comments, key order preserved.

class Record {
 public:
  Record& set(std::string key, std::string value) {
    for (auto& [k, v] : entries_) {
      if (k == key) {
        v = std::move(value);
        return *this;
      }
    }
    entries_.emplace_back(std::move(key), std::move(value));
    return *this;
  }
  Record& set(std::string key, double value) { return set(std::move(key), format_double(value)); }
  Record& set(std::string key, std::uint64_t value) { return set(std::move(key), std::to_string(value)); }
  Record& set(std::string key, bool value) { return set(std::move(key), std::string(value ? "true" : "false")); }
  Record& set(std::string key, const char* value) { return set(std::move(key), std::string(value)); }
  template <typename T>
  Record& set(std::string key, const std::optional<T>& value) {
    if (value) return set(std::move(key), *value);
    return set(std::move(key), std::string("NA"));
  }
  Record& set(std::string key, std::uint32_t value) { return set(std::move(key), std::uint64_t{value}); }

  void append(const Record& other, const std::string& prefix = "") {
    for (const auto& [k, v] : other.entries_) set(prefix + k, v);
  }

  bool contains(std::string_view key) const { return find(key) != nullptr; }

  const std::string& get(std::string_view key) const {
    const auto* v = find(key);
    if (!v) throw ParseError("missing key '" + std::string(key) + "'");
    return *v;
  }

  template <typename T>
  T get_number(std::string_view key) const {
    const auto parsed = parse_number<T>(get(key));
    if (!parsed) throw ParseError("key '" + std::string(key) + "' is not a valid number");
    return *parsed;
  }

  const std::vector<std::pair<std::string, std::string>>& entries() const noexcept { return entries_; }

  std::string format(std::string_view title = {}) const {
    std::string out;
    if (!title.empty()) out += "# " + std::string(title) + "\n";
    for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
    return out;
  }

  static Record parse(std::string_view text) {
    Record rec;
    std::size_t line_no = 0;
    while (!text.empty()) {
      const auto eol = text.find('\n');
      const auto line = trim(text.substr(0, eol));
      text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
      ++line_no;
      if (line.empty() || line.front() == '#') continue;
      const auto eq = line.find('=');
      const auto key = eq == std::string_view::npos ? std::string_view{} : trim(line.substr(0, eq));
      if (key.empty()) throw ParseError("expected 'key = value' at line " + std::to_string(line_no));
      if (rec.contains(key)) throw ParseError("duplicate key '" + std::string(key) + "' at line " + std::to_string(line_no));
      rec.entries_.emplace_back(std::string(key), std::string(trim(line.substr(eq + 1))));
    }
    return rec;
  }

 private:
  const std::string* find(std::string_view key) const {
    for (const auto& [k, v] : entries_) {
      if (k == key) return &v;
    }
    return nullptr;
  }

  std::vector<std::pair<std::string, std::string>> entries_;
};

inline Record read_record(const std::filesystem::path& path) { return Record::parse(read_file(path)); }

// ---------------------------------------------------------------------------
// Model config

inline Record model_record(const DegreeModel& model) {
  Record rec;
  rec.set("nodes", std::uint64_t{model.nodes});
  rec.set("mode", model.mode == DegreeMode::kCorrelated ? "correlated" : "independent");
  const std::pair<const char*, const ScaledChiSquare*> marginals[] = {
      {"recip", &model.recip}, {"in", &model.indeg}, {"out", &model.outdeg}};
  for (const auto& [name, dist] : marginals) {
    rec.set(std::string(name) + ".dof", dist->dof);
    rec.set(std::string(name) + ".scale", dist->scale);
  }
  rec.set("rho1", model.corr.recip_in);
  rec.set("rho2", model.corr.recip_out);
  rec.set("rho3", model.corr.in_out);
  return rec;
}

/// Reads a model. Each marginal is given either as `<name>.dof` and
/// `<name>.scale`, or as `<name>.mean` and `<name>.sd`.
inline DegreeModel model_from_record(const Record& rec) {
  DegreeModel model;
  model.nodes = rec.get_number<std::size_t>("nodes");
  if (model.nodes < 1) throw ParseError("model needs at least one node");
  if (rec.contains("mode")) {
    const auto& mode = rec.get("mode");
    if (mode == "correlated") {
      model.mode = DegreeMode::kCorrelated;
    } else if (mode == "independent") {
      model.mode = DegreeMode::kIndependent;
    } else {
      throw ParseError("unknown mode '" + mode + "'");
    }
  }
  auto marginal = [&](const std::string& name) {
    if (rec.contains(name + ".dof") || rec.contains(name + ".scale")) {
      ScaledChiSquare dist{rec.get_number<double>(name + ".dof"), rec.get_number<double>(name + ".scale")};
      if (!(dist.dof > 0.0) || !(dist.scale > 0.0)) throw ParseError(name + " marginal needs positive dof and scale");
      return dist;
    }
    return ScaledChiSquare::from_moments(rec.get_number<double>(name + ".mean"), rec.get_number<double>(name + ".sd"));
  };
  model.recip = marginal("recip");
  model.indeg = marginal("in");
  model.outdeg = marginal("out");
  model.corr = {rec.get_number<double>("rho1"), rec.get_number<double>("rho2"), rec.get_number<double>("rho3")};
  for (const double rho : {model.corr.recip_in, model.corr.recip_out, model.corr.in_out}) {
    if (!(std::fabs(rho) <= 1.0)) throw ParseError("rank correlations must lie in [-1, 1]");
  }
  return model;
}

// ---------------------------------------------------------------------------
// Reports

inline Record stats_record(const GraphStats& s) {
  Record rec;
  rec.set("nodes", std::uint64_t{s.nodes});
  rec.set("edges", std::uint64_t{s.edges});
  rec.set("density", s.density);
  rec.set("lscc_size", std::uint64_t{s.lscc_size});
  rec.set("lwcc_size", std::uint64_t{s.lwcc_size});
  rec.set("density_lwcc", s.density_lwcc);
  rec.set("aspl_lwcc", s.aspl_lwcc);
  rec.set("diameter_lwcc", s.diameter_lwcc);
  rec.set("avg_cc_lwcc", s.avg_cc_lwcc);
  rec.set("rho1", s.rho1);
  rec.set("rho2", s.rho2);
  rec.set("rho3", s.rho3);
  rec.set("aspl_estimated", s.aspl_estimated);
  return rec;
}

inline Record rewire_record(const RewireReport& r) {
  Record rec;
  rec.set("candidate_nodes", std::uint64_t{r.candidate_nodes});
  rec.set("degree_threshold", std::uint64_t{r.degree_threshold});
  rec.set("median_degree", std::uint64_t{r.median_degree});
  rec.set("iterations", r.iterations);
  rec.set("connected_pairs", r.connected_pairs);
  rec.set("empty_candidates", r.empty_candidates);
  rec.set("exhausted", r.exhausted);
  rec.set("attempted", r.attempted);
  rec.set("successful", r.successful);
  rec.set("capped_nodes", std::uint64_t{r.capped_nodes});
  return rec;
}

inline Record spread_record(const SpreadSpec& spec, const SpreadSummary& summary) {
  Record rec;
  rec.set("process", spec.process == Process::kPushPull ? "push_pull" : "sir");
  if (spec.process == Process::kSir) rec.set("p", spec.p);
  rec.set("repetitions", std::uint64_t{spec.repetitions});
  rec.set("lwcc_size", std::uint64_t{summary.lwcc_size});
  rec.set("mean", summary.mean);
  rec.set("stddev", summary.stddev);
  if (spec.process == Process::kPushPull) rec.set("incomplete", std::uint64_t{summary.incomplete});
  std::string runs;
  for (std::size_t i = 0; i < summary.per_run.size(); ++i) {
    if (i) runs += ',';
    runs += format_double(summary.per_run[i]);
  }
  rec.set("per_run", runs);
  return rec;
}

inline std::string histogram_text(const std::vector<HistogramBin>& hist) {
  std::string out;
  for (const auto& bin : hist) out += format_double(bin.center) + '\t' + std::to_string(bin.count) + '\n';
  return out;
}

}  // namespace sngen::io
