#pragma once

#include <chrono>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sngen/degree_model.hpp"
#include "sngen/edge_sampler.hpp"
#include "sngen/io.hpp"
#include "sngen/metrics.hpp"
#include "sngen/processes.hpp"
#include "sngen/random.hpp"
#include "sngen/rewirer.hpp"

namespace sngen::cli {

namespace fs = std::filesystem;

/// Files written by a command; removed again unless the command commits.
class OutputSet {
 public:
  OutputSet() = default;
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;
  ~OutputSet() {
    if (committed_) return;
    std::error_code ec;
    for (auto it = files_.rbegin(); it != files_.rend(); ++it) fs::remove(*it, ec);
    for (auto it = dirs_.rbegin(); it != dirs_.rend(); ++it) fs::remove(*it, ec);  // only if empty
  }

  void write(const fs::path& path, std::string_view content) {
    files_.push_back(path);
    io::write_file(path, content);
  }
  void make_dir(const fs::path& dir) {
    if (dir.empty() || fs::exists(dir)) return;
    fs::create_directories(dir);
    dirs_.push_back(dir);
  }
  void commit() { committed_ = true; }

 private:
  std::vector<fs::path> files_;
  std::vector<fs::path> dirs_;
  bool committed_ = false;
};

/// Stage timer feeding the run log.
class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - start_).count();
    start_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct Options {
  std::uint64_t seed = 1;
  std::string config;
  std::string input;
  std::string out;
  std::string histogram;
  bool skip_rewiring = false;
  RewireConfig rewire;
  std::string process = "push_pull";
  double p = 0.1;
  std::size_t reps = 100;
  std::optional<std::size_t> seed_count;
  std::size_t aspl_sample_cap = 20'000;
  std::size_t spectrum_cap = 6'000;
};

inline io::Record echo(const std::string& command, const Options& o) {
  io::Record rec;
  rec.set("command", command);
  rec.set("seed", o.seed);
  if (!o.input.empty()) rec.set("input", o.input);
  if (!o.config.empty()) rec.set("config", o.config);
  return rec;
}

inline io::Record rewire_echo(const RewireConfig& cfg) {
  io::Record rec;
  rec.set("percentile", cfg.degree_percentile);
  rec.set("pair_fraction", cfg.pair_fraction);
  rec.set("attempts", std::uint64_t{cfg.attempts});
  return rec;
}

inline DegreeSequences generate_degrees(const DegreeModel& model, std::uint64_t seed) {
  Rng rng = stage_rng(seed, Stage::kDegrees);
  return sample_correlated_degrees(model, rng);
}

inline DirectedGraph generate_graph(const DegreeModel& model, std::uint64_t seed) {
  const auto seq = generate_degrees(model, seed);
  Rng rng = stage_rng(seed, Stage::kEdges);
  return build_graph_from_degrees(seq, rng);
}

inline PathOptions path_options(const Options& o) {
  PathOptions opts;
  opts.sample_cap = o.aspl_sample_cap;
  opts.seed = derive_seed(o.seed, static_cast<std::uint64_t>(Stage::kMetrics));
  return opts;
}

inline SpreadSpec spread_spec(const Options& o, Process process, std::uint64_t index) {
  SpreadSpec spec;
  spec.process = process;
  spec.p = o.p;
  spec.repetitions = o.reps;
  spec.seed_count = o.seed_count;
  spec.seed = derive_seed(derive_seed(o.seed, static_cast<std::uint64_t>(Stage::kSimulate)), index);
  return spec;
}

inline Process parse_process(const std::string& name) {
  if (name == "push_pull") return Process::kPushPull;
  if (name == "sir") return Process::kSir;
  throw std::invalid_argument("unknown process '" + name + "' (expected push_pull or sir)");
}

// ---------------------------------------------------------------------------
// Commands

inline void cmd_fit(const Options& o, std::ostream& out) {
  OutputSet outputs;
  const auto g = io::read_edge_list(o.input);
  const auto model = fit_degree_model(g);
  auto rec = echo("fit", o);
  rec.append(io::model_record(model));
  const auto text = rec.format("sngen degree model");
  if (o.out.empty()) {
    out << text;
  } else {
    outputs.write(o.out, text);
  }
  outputs.commit();
}

inline void cmd_generate(const Options& o, std::ostream& out) {
  OutputSet outputs;
  Stopwatch clock;
  const auto model = io::model_from_record(io::read_record(o.config));
  const auto g = generate_graph(model, o.seed);
  const double elapsed = clock.lap();
  const auto edges = io::format_edge_list(g);
  auto log = echo("generate", o);
  log.set("nodes", std::uint64_t{g.node_count()});
  log.set("edges", std::uint64_t{g.edge_count()});
  log.set("expected_edges", model.expected_edge_entries());
  log.set("runtime.generate_s", elapsed);
  if (o.out.empty()) {
    out << edges;
  } else {
    outputs.write(o.out, edges);
    outputs.write(o.out + ".log", log.format("sngen run log"));
  }
  outputs.commit();
}

inline void cmd_rewire(const Options& o, std::ostream& out) {
  OutputSet outputs;
  Stopwatch clock;
  auto g = io::read_edge_list(o.input);
  Rng rng = stage_rng(o.seed, Stage::kRewire);
  const auto report = rewire_graph(g, o.rewire, rng);
  const double elapsed = clock.lap();
  auto log = echo("rewire", o);
  log.append(rewire_echo(o.rewire), "rewire.");
  log.append(io::rewire_record(report), "report.");
  log.set("runtime.rewire_s", elapsed);
  if (o.out.empty()) {
    out << io::format_edge_list(g);
  } else {
    outputs.write(o.out, io::format_edge_list(g));
    outputs.write(o.out + ".log", log.format("sngen run log"));
    out << io::rewire_record(report).format("rewire report");
  }
  outputs.commit();
}

inline void cmd_metrics(const Options& o, std::ostream& out) {
  OutputSet outputs;
  const auto g = io::read_edge_list(o.input);
  auto rec = echo("metrics", o);
  rec.append(io::stats_record(stats_report(g, path_options(o))));
  if (o.out.empty()) {
    out << rec.format("sngen graph stats");
  } else {
    outputs.write(o.out, rec.format("sngen graph stats"));
  }
  if (!o.histogram.empty()) {
    const auto lwcc = connected_components(g).lwcc;
    outputs.write(o.histogram, io::histogram_text(spectrum_histogram(laplacian_spectrum(g, lwcc, o.spectrum_cap))));
  }
  outputs.commit();
}

inline void cmd_simulate(const Options& o, std::ostream& out) {
  OutputSet outputs;
  const auto g = io::read_edge_list(o.input);
  const auto spec = spread_spec(o, parse_process(o.process), 0);
  auto rec = echo("simulate", o);
  rec.append(io::spread_record(spec, run_experiment(g, spec)));
  if (o.out.empty()) {
    out << rec.format("sngen spreading results");
  } else {
    outputs.write(o.out, rec.format("sngen spreading results"));
  }
  outputs.commit();
}

/// fit-or-config, generate, rewire (unless skipped), measure, simulate.
/// Writes model.conf, graph.tsv, stats.txt, results.txt and run.log to o.out.
inline void cmd_pipeline(const Options& o, std::ostream& out) {
  OutputSet outputs;
  const fs::path dir = o.out;
  outputs.make_dir(dir);
  Stopwatch clock;
  auto log = echo("pipeline", o);
  log.set("skip_rewiring", o.skip_rewiring);
  log.append(rewire_echo(o.rewire), "rewire.");

  DegreeModel model;
  if (!o.config.empty()) {
    model = io::model_from_record(io::read_record(o.config));
  } else {
    model = fit_degree_model(io::read_edge_list(o.input));
  }
  log.set("runtime.model_s", clock.lap());

  auto g = generate_graph(model, o.seed);
  log.set("intermediary.edges", std::uint64_t{g.edge_count()});
  log.set("expected_edges", model.expected_edge_entries());
  log.set("runtime.generate_s", clock.lap());

  if (!o.skip_rewiring) {
    Rng rng = stage_rng(o.seed, Stage::kRewire);
    log.append(io::rewire_record(rewire_graph(g, o.rewire, rng)), "report.");
    log.set("runtime.rewire_s", clock.lap());
  }

  const auto stats = stats_report(g, path_options(o));
  log.set("runtime.metrics_s", clock.lap());
  if (!o.histogram.empty()) {
    const auto lwcc = connected_components(g).lwcc;
    outputs.write(o.histogram, io::histogram_text(spectrum_histogram(laplacian_spectrum(g, lwcc, o.spectrum_cap))));
    log.set("runtime.spectrum_s", clock.lap());
  }

  io::Record results = echo("pipeline", o);
  const auto push = spread_spec(o, Process::kPushPull, 0);
  results.append(io::spread_record(push, run_experiment(g, push)), "push_pull.");
  const auto sir_spec = spread_spec(o, Process::kSir, 1);
  results.append(io::spread_record(sir_spec, run_experiment(g, sir_spec)), "sir.");
  log.set("runtime.simulate_s", clock.lap());

  auto model_rec = echo("pipeline", o);
  model_rec.append(io::model_record(model));
  auto stats_rec = echo("pipeline", o);
  stats_rec.append(io::stats_record(stats));

  outputs.write(dir / "model.conf", model_rec.format("sngen degree model"));
  outputs.write(dir / "graph.tsv", io::format_edge_list(g));
  outputs.write(dir / "stats.txt", stats_rec.format("sngen graph stats"));
  outputs.write(dir / "results.txt", results.format("sngen spreading results"));
  outputs.write(dir / "run.log", log.format("sngen run log"));
  out << stats_rec.format("sngen graph stats");
  outputs.commit();
}

// ---------------------------------------------------------------------------

/// Parses `args` (without the program name) and runs one subcommand.
/// Returns the process exit status.
inline int dispatch(const std::vector<std::string>& args, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
  CLI::App app{"Generate, rewire, measure and simulate directed social-network graphs", "sngen"};
  app.require_subcommand(1);
  Options o;

  auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", o.seed, "Master seed")->capture_default_str(); };
  auto add_out = [&](CLI::App* sub, const char* what) { sub->add_option("--out", o.out, what); };
  auto add_rewire = [&](CLI::App* sub) {
    sub->add_option("--percentile", o.rewire.degree_percentile, "Upper total-degree percentile")
        ->capture_default_str();
    sub->add_option("--pair-fraction", o.rewire.pair_fraction, "Neighbour-pair fraction above the median")
        ->capture_default_str();
    sub->add_option("--attempts", o.rewire.attempts, "Second-degree sampling attempts")->capture_default_str();
  };
  auto add_caps = [&](CLI::App* sub) {
    sub->add_option("--aspl-sample-cap", o.aspl_sample_cap, "LWCC size above which ASPL is sampled")
        ->capture_default_str();
    sub->add_option("--spectrum-cap", o.spectrum_cap, "Largest LWCC for the dense spectrum")->capture_default_str();
    sub->add_option("--histogram", o.histogram, "Write the normalized-Laplacian eigenvalue histogram here");
  };
  auto add_spread = [&](CLI::App* sub) {
    sub->add_option("--p", o.p, "SIR infection probability")->capture_default_str();
    sub->add_option("--reps", o.reps, "Repetitions")->capture_default_str();
    sub->add_option("--seed-count", o.seed_count, "Initially informed/infected nodes (default ceil(2 ln n))");
  };

  auto* fit = app.add_subcommand("fit", "Fit a degree model to an edge list");
  fit->add_option("input", o.input, "Edge list")->required();
  add_out(fit, "Model config path (default stdout)");
  add_seed(fit);

  auto* generate = app.add_subcommand("generate", "Sample an intermediary graph from a degree model");
  generate->add_option("--config", o.config, "Model config")->required();
  add_out(generate, "Edge list path (default stdout)");
  add_seed(generate);

  auto* rewire = app.add_subcommand("rewire", "Rewire an edge list to raise clustering");
  rewire->add_option("input", o.input, "Edge list")->required();
  add_out(rewire, "Rewired edge list path (default stdout)");
  add_seed(rewire);
  add_rewire(rewire);

  auto* metrics = app.add_subcommand("metrics", "Compute topological features of an edge list");
  metrics->add_option("input", o.input, "Edge list")->required();
  add_out(metrics, "Stats record path (default stdout)");
  add_seed(metrics);
  add_caps(metrics);

  auto* simulate = app.add_subcommand("simulate", "Run push-pull or SIR on the LWCC of an edge list");
  simulate->add_option("input", o.input, "Edge list")->required();
  simulate->add_option("--process", o.process, "push_pull or sir")->capture_default_str();
  add_out(simulate, "Results record path (default stdout)");
  add_seed(simulate);
  add_spread(simulate);

  auto* pipeline = app.add_subcommand("pipeline", "Fit or load a model, then generate, rewire, measure, simulate");
  pipeline->add_option("input", o.input, "Edge list to fit (alternative to --config)");
  pipeline->add_option("--config", o.config, "Model config");
  pipeline->add_option("--out", o.out, "Output directory")->required();
  pipeline->add_flag("--skip-rewiring", o.skip_rewiring, "Stop at the intermediary graph");
  add_seed(pipeline);
  add_rewire(pipeline);
  add_caps(pipeline);
  add_spread(pipeline);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    o.rewire.validate();
    if (generate->parsed()) {
      cmd_generate(o, out);
    } else if (fit->parsed()) {
      cmd_fit(o, out);
    } else if (rewire->parsed()) {
      cmd_rewire(o, out);
    } else if (metrics->parsed()) {
      cmd_metrics(o, out);
    } else if (simulate->parsed()) {
      cmd_simulate(o, out);
    } else if (pipeline->parsed()) {
      if (o.config.empty() == o.input.empty()) {
        throw std::invalid_argument("pipeline needs exactly one of an input edge list or --config");
      }
      cmd_pipeline(o, out);
    }
  } catch (const std::exception& e) {
    err << "sngen: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace sngen::cli
