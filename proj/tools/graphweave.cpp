#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "graphweave/checkpoint.hpp"
#include "graphweave/edge_list.hpp"
#include "graphweave/error.hpp"
#include "graphweave/log.hpp"
#include "graphweave/metrics.hpp"
#include "graphweave/pipeline.hpp"
#include "graphweave/samplers.hpp"

namespace fs = std::filesystem;
using namespace graphweave;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

struct Globals {
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string config_file;
  int workers = 0;
  std::string out;
  std::vector<std::string> overrides;
  bool quiet = false;
};

// Defaults, then the config file, then --set pairs, then dedicated flags.
PipelineConfig resolve_config(const Globals& g) {
  PipelineConfig cfg;
  if (!g.config_file.empty()) cfg.load_file(g.config_file);
  for (const auto& kv : g.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw PreconditionError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (g.seed_set) cfg.seed = g.seed;
  if (g.workers > 0) cfg.workers = g.workers;
  cfg.validate();
  return cfg;
}

fs::path out_dir(const Globals& g) {
  if (g.out.empty()) throw PreconditionError("--out is required");
  fs::create_directories(g.out);
  return g.out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_json(const fs::path& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

std::string numbered(const std::string& prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04zu", i);
  return prefix + buf + ".edges";
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

std::vector<Graph> load_corpus(const fs::path& dir) {
  const auto files = list_edge_files(dir);
  if (files.empty()) throw FormatError("no edge-list files in " + dir.string());
  std::vector<Graph> graphs;
  for (const auto& f : files) graphs.push_back(load_edge_list(f));
  return graphs;
}

std::vector<Metric> parse_metrics(const std::vector<std::string>& names) {
  if (names.empty()) return all_metrics();
  std::vector<Metric> out;
  for (const auto& n : names) out.push_back(parse_metric(n));
  return out;
}

struct SampleArgs {
  std::string family = "sbm";
  std::size_t count = 10;
  int n = 20;
  int n_max = 0;
  std::string fractions = "0.5,0.3,0.2";
  double p = 0.8, q = 0.3;
  int ring_neighbors = 4;
  double rewire = 0.3;
  int edges_per_node = 2;
};

int cmd_sample(const Globals& g, const SampleArgs& a) {
  const PipelineConfig cfg = resolve_config(g);
  const fs::path dir = out_dir(g);
  const auto fractions = parse_list(a.fractions);
  const int n_hi = std::max(a.n, a.n_max);
  json seeds = json::array(), files = json::array();
  for (std::size_t i = 0; i < a.count; ++i) {
    const std::uint64_t s = derive_seed(cfg.seed, 0x73616d706c65ULL, i);
    std::mt19937_64 rng(s);
    const int n = std::uniform_int_distribution<int>(a.n, n_hi)(rng);
    const std::uint64_t gs = rng();
    Graph graph;
    if (a.family == "sbm") {
      graph = sample_sbm(n, fractions, a.p, a.q, gs);
    } else if (a.family == "ws") {
      graph = sample_watts_strogatz(n, a.ring_neighbors, a.rewire, gs);
    } else if (a.family == "ba") {
      graph = sample_barabasi_albert(n, a.edges_per_node, gs);
    } else if (a.family == "chunglu") {
      graph = sample_chung_lu(sample_sbm(n, fractions, a.p, a.q, gs).degrees(), rng());
    } else {
      throw PreconditionError("unknown family '" + a.family + "' (expected sbm, ws, ba or chunglu)");
    }
    const std::string name = numbered("graph_", i);
    save_edge_list(graph, dir / name);
    seeds.push_back(gs);
    files.push_back(name);
  }
  write_json(dir / "manifest.json",
             {{"family", a.family},
              {"params",
               {{"n", a.n},
                {"n_max", n_hi},
                {"fractions", fractions},
                {"p", a.p},
                {"q", a.q},
                {"ring_neighbors", a.ring_neighbors},
                {"rewire", a.rewire},
                {"edges_per_node", a.edges_per_node}}},
              {"count", a.count},
              {"files", files},
              {"seeds", seeds},
              {"config", cfg.to_json()}});
  return kOk;
}

int cmd_train(const Globals& g, const std::string& corpus) {
  const PipelineConfig cfg = resolve_config(g);
  const auto graphs = load_corpus(corpus);
  const fs::path dir = out_dir(g);
  const TrainOutput out = train_pipeline(graphs, cfg);
  save_checkpoint(out.checkpoint, dir / "checkpoint.json");
  json report = train_report_to_json(out.report);
  report["config"] = cfg.to_json();
  report["corpus"] = {{"dir", corpus}, {"graphs", graphs.size()}};
  write_json(dir / "train_report.json", report);
  std::ostringstream csv;
  csv.precision(17);
  csv << "epoch,train_mse,heldout_mse\n";
  csv << 0 << ",," << out.report.initial_heldout_mse << '\n';
  for (std::size_t e = 0; e < out.report.heldout_mse.size(); ++e) {
    csv << e + 1 << ',' << out.report.train_mse[e] << ',' << out.report.heldout_mse[e] << '\n';
  }
  write_text(dir / "loss.csv", csv.str());
  std::cout << "trained on " << out.report.train_pairs << " pairs; held-out MSE " << out.report.initial_heldout_mse
            << " -> " << out.report.final_heldout_mse() << '\n';
  if (out.report.aborted) {
    std::cerr << "error: " << out.report.diagnostic << '\n';
    return kNumerical;
  }
  return kOk;
}

int cmd_generate(const Globals& g, const std::string& checkpoint, std::size_t count, const std::string& source) {
  PipelineConfig cfg = resolve_config(g);
  if (!source.empty()) cfg.degree_source = source;
  cfg.validate();
  const Checkpoint ckpt = load_checkpoint(checkpoint);
  const fs::path dir = out_dir(g);
  const auto results = generate_graphs(ckpt, cfg, count);
  json graphs = json::array();
  std::size_t failures = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    json entry = {{"index", i}};
    if (r.graph) {
      const std::string name = numbered("gen_", i);
      save_edge_list(*r.graph, dir / name);
      entry.update({{"file", name},
                    {"n", r.graph->num_nodes()},
                    {"edges", r.graph->num_edges()},
                    {"solver", r.solver},
                    {"residual", r.residual},
                    {"degree_error", r.degree_error},
                    {"connected", r.connected},
                    {"repaired", r.repaired}});
    } else {
      ++failures;
      entry["error"] = r.error;
      std::cerr << "warning: graph " << i << " failed: " << r.error << '\n';
    }
    graphs.push_back(entry);
  }
  write_json(dir / "manifest.json", {{"checkpoint", checkpoint},
                                     {"count", count},
                                     {"failures", failures},
                                     {"graphs", graphs},
                                     {"config", cfg.to_json()}});
  return count > 0 && failures == count ? kNumerical : kOk;
}

int cmd_eval(const Globals& g, const std::string& gen, const std::string& test, const std::vector<std::string>& names) {
  const PipelineConfig cfg = resolve_config(g);
  const auto metrics = parse_metrics(names);
  ErrorReport report = error_report(fs::path(gen), fs::path(test), metrics, cfg.seed, cfg.workers);
  report.config = cfg.to_json();
  const fs::path dir = out_dir(g);
  write_json(dir / "report.json", report.to_json());
  write_text(dir / "report.csv", report.to_csv());
  std::cout << report.to_csv();
  return kOk;
}

int cmd_recover(const Globals& g, const std::string& graph_file, int n_starts, const std::string& solver) {
  const PipelineConfig cfg = resolve_config(g);
  const Graph graph = load_edge_list(graph_file);
  const RecoveryResult r = recover(graph, n_starts, parse_solver(solver), cfg.seed, cfg);
  json doc = r.to_json();
  doc["graph"] = graph_file;
  doc["n_starts"] = n_starts;
  doc["solver"] = solver;
  doc["config"] = cfg.to_json();
  if (!g.out.empty()) write_json(out_dir(g) / "recover.json", doc);
  std::cout << doc.dump(2) << '\n';
  return kOk;
}

int cmd_stats(const Globals& g, const std::string& input, const std::vector<std::string>& names) {
  const PipelineConfig cfg = resolve_config(g);
  const auto metrics = parse_metrics(names);
  std::vector<fs::path> files;
  if (fs::is_directory(input)) {
    files = list_edge_files(input);
  } else {
    files.push_back(input);
  }
  json graphs = json::array();
  for (const auto& f : files) {
    const Graph graph = load_edge_list(f);
    json entry = {{"file", f.filename().string()}, {"n", graph.num_nodes()}, {"edges", graph.num_edges()},
                  {"connected", is_connected(graph)}};
    for (Metric m : metrics) {
      const auto s = statistic(graph, m, cfg.seed);
      entry["metrics"][to_string(m)] = {{"values", s.values}, {"excluded", s.excluded}};
    }
    graphs.push_back(entry);
  }
  json doc = {{"graphs", graphs}, {"seed", cfg.seed}, {"config", cfg.to_json()}};
  if (!g.out.empty()) {
    write_json(out_dir(g) / "stats.json", doc);
  } else {
    std::cout << doc.dump(2) << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graphweave: random-walk-trajectory graph generation"};
  app.require_subcommand(1);
  Globals g;
  auto* seed_opt = app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--config", g.config_file, "Config file with key = value lines")->check(CLI::ExistingFile);
  app.add_option("--workers", g.workers, "Worker threads for per-graph work");
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--set", g.overrides, "Override a config key (key=value); repeatable");
  app.add_flag("--quiet", g.quiet, "Suppress warnings");

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample", "Sample a corpus of synthetic graphs");
  sample->add_option("--family", sa.family, "sbm, ws, ba or chunglu");
  sample->add_option("--count", sa.count, "Number of graphs");
  sample->add_option("--n", sa.n, "Node count (lower bound when --n-max is given)");
  sample->add_option("--n-max", sa.n_max, "Upper bound of a uniform node count");
  sample->add_option("--fractions", sa.fractions, "SBM community fractions, comma separated");
  sample->add_option("--p", sa.p, "SBM within-block probability");
  sample->add_option("--q", sa.q, "SBM across-block probability");
  sample->add_option("--ring-neighbors", sa.ring_neighbors, "Watts-Strogatz ring neighbours");
  sample->add_option("--rewire", sa.rewire, "Watts-Strogatz rewiring probability");
  sample->add_option("--edges-per-node", sa.edges_per_node, "Barabasi-Albert edges per new node");

  std::string corpus;
  auto* train = app.add_subcommand("train", "Train the reverse predictor on a corpus directory");
  train->add_option("--corpus", corpus, "Directory of edge-list files")->required();

  std::string checkpoint, source;
  std::size_t count = 40;
  auto* generate = app.add_subcommand("generate", "Generate graphs from a checkpoint");
  generate->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  generate->add_option("--count", count, "Number of graphs");
  generate->add_option("--degree-source", source, "perturb[:dir], powerlaw[:dir] or lognormal[:dir]");

  std::string gen_dir, test_dir;
  std::vector<std::string> metric_names;
  auto* eval = app.add_subcommand("eval", "Score generated graphs against test graphs");
  eval->add_option("--gen", gen_dir, "Generated graphs directory")->required();
  eval->add_option("--test", test_dir, "Test graphs directory")->required();
  eval->add_option("--metrics", metric_names, "Subset of metrics")->delimiter(',');

  std::string graph_file, solver = "exact";
  int n_starts = 0;
  auto* recover_cmd = app.add_subcommand("recover", "Recover a known graph from its true trajectories");
  recover_cmd->add_option("--graph", graph_file, "Edge-list file")->required();
  recover_cmd->add_option("--n-starts", n_starts, "Random starting vectors (default n)");
  recover_cmd->add_option("--solver", solver, "exact or convex");

  std::string stats_input;
  auto* stats = app.add_subcommand("stats", "Dump per-graph statistics");
  stats->add_option("--graph", stats_input, "Edge-list file or directory")->required();
  stats->add_option("--metrics", metric_names, "Subset of metrics")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  g.seed_set = seed_opt->count() > 0;
  if (g.quiet) warnings_enabled() = false;

  try {
    if (*sample) return cmd_sample(g, sa);
    if (*train) return cmd_train(g, corpus);
    if (*generate) return cmd_generate(g, checkpoint, count, source);
    if (*eval) return cmd_eval(g, gen_dir, test_dir, metric_names);
    if (*recover_cmd) {
      if (n_starts <= 0) n_starts = load_edge_list(graph_file).num_nodes();
      return cmd_recover(g, graph_file, n_starts, solver);
    }
    if (*stats) return cmd_stats(g, stats_input, metric_names);
  } catch (const PreconditionError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  }
  return kUsage;
}
