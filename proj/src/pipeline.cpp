#include "graphweave/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <random>
#include <sstream>

#include "graphweave/edge_list.hpp"
#include "graphweave/error.hpp"
#include "graphweave/log.hpp"
#include "graphweave/parallel.hpp"
#include "graphweave/trajectory_gen.hpp"

namespace graphweave {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) throw PreconditionError("invalid value '" + value + "' for " + key);
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "on" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "off" || value == "no") return false;
  throw PreconditionError("invalid boolean '" + value + "' for " + key);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index);
}

void PipelineConfig::set(const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "alpha") {
    alpha = parse_number<double>(key, value);
  } else if (key == "k") {
    k = parse_number<int>(key, value);
  } else if (key == "c") {
    c = parse_number<double>(key, value);
  } else if (key == "betas") {
    betas.clear();
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) betas.push_back(parse_number<int>(key, trim(item)));
  } else if (key == "seed") {
    seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "workers") {
    workers = parse_number<int>(key, value);
  } else if (key == "m") {
    model.m = parse_number<int>(key, value);
  } else if (key == "layers") {
    model.n_layers = parse_number<int>(key, value);
  } else if (key == "heads") {
    model.n_heads = parse_number<int>(key, value);
  } else if (key == "ffn") {
    model.ffn_hidden = parse_number<int>(key, value);
  } else if (key == "lr") {
    train.learning_rate = parse_number<double>(key, value);
  } else if (key == "epochs") {
    train.epochs = parse_number<int>(key, value);
  } else if (key == "batch_size") {
    train.batch_size = parse_number<int>(key, value);
  } else if (key == "holdout_period") {
    train.holdout_period = parse_number<int>(key, value);
  } else if (key == "solver.max_iters") {
    solver.max_iters = parse_number<int>(key, value);
  } else if (key == "solver.lambda") {
    solver.lambda = parse_number<double>(key, value);
  } else if (key == "solver.delta") {
    solver.huber_delta = parse_number<double>(key, value);
  } else if (key == "solver.tolerance") {
    solver.tolerance = parse_number<double>(key, value);
  } else if (key == "n_limit") {
    n_limit = parse_number<int>(key, value);
  } else if (key == "exact_node_budget") {
    exact_node_budget = parse_number<std::uint64_t>(key, value);
  } else if (key == "degree_source") {
    degree_source = value;
  } else if (key == "flip_fraction") {
    flip_fraction = parse_number<double>(key, value);
  } else if (key == "ensure_connected") {
    ensure_connected = parse_bool(key, value);
  } else {
    throw PreconditionError("unknown config key '" + key + "'");
  }
}

void PipelineConfig::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open config file " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    }
    try {
      set(trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const PreconditionError& e) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void PipelineConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw PreconditionError("alpha must lie in (0, 1)");
  if (k < 2) throw PreconditionError("k must be at least 2");
  if (!(c > 0.0)) throw PreconditionError("c must be positive");
  if (betas.empty()) throw PreconditionError("betas must not be empty");
  if (workers < 1) throw PreconditionError("workers must be at least 1");
  if (!(flip_fraction >= 0.0 && flip_fraction <= 1.0)) throw PreconditionError("flip_fraction must lie in [0, 1]");
  if (n_limit < 0) throw PreconditionError("n_limit must be non-negative");
  ModelConfig mc = model;
  mc.validate();
  const auto colon = degree_source.find(':');
  parse_degree_family(degree_source.substr(0, colon));
}

std::vector<StartFunction> PipelineConfig::functions() const {
  std::vector<StartFunction> out;
  for (int b : betas) out.push_back({b});
  return out;
}

nlohmann::json PipelineConfig::to_json() const {
  return {{"alpha", alpha},
          {"k", k},
          {"c", c},
          {"betas", betas},
          {"seed", seed},
          {"workers", workers},
          {"m", model.m},
          {"layers", model.n_layers},
          {"heads", model.n_heads},
          {"ffn", model.ffn_hidden},
          {"lr", train.learning_rate},
          {"epochs", train.epochs},
          {"batch_size", train.batch_size},
          {"holdout_period", train.holdout_period},
          {"solver.max_iters", solver.max_iters},
          {"solver.lambda", solver.lambda},
          {"solver.delta", solver.huber_delta},
          {"solver.tolerance", solver.tolerance},
          {"n_limit", n_limit},
          {"exact_node_budget", exact_node_budget},
          {"degree_source", degree_source},
          {"flip_fraction", flip_fraction},
          {"ensure_connected", ensure_connected}};
}

nlohmann::json train_report_to_json(const TrainReport& r) {
  return {{"initial_train_mse", r.initial_train_mse},
          {"initial_heldout_mse", r.initial_heldout_mse},
          {"final_heldout_mse", r.final_heldout_mse()},
          {"train_mse", r.train_mse},
          {"heldout_mse", r.heldout_mse},
          {"epochs_run", r.epochs_run},
          {"train_pairs", r.train_pairs},
          {"heldout_pairs", r.heldout_pairs},
          {"checksum", r.checksum},
          {"aborted", r.aborted},
          {"diagnostic", r.diagnostic}};
}

TrainOutput train_pipeline(const std::vector<Graph>& corpus, const PipelineConfig& config) {
  if (corpus.empty()) throw PreconditionError("training corpus is empty");
  config.validate();
  const auto functions = config.functions();
  const auto pairs = build_training_set(corpus, functions, config.alpha, config.k);
  const BinningStats stats = binning_stats(pairs, config.c);

  ModelConfig mc = config.model;
  mc.num_bins = stats.num_bins();
  mc.n_functions = static_cast<int>(functions.size());
  mc.max_step = config.k;
  mc.seed = derive_seed(config.seed, 0x6d6f64656cULL, 0);
  TrainOptions opts = config.train;
  opts.seed = derive_seed(config.seed, 0x747261696eULL, 0);

  TrainResult result = train(init_model(mc), mc, pairs, stats, opts);

  TrainOutput out;
  out.report = result.report;
  auto& ckpt = out.checkpoint;
  ckpt.config = mc;
  ckpt.params = std::move(result.params);
  ckpt.stats = stats;
  ckpt.functions = functions;
  ckpt.alpha = config.alpha;
  ckpt.k = config.k;
  nlohmann::json degrees = nlohmann::json::array();
  for (const auto& g : corpus) degrees.push_back(g.degrees());
  ckpt.metadata = {{"config", config.to_json()},
                   {"train_report", train_report_to_json(result.report)},
                   {"corpus_degrees", degrees}};
  return out;
}

double degree_error(const Graph& g, const DegreeSequence& d) {
  if (static_cast<int>(d.size()) != g.num_nodes() || d.empty()) throw PreconditionError("degree_error: size mismatch");
  double err = 0.0;
  for (int v = 0; v < g.num_nodes(); ++v) {
    const double want = d[static_cast<std::size_t>(v)];
    err += want > 0 ? std::abs(g.degree(v) / want - 1.0) : (g.degree(v) > 0 ? 1.0 : 0.0);
  }
  return err / static_cast<double>(d.size());
}

GeneratedGraph infer_graph(const TrajectorySystem& sys, const PipelineConfig& config, std::uint64_t seed) {
  GeneratedGraph out;
  out.degrees = sys.degrees;
  std::optional<Graph> g;
  if (sys.n() <= config.n_limit) {
    try {
      ExactOptions eo;
      eo.n_limit = config.n_limit;
      eo.node_budget = config.exact_node_budget;
      g = solve_exact_detailed(sys, eo).graph;
      out.solver = "exact";
    } catch (const ScopeError& e) {
      warn(std::string(e.what()) + "; falling back to convex + rounding");
    }
  }
  if (!g) {
    SolveOptions so = config.solver;
    so.seed = seed;
    const ConvexResult relaxed = solve_convex(sys, so);
    g = round_weighted(relaxed.weights, sys.degrees).graph;
    out.solver = "convex";
  }
  if (config.ensure_connected && !is_connected(*g)) {
    bool ok = false;
    Graph fixed = repair_connectivity(*g, derive_seed(seed, 0x726570616972ULL, 0), &ok);
    out.repaired = ok;
    g = std::move(fixed);
  }
  out.residual = residual_objective(*g, sys);
  out.degree_error = degree_error(*g, sys.degrees);
  out.connected = is_connected(*g);
  out.graph = std::move(g);
  return out;
}

DegreeModel degree_model_for(const Checkpoint& ckpt, const PipelineConfig& config) {
  const auto colon = config.degree_source.find(':');
  const DegreeFamily family = parse_degree_family(config.degree_source.substr(0, colon));
  std::vector<DegreeSequence> sources;
  if (colon != std::string::npos) {
    const std::filesystem::path dir = config.degree_source.substr(colon + 1);
    const auto files = list_edge_files(dir);
    if (files.empty()) throw FormatError("no edge-list files in degree source " + dir.string());
    for (const auto& f : files) sources.push_back(load_edge_list(f).degrees());
  } else {
    if (!ckpt.metadata.contains("corpus_degrees")) {
      throw FormatError("checkpoint carries no corpus degrees; name a directory with degree_source=<mode>:<dir>");
    }
    for (const auto& d : ckpt.metadata.at("corpus_degrees")) sources.push_back(d.get<DegreeSequence>());
  }
  return fit_degree_model(sources, family, config.flip_fraction);
}

GeneratedGraph generate_graph(const Checkpoint& ckpt, const DegreeModel& degrees, const PipelineConfig& config,
                              std::size_t index) {
  const std::uint64_t seed = derive_seed(config.seed, 0x67656eULL, index);
  GeneratedGraph out;
  try {
    std::mt19937_64 rng(seed);
    const auto& src = degrees.sources[std::uniform_int_distribution<std::size_t>(0, degrees.sources.size() - 1)(rng)];
    const DegreeSequence d = sample_degrees(degrees, static_cast<int>(src.size()), rng());
    out.degrees = d;
    const TrajectorySystem sys = generate_trajectories(ckpt, d);
    out = infer_graph(sys, config, rng());
  } catch (const std::exception& e) {
    out.graph.reset();
    out.error = e.what();
  }
  return out;
}

std::vector<GeneratedGraph> generate_graphs(const Checkpoint& ckpt, const PipelineConfig& config, std::size_t count) {
  const DegreeModel model = degree_model_for(ckpt, config);
  std::vector<GeneratedGraph> out(count);
  parallel_for(count, config.workers, [&](std::size_t i) { out[i] = generate_graph(ckpt, model, config, i); });
  return out;
}

SolverKind parse_solver(const std::string& name) {
  if (name == "exact") return SolverKind::Exact;
  if (name == "convex") return SolverKind::Convex;
  throw PreconditionError("unknown solver '" + name + "' (expected exact or convex)");
}

nlohmann::json RecoveryResult::to_json() const {
  return {{"n", truth.num_nodes()},
          {"hamming", hamming},
          {"truth_objective", truth_objective},
          {"recovered_objective", recovered_objective},
          {"relaxed_objective", relaxed_objective},
          {"recovered_edges", recovered.num_edges()}};
}

RecoveryResult recover(const Graph& g, int n_starts, SolverKind solver, std::uint64_t seed, const PipelineConfig& config) {
  const TrajectorySystem sys = diagnostic_system(g, config.alpha, config.k, n_starts, seed);
  RecoveryResult out;
  out.truth = g;
  if (solver == SolverKind::Exact) {
    ExactOptions eo;
    eo.n_limit = config.n_limit;
    eo.node_budget = config.exact_node_budget;
    out.recovered = solve_exact_detailed(sys, eo).graph;
  } else {
    SolveOptions so = config.solver;
    so.seed = seed;
    const ConvexResult relaxed = solve_convex(sys, so);
    out.relaxed_objective = relaxed.l1_residual;
    out.recovered = round_weighted(relaxed.weights, sys.degrees).graph;
  }
  out.hamming = hamming_distance(g, out.recovered);
  out.truth_objective = residual_objective(g, sys);
  out.recovered_objective = residual_objective(out.recovered, sys);
  return out;
}

}  // namespace graphweave
