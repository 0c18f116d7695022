#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "graphweave/checkpoint.hpp"
#include "graphweave/degree_model.hpp"
#include "graphweave/graph_infer.hpp"
#include "graphweave/training.hpp"

namespace graphweave {

/// Every tunable of the pipeline. Keys accepted by set() and config files:
///
///   alpha k c betas (comma list) seed workers
///   m layers heads ffn lr epochs batch_size holdout_period
///   solver.max_iters solver.lambda solver.delta solver.tolerance
///   n_limit exact_node_budget degree_source flip_fraction ensure_connected
struct PipelineConfig {
  double alpha = 0.9;
  int k = 10;
  double c = 3.0;
  std::vector<int> betas{1, -1, 2, -2};
  ModelConfig model;
  TrainOptions train;
  SolveOptions solver;
  int n_limit = 12;
  std::uint64_t exact_node_budget = 5'000'000;
  /// "perturb", "powerlaw" or "lognormal", optionally ":<graph_dir>".
  std::string degree_source = "perturb";
  double flip_fraction = 0.1;
  bool ensure_connected = false;
  std::uint64_t seed = 0;
  int workers = 1;

  /// Throws PreconditionError for an unknown key or unparsable value.
  void set(const std::string& key, const std::string& value);
  /// Flat "key = value" lines; '#' starts a comment. Throws FormatError.
  void load_file(const std::filesystem::path& path);
  /// Throws PreconditionError when a value is out of range.
  void validate() const;
  std::vector<StartFunction> functions() const;
  nlohmann::json to_json() const;
};

/// Derived seed for item `index` of stream `stream`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

struct TrainOutput {
  Checkpoint checkpoint;
  TrainReport report;
};

/// Trajectories, binning, model construction and training. The checkpoint
/// metadata records the resolved config, the training report and the
/// corpus degree sequences.
TrainOutput train_pipeline(const std::vector<Graph>& corpus, const PipelineConfig& config);

nlohmann::json train_report_to_json(const TrainReport& report);

struct GeneratedGraph {
  std::optional<Graph> graph;
  DegreeSequence degrees;
  std::string solver;
  double residual = 0.0;      ///< residual objective of the output graph
  double degree_error = 0.0;  ///< mean |realised / requested degree - 1|
  bool connected = false;
  bool repaired = false;
  std::string error;  ///< nonempty when generation failed
};

double degree_error(const Graph& g, const DegreeSequence& d);

/// Solves one system: exact below n_limit (falling back to the convex route
/// when the node budget runs out), convex + rounding otherwise.
GeneratedGraph infer_graph(const TrajectorySystem& sys, const PipelineConfig& config, std::uint64_t seed);

/// Degree model named by config.degree_source, fitted on the directory it
/// names or on the corpus degrees stored in the checkpoint.
DegreeModel degree_model_for(const Checkpoint& ckpt, const PipelineConfig& config);

/// Graph `index` of a generation run; never throws, failures land in .error.
GeneratedGraph generate_graph(const Checkpoint& ckpt, const DegreeModel& degrees, const PipelineConfig& config,
                              std::size_t index);

std::vector<GeneratedGraph> generate_graphs(const Checkpoint& ckpt, const PipelineConfig& config, std::size_t count);

enum class SolverKind { Exact, Convex };
SolverKind parse_solver(const std::string& name);

struct RecoveryResult {
  Graph truth;
  Graph recovered;
  std::size_t hamming = 0;
  double truth_objective = 0.0;
  double recovered_objective = 0.0;
  double relaxed_objective = 0.0;  ///< convex only: L1 residual of the weighted solution
  nlohmann::json to_json() const;
};

/// Forward trajectories of g from n_starts random starts, then the chosen solver.
RecoveryResult recover(const Graph& g, int n_starts, SolverKind solver, std::uint64_t seed, const PipelineConfig& config);

}  // namespace graphweave
