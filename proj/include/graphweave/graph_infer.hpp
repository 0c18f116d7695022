#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"

#include "graphweave/graph.hpp"
#include "graphweave/trajectory_gen.hpp"

namespace graphweave {

/// Dense 0/1 adjacency matrix of g.
Matrix adjacency_matrix(const Graph& g);

/// X = V1 S ((1 - alpha) A + alpha I) S - V2 with S = diag(1 / sqrt(d'))
/// built from sys.degrees (not from A).
Matrix residual_matrix(const Matrix& A, const TrajectorySystem& sys);

/// Entrywise L1 norm of residual_matrix.
double residual_objective(const Matrix& A, const TrajectorySystem& sys);
double residual_objective(const Graph& g, const TrajectorySystem& sys);

struct SolveOptions {
  int max_iters = 4000;
  double learning_rate = 1.0;  ///< initial step; adapted by backtracking
  double lambda = 10.0;        ///< degree penalty weight
  double huber_delta = 1e-3;
  double tolerance = 1e-10;  ///< relative objective change that ends a smoothing stage
  std::uint64_t seed = 0;
  bool record_telemetry = false;
};

struct TelemetryRecord {
  int iter;
  double objective;
  double degree_violation;  ///< ||A 1 - d||_2
};

struct ConvexResult {
  Matrix weights;            ///< symmetric, zero diagonal, entries in [0, 1]
  double objective = 0.0;    ///< smoothed residual + degree penalty at weights
  double l1_residual = 0.0;  ///< unsmoothed residual_objective at weights
  int iterations = 0;
  std::vector<TelemetryRecord> telemetry;  ///< accepted iterates (objective non-increasing)
};

/// Huber-smoothed residual + lambda ||A 1 - d||^2 over the upper triangle,
/// minimised by monotone accelerated projected gradient onto [0, 1].
/// The smoothing width is annealed down to opts.huber_delta; the best
/// iterate under the final width is returned.
ConvexResult solve_convex(const TrajectorySystem& sys, const SolveOptions& opts = {});

/// Value and gradient (upper-triangle, row-major) of the smoothed objective.
double convex_objective(const Matrix& A, const TrajectorySystem& sys, double lambda, double delta,
                        std::vector<double>* grad = nullptr);

struct RoundingResult {
  Graph graph;
  double a_star = 0.0;
  double b_star = 0.0;
  double degree_error = 0.0;
};

/// Threshold A_ij = [w_ij > a + b log d_i] with (a, b) chosen on a 50 x 21
/// grid to minimise the mean relative degree error of the raw indicator.
/// An edge is kept only when it fires from both endpoints.
RoundingResult round_weighted(const Matrix& weights, const DegreeSequence& d);

struct ExactOptions {
  int n_limit = 12;
  std::uint64_t node_budget = 5'000'000;  ///< 0 = unlimited
};

struct ExactResult {
  Graph graph;
  double objective = 0.0;
  std::uint64_t nodes = 0;
};

/// Depth-first branch and bound over upper-triangle entries, row-major,
/// for the 0/1 program with A = A^T, zero trace and A 1 = d.
/// Throws ScopeError when n > n_limit or the node budget runs out and
/// InfeasibleError when no assignment meets the degrees.
ExactResult solve_exact_detailed(const TrajectorySystem& sys, const ExactOptions& opts = {});
Graph solve_exact(const TrajectorySystem& sys, int n_limit = 12);

/// Havel-Hakimi realisation of d shuffled by random double-edge swaps.
/// Throws InfeasibleError for non-graphical d.
Graph random_degree_feasible(const DegreeSequence& d, std::uint64_t seed);

/// Degree-preserving double-edge swaps between components until connected
/// or 10 n attempts. On failure warns and returns g unchanged.
Graph repair_connectivity(const Graph& g, std::uint64_t seed, bool* success = nullptr);

/// {n, upper_triangle} with the strict upper triangle row-major.
nlohmann::json weights_to_json(const Matrix& weights);
nlohmann::json telemetry_to_json(const TelemetryRecord& record);

}  // namespace graphweave
