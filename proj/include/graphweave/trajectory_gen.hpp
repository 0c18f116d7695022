#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "json.hpp"

#include "graphweave/checkpoint.hpp"
#include "graphweave/graph.hpp"
#include "graphweave/rwt.hpp"
#include "graphweave/smoothed_operator.hpp"

namespace graphweave {

/// Limit of L^k v for v = starting_vector(d, f): w_i = gamma sqrt(d'_i) with
///   gamma = n (sum_j f(d_j) sqrt(d'_j)) / ((sum_j f(d_j)) (sum_j d'_j)).
Vector ending_vector(const DegreeSequence& d, StartFunction f, double alpha);

/// Stacked consecutive trajectory vectors constraining the unknown
/// operator through V1 L = V2. Rows of V2 are the successors of the
/// matching rows of V1.
struct TrajectorySystem {
  Matrix V1;
  Matrix V2;
  DegreeSequence degrees;
  double alpha = 0.9;
  int k = 10;
  std::vector<int> betas;  ///< start functions behind the rows (empty for diagnostic systems)

  int n() const { return static_cast<int>(degrees.size()); }
  int rows() const { return static_cast<int>(V1.rows()); }
};

/// One reverse step: the vector preceding `v` (which sits at index `step`).
using Predictor = std::function<Vector(const Vector& v, int f_id, int step)>;

Predictor model_predictor(const Checkpoint& ckpt);

/// For every f: start from the ending vector at index k and roll back
/// to index 1. V1 holds indices 1..k-1 and V2 indices 2..k, f-major.
/// Throws NumericalError naming (f, step) on a non-finite prediction.
TrajectorySystem generate_trajectories(const Predictor& predict, const DegreeSequence& d,
                                       const std::vector<StartFunction>& functions, double alpha, int k);
TrajectorySystem generate_trajectories(const Checkpoint& ckpt, const DegreeSequence& d);

/// System from true forward trajectories of g: `n_starts` starting vectors
/// with iid entries uniform in [0.5, 1.5], each iterated k times; every
/// consecutive pair (v_j, v_{j+1}), j = 0..k-1, contributes a row.
TrajectorySystem diagnostic_system(const Graph& g, double alpha, int k, int n_starts, std::uint64_t seed);

/// Rows 0..k-1 -> 1..k of the given trajectories.
TrajectorySystem system_from_trajectories(const std::vector<Trajectory>& trajectories, const DegreeSequence& d,
                                          double alpha);

nlohmann::json system_to_json(const TrajectorySystem& sys);

}  // namespace graphweave
