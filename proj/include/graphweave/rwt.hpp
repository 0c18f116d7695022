#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"

#include "graphweave/graph.hpp"
#include "graphweave/smoothed_operator.hpp"

namespace graphweave {

/// f(d) = d^beta.
struct StartFunction {
  int beta = 1;
  double operator()(double degree) const { return std::pow(degree, beta); }
};

/// {d, 1/d, d^2, 1/d^2}
std::vector<StartFunction> default_start_functions();

/// v_i = n f(d_i) / sum_j f(d_j). Entries sum to n.
Vector starting_vector(const DegreeSequence& d, StartFunction f);

struct Trajectory {
  int graph_id = 0;
  int f_id = 0;
  int f_beta = 1;
  double alpha = 0.0;
  std::vector<Vector> vectors;  ///< v, Lv, ..., L^k v

  int steps() const { return static_cast<int>(vectors.size()) - 1; }
};

/// k-step smoothed random-walk trajectory starting from `start`.
Trajectory build_rwt(const SmoothedOperator& op, const Vector& start, int k);

/// Trajectory from the degree-based starting vector. Warns when g is
/// disconnected (the trajectory still exists but has no unique limit).
Trajectory build_rwt(const Graph& g, StartFunction f, double alpha, int k);

/// One reverse-prediction example: predict `target` (v_j) from `input`
/// (v_{j+1}), trajectory vectors numbered v_0 = v, ..., v_k = L^k v.
struct TrainingPair {
  Vector input;
  Vector target;
  int f_id = 0;
  int step = 0;  ///< index of `input` within its trajectory (1..k); v_0 is the start
  int graph_id = 0;

  int size() const { return static_cast<int>(input.size()); }
};

/// |graphs| * |F| * k pairs, graph-major, then function, then step.
std::vector<TrainingPair> build_training_set(const std::vector<Graph>& graphs, const std::vector<StartFunction>& functions,
                                             double alpha, int k);

struct BinningStats {
  double mean = 0.0;
  double stddev = 1.0;
  double c = 3.0;
  int bin_lo = 0;
  int bin_hi = 0;

  int num_bins() const { return bin_hi - bin_lo + 1; }
  /// floor(c (x - mean) / stddev) without clamping.
  int raw_bin(double x) const;
  /// Raw bin clamped into [bin_lo, bin_hi].
  int bin(double x) const;
  /// Clamped bin shifted to 0..num_bins()-1 for table lookup.
  int index(double x) const { return bin(x) - bin_lo; }
};

/// Mean and population standard deviation over every entry of every input
/// and target vector. Throws NumericalError when the entries are constant.
BinningStats binning_stats(const std::vector<TrainingPair>& pairs, double c);

/// Elementwise clamped bins.
std::vector<int> bin(const Vector& v, const BinningStats& stats);

nlohmann::json trajectory_to_json(const Trajectory& t, int k);

}  // namespace graphweave
