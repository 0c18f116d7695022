#pragma once

#include <Eigen/Dense>

#include "graphweave/graph.hpp"

namespace graphweave {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Smoothed normalized adjacency
///
///   L_ij = ((1 - alpha) A_ij + alpha [i == j]) / sqrt(d'_i d'_j),
///   d'_i = (1 - alpha) d_i + alpha.
///
/// Applied matrix-free in O(n + |E|). The vector of sqrt(d'_i) is a fixed
/// point of the operator.
class SmoothedOperator {
 public:
  /// Requires alpha in (0, 1) and every degree >= 1.
  SmoothedOperator(Graph g, double alpha);

  /// Same as the constructor but also admits alpha = 0. Only meant for
  /// inspecting the unsmoothed operator; trajectories need alpha > 0.
  static SmoothedOperator diagnostic(Graph g, double alpha);

  int size() const { return graph_.num_nodes(); }
  double alpha() const { return alpha_; }
  const Graph& graph() const { return graph_; }
  const Vector& smoothed_degrees() const { return smoothed_; }
  const Vector& inv_sqrt_smoothed_degrees() const { return inv_sqrt_; }

  Vector apply(const Vector& x) const;
  Matrix dense() const;

 private:
  SmoothedOperator(Graph g, double alpha, bool allow_zero);

  Graph graph_;
  double alpha_;
  Vector smoothed_;
  Vector inv_sqrt_;
};

/// d'_i = (1 - alpha) d_i + alpha for an arbitrary degree sequence.
Vector smoothed_degrees(const DegreeSequence& d, double alpha);

struct SpectralReport {
  double lambda_max;
  double lambda_min;
  Vector top_eigenvector;  ///< unit norm, oriented to a positive sum
  double residual;         ///< ||L u - lambda_max u||
};

/// Full symmetric eigendecomposition of the dense operator. Requires a
/// connected graph. Throws NumericalError when the solver does not converge.
SpectralReport spectral_check(const Graph& g, double alpha);

}  // namespace graphweave
