#include "graphweave/error.hpp"
#include "graphweave/graph_infer.hpp"

namespace graphweave {

Matrix adjacency_matrix(const Graph& g) {
  Matrix A = Matrix::Zero(g.num_nodes(), g.num_nodes());
  for (const auto& e : g.edges()) A(e.u, e.v) = A(e.v, e.u) = 1.0;
  return A;
}

Matrix residual_matrix(const Matrix& A, const TrajectorySystem& sys) {
  const auto n = static_cast<Eigen::Index>(sys.degrees.size());
  if (A.rows() != n || A.cols() != n || sys.V1.cols() != n || sys.V2.cols() != n || sys.V1.rows() != sys.V2.rows()) {
    throw PreconditionError("residual: dimension mismatch");
  }
  const Vector s = smoothed_degrees(sys.degrees, sys.alpha).array().rsqrt();
  Matrix M = (1.0 - sys.alpha) * A;
  M.diagonal().array() += sys.alpha;
  return (sys.V1 * s.asDiagonal()) * M * s.asDiagonal() - sys.V2;
}

double residual_objective(const Matrix& A, const TrajectorySystem& sys) {
  return residual_matrix(A, sys).cwiseAbs().sum();
}

double residual_objective(const Graph& g, const TrajectorySystem& sys) {
  if (g.num_nodes() != sys.n()) throw PreconditionError("residual: graph size does not match the system");
  return residual_objective(adjacency_matrix(g), sys);
}

nlohmann::json weights_to_json(const Matrix& weights) {
  std::vector<double> upper;
  for (Eigen::Index i = 0; i < weights.rows(); ++i)
    for (Eigen::Index j = i + 1; j < weights.cols(); ++j) upper.push_back(weights(i, j));
  return {{"n", weights.rows()}, {"upper_triangle", upper}};
}

nlohmann::json telemetry_to_json(const TelemetryRecord& record) {
  return {{"iter", record.iter}, {"objective", record.objective}, {"degree_violation", record.degree_violation}};
}

}  // namespace graphweave
