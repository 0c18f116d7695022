#include "graphweave/smoothed_operator.hpp"

#include <cmath>
#include <string>

#include "graphweave/error.hpp"

namespace graphweave {

SmoothedOperator::SmoothedOperator(Graph g, double alpha) : SmoothedOperator(std::move(g), alpha, false) {}

SmoothedOperator SmoothedOperator::diagnostic(Graph g, double alpha) { return SmoothedOperator(std::move(g), alpha, true); }

SmoothedOperator::SmoothedOperator(Graph g, double alpha, bool allow_zero) : graph_(std::move(g)), alpha_(alpha) {
  const bool alpha_ok = allow_zero ? (alpha >= 0.0 && alpha < 1.0) : (alpha > 0.0 && alpha < 1.0);
  if (!alpha_ok) throw PreconditionError("smoothing parameter out of range: " + std::to_string(alpha));
  const int n = graph_.num_nodes();
  smoothed_.resize(n);
  inv_sqrt_.resize(n);
  for (int i = 0; i < n; ++i) {
    if (graph_.degree(i) < 1) throw PreconditionError("node " + std::to_string(i) + " has degree 0");
    smoothed_[i] = (1.0 - alpha) * graph_.degree(i) + alpha;
    inv_sqrt_[i] = 1.0 / std::sqrt(smoothed_[i]);
  }
}

Vector SmoothedOperator::apply(const Vector& x) const {
  const int n = size();
  if (x.size() != n) throw PreconditionError("operator size mismatch");
  const Vector scaled = x.cwiseProduct(inv_sqrt_);
  Vector y(n);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j : graph_.neighbors(i)) acc += scaled[j];
    y[i] = inv_sqrt_[i] * ((1.0 - alpha_) * acc + alpha_ * scaled[i]);
  }
  return y;
}

Matrix SmoothedOperator::dense() const {
  const int n = size();
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = alpha_ * inv_sqrt_[i] * inv_sqrt_[i];
    for (int j : graph_.neighbors(i)) m(i, j) = (1.0 - alpha_) * inv_sqrt_[i] * inv_sqrt_[j];
  }
  return m;
}

Vector smoothed_degrees(const DegreeSequence& d, double alpha) {
  Vector out(static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) out[static_cast<Eigen::Index>(i)] = (1.0 - alpha) * d[i] + alpha;
  return out;
}

SpectralReport spectral_check(const Graph& g, double alpha) {
  if (!is_connected(g)) throw PreconditionError("spectral_check requires a connected graph");
  SmoothedOperator op(g, alpha);
  const Matrix dense = op.dense();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(dense);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigensolver did not converge (n = " + std::to_string(g.num_nodes()) + ")");
  }
  const auto& values = solver.eigenvalues();  // ascending
  const Eigen::Index top = values.size() - 1;
  Vector u = solver.eigenvectors().col(top);
  if (u.sum() < 0) u = -u;
  const double residual = (dense * u - values[top] * u).norm();
  if (!std::isfinite(residual) || residual > 1e-6) {
    throw NumericalError("eigenpair residual too large: " + std::to_string(residual));
  }
  return {values[top], values[0], u, residual};
}

}  // namespace graphweave
