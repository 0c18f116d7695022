#include <algorithm>
#include <cmath>
#include <limits>

#include "graphweave/error.hpp"
#include "graphweave/graph_infer.hpp"

namespace graphweave {

namespace {

// Precomputed pieces of X = (1 - alpha) (B A) S + C, B = V1 S, C = alpha B S - V2.
class Problem {
 public:
  Problem(const TrajectorySystem& sys, double lambda)
      : n_(sys.n()), alpha_(sys.alpha), lambda_(lambda), d_(sys.degrees.size()) {
    if (sys.V1.cols() != n_ || sys.V2.cols() != n_ || sys.V1.rows() != sys.V2.rows()) {
      throw PreconditionError("convex solve: dimension mismatch");
    }
    s_ = smoothed_degrees(sys.degrees, sys.alpha).array().rsqrt();
    B_ = sys.V1 * s_.asDiagonal();
    C_ = alpha_ * B_ * s_.asDiagonal() - sys.V2;
    for (Eigen::Index i = 0; i < d_.size(); ++i) d_[i] = sys.degrees[static_cast<std::size_t>(i)];
  }

  Matrix residual(const Matrix& A) const { return (1.0 - alpha_) * (B_ * A) * s_.asDiagonal() + C_; }

  double degree_violation(const Matrix& A) const { return (A.rowwise().sum() - d_).norm(); }

  // Smoothed objective; optional symmetric gradient matrix (zero diagonal).
  double value(const Matrix& A, double delta, Matrix* grad) const {
    const Matrix X = residual(A);
    const Vector r = A.rowwise().sum() - d_;
    double f = 0.0;
    for (Eigen::Index i = 0; i < X.size(); ++i) {
      const double x = std::abs(X.data()[i]);
      f += x <= delta ? x * x / (2.0 * delta) : x - 0.5 * delta;
    }
    f += lambda_ * r.squaredNorm();
    if (grad) {
      const Matrix H = (X / delta).cwiseMax(-1.0).cwiseMin(1.0);
      const Matrix G = (1.0 - alpha_) * B_.transpose() * (H * s_.asDiagonal());
      *grad = G + G.transpose();
      for (Eigen::Index i = 0; i < n_; ++i)
        for (Eigen::Index j = 0; j < n_; ++j) (*grad)(i, j) += 2.0 * lambda_ * (r[i] + r[j]);
      grad->diagonal().setZero();
    }
    return f;
  }

  Eigen::Index n() const { return n_; }

 private:
  Eigen::Index n_;
  double alpha_;
  double lambda_;
  Vector d_;
  Vector s_;
  Matrix B_;
  Matrix C_;
};

Matrix project(Matrix A) {
  A = A.cwiseMax(0.0).cwiseMin(1.0);
  A.diagonal().setZero();
  return A;
}

// Sums over the strict upper triangle of symmetric matrices.
double upper_dot(const Matrix& a, const Matrix& b) { return 0.5 * a.cwiseProduct(b).sum(); }

}  // namespace

double convex_objective(const Matrix& A, const TrajectorySystem& sys, double lambda, double delta,
                        std::vector<double>* grad) {
  const Problem prob(sys, lambda);
  Matrix G;
  const double f = prob.value(A, delta, grad ? &G : nullptr);
  if (grad) {
    grad->clear();
    for (Eigen::Index i = 0; i < prob.n(); ++i)
      for (Eigen::Index j = i + 1; j < prob.n(); ++j) grad->push_back(G(i, j));
  }
  return f;
}

ConvexResult solve_convex(const TrajectorySystem& sys, const SolveOptions& opts) {
  if (sys.n() < 2) throw PreconditionError("convex solve needs n >= 2");
  if (!(opts.max_iters > 0 && opts.learning_rate > 0 && opts.lambda >= 0 && opts.huber_delta > 0 &&
        opts.tolerance > 0)) {
    throw PreconditionError("invalid solve options");
  }
  const Problem prob(sys, opts.lambda);
  const auto n = prob.n();

  std::vector<double> deltas;
  for (double dl = 0.1; dl > opts.huber_delta * 1.0000001; dl *= 0.1) deltas.push_back(dl);
  deltas.push_back(opts.huber_delta);
  const double target = opts.huber_delta;

  double mean_degree = 0.0;
  for (int x : sys.degrees) mean_degree += x;
  mean_degree /= static_cast<double>(n);
  Matrix x = project(Matrix::Constant(n, n, std::clamp(mean_degree / static_cast<double>(n - 1), 0.0, 1.0)));

  ConvexResult out;
  out.weights = x;
  out.objective = prob.value(x, target, nullptr);
  if (!std::isfinite(out.objective)) throw NumericalError("convex solve: non-finite objective at the start point");
  auto record = [&](int iter, const Matrix& A, double f) {
    if (f < out.objective || iter == 0) {
      out.objective = f;
      out.weights = A;
      if (opts.record_telemetry) out.telemetry.push_back({iter, f, prob.degree_violation(A)});
    }
  };
  record(0, x, out.objective);

  double eta = opts.learning_rate;
  int iter = 0;
  int budget_left = opts.max_iters;
  for (std::size_t stage = 0; stage < deltas.size(); ++stage) {
    const double delta = deltas[stage];
    const bool last = stage + 1 == deltas.size();
    const int stage_budget = last ? budget_left : budget_left / static_cast<int>(deltas.size() - stage);
    const int stage_end = iter + stage_budget;

    Matrix y = x, gy, z;
    double fx = prob.value(x, delta, nullptr);
    double t = 1.0;
    while (iter < stage_end) {
      ++iter;
      const double fy = prob.value(y, delta, &gy);
      if (!std::isfinite(fy)) {
        throw NumericalError("convex solve: non-finite objective at iteration " + std::to_string(iter) +
                             " (step " + std::to_string(eta) + ")");
      }
      double fz = 0.0;
      eta *= 1.5;
      for (;;) {
        z = project(y - eta * gy);
        fz = prob.value(z, delta, nullptr);
        const Matrix step = z - y;
        if (fz <= fy + upper_dot(gy, step) + upper_dot(step, step) / (2.0 * eta) + 1e-15 * std::abs(fy)) break;
        eta *= 0.5;
        if (eta < 1e-30) break;
      }
      if (eta < 1e-30) break;

      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      if (fz <= fx) {
        const double rel = (fx - fz) / std::max(std::abs(fx), std::numeric_limits<double>::min());
        y = z + ((t - 1.0) / t_next) * (z - x);
        x = z;
        fx = fz;
        t = t_next;
        if (last) record(iter, x, fx);
        if (rel < opts.tolerance || fx == 0.0) break;
      } else {
        // Rejected: restart momentum from the incumbent.
        y = x;
        t = 1.0;
      }
    }
    if (!last) record(iter, x, prob.value(x, target, nullptr));
    budget_left = opts.max_iters - iter;
    if (budget_left <= 0 && !last) {
      // Out of iterations before reaching the final width.
      record(iter, x, prob.value(x, target, nullptr));
      break;
    }
  }
  out.iterations = iter;
  out.l1_residual = residual_objective(out.weights, sys);
  return out;
}

}  // namespace graphweave
