#include <cmath>
#include <limits>

#include "graphweave/error.hpp"
#include "graphweave/graph_infer.hpp"

namespace graphweave {

RoundingResult round_weighted(const Matrix& w, const DegreeSequence& d) {
  const auto n = static_cast<Eigen::Index>(d.size());
  if (w.rows() != n || w.cols() != n) throw PreconditionError("rounding: weight matrix does not match degrees");
  for (int x : d)
    if (x < 1) throw PreconditionError("rounding needs every degree >= 1");

  RoundingResult best;
  if (n < 2 || w.cwiseAbs().maxCoeff() == 0.0) {
    best.graph = Graph(static_cast<int>(n), {});
    best.degree_error = 1.0;
    return best;
  }
  // Grid spans the whole matrix, zero diagonal included.
  const double lo = w.minCoeff(), hi = w.maxCoeff();

  constexpr int kA = 50, kB = 21;
  std::vector<double> log_d(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) log_d[static_cast<std::size_t>(i)] = std::log(static_cast<double>(d[static_cast<std::size_t>(i)]));

  double best_err = std::numeric_limits<double>::infinity();
  for (int ia = 0; ia < kA; ++ia) {
    const double a = lo + (hi - lo) * ia / (kA - 1);
    for (int ib = 0; ib < kB; ++ib) {
      const double b = -0.5 + 1.0 * ib / (kB - 1);
      double err = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double thr = a + b * log_d[static_cast<std::size_t>(i)];
        int count = 0;
        for (Eigen::Index j = 0; j < n; ++j)
          if (j != i && w(i, j) > thr) ++count;
        err += std::abs(static_cast<double>(count) / d[static_cast<std::size_t>(i)] - 1.0);
      }
      err /= static_cast<double>(n);
      if (err < best_err) {
        best_err = err;
        best.a_star = a;
        best.b_star = b;
      }
    }
  }

  std::vector<Edge> edges;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const bool from_i = w(i, j) > best.a_star + best.b_star * log_d[static_cast<std::size_t>(i)];
      const bool from_j = w(j, i) > best.a_star + best.b_star * log_d[static_cast<std::size_t>(j)];
      if (from_i && from_j) edges.push_back({static_cast<int>(i), static_cast<int>(j)});
    }
  best.graph = Graph(static_cast<int>(n), edges);
  best.degree_error = best_err;
  return best;
}

}  // namespace graphweave
