#include "graphweave/trajectory_gen.hpp"

#include <cmath>
#include <random>

#include "graphweave/error.hpp"

namespace graphweave {

Vector ending_vector(const DegreeSequence& d, StartFunction f, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw PreconditionError("alpha must lie in (0, 1)");
  if (d.empty()) throw PreconditionError("empty degree sequence");
  for (int x : d)
    if (x < 1) throw PreconditionError("ending vector needs every degree >= 1");
  const Vector dp = smoothed_degrees(d, alpha);
  const Vector root = dp.array().sqrt();
  double sum_f = 0.0, sum_f_root = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double fi = f(d[i]);
    sum_f += fi;
    sum_f_root += fi * root[static_cast<Eigen::Index>(i)];
  }
  const double gamma = static_cast<double>(d.size()) * sum_f_root / (sum_f * dp.sum());
  return gamma * root;
}

Predictor model_predictor(const Checkpoint& ckpt) {
  return [&ckpt](const Vector& v, int f_id, int step) {
    return forward(ckpt.params, ckpt.config, v, f_id, step, ckpt.stats);
  };
}

TrajectorySystem generate_trajectories(const Predictor& predict, const DegreeSequence& d,
                                       const std::vector<StartFunction>& functions, double alpha, int k) {
  if (k < 2) throw PreconditionError("generation needs k >= 2");
  if (functions.empty()) throw PreconditionError("no start functions");
  const int n = static_cast<int>(d.size());
  const int per_f = k - 1;
  TrajectorySystem sys;
  sys.degrees = d;
  sys.alpha = alpha;
  sys.k = k;
  sys.V1.resize(static_cast<Eigen::Index>(functions.size()) * per_f, n);
  sys.V2.resize(sys.V1.rows(), n);
  for (std::size_t fi = 0; fi < functions.size(); ++fi) {
    sys.betas.push_back(functions[fi].beta);
    // traj[j] is the vector at index j; traj[k] is the ending vector.
    std::vector<Vector> traj(static_cast<std::size_t>(k) + 1);
    traj[static_cast<std::size_t>(k)] = ending_vector(d, functions[fi], alpha);
    for (int s = k; s >= 2; --s) {
      Vector prev = predict(traj[static_cast<std::size_t>(s)], static_cast<int>(fi), s);
      if (prev.size() != n || !prev.allFinite()) {
        throw NumericalError("rollout produced a non-finite vector (f=" + std::to_string(fi) +
                             ", step=" + std::to_string(s) + ")");
      }
      traj[static_cast<std::size_t>(s) - 1] = std::move(prev);
    }
    const auto base = static_cast<Eigen::Index>(fi) * per_f;
    for (int j = 1; j <= k - 1; ++j) {
      sys.V1.row(base + j - 1) = traj[static_cast<std::size_t>(j)].transpose();
      sys.V2.row(base + j - 1) = traj[static_cast<std::size_t>(j) + 1].transpose();
    }
  }
  return sys;
}

TrajectorySystem generate_trajectories(const Checkpoint& ckpt, const DegreeSequence& d) {
  return generate_trajectories(model_predictor(ckpt), d, ckpt.functions, ckpt.alpha, ckpt.k);
}

TrajectorySystem system_from_trajectories(const std::vector<Trajectory>& trajectories, const DegreeSequence& d,
                                          double alpha) {
  if (trajectories.empty()) throw PreconditionError("no trajectories");
  const int k = trajectories.front().steps();
  const auto n = static_cast<Eigen::Index>(d.size());
  TrajectorySystem sys;
  sys.degrees = d;
  sys.alpha = alpha;
  sys.k = k;
  sys.V1.resize(static_cast<Eigen::Index>(trajectories.size()) * k, n);
  sys.V2.resize(sys.V1.rows(), n);
  Eigen::Index r = 0;
  for (const auto& t : trajectories) {
    if (t.steps() != k) throw PreconditionError("trajectories of different lengths");
    for (int j = 0; j < k; ++j, ++r) {
      sys.V1.row(r) = t.vectors[static_cast<std::size_t>(j)].transpose();
      sys.V2.row(r) = t.vectors[static_cast<std::size_t>(j) + 1].transpose();
    }
  }
  return sys;
}

TrajectorySystem diagnostic_system(const Graph& g, double alpha, int k, int n_starts, std::uint64_t seed) {
  if (n_starts < 1 || k < 1) throw PreconditionError("diagnostic system needs n_starts >= 1 and k >= 1");
  const SmoothedOperator op(g, alpha);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  std::vector<Trajectory> trajectories;
  for (int s = 0; s < n_starts; ++s) {
    Vector v(g.num_nodes());
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = u(rng);
    trajectories.push_back(build_rwt(op, v, k));
  }
  return system_from_trajectories(trajectories, g.degrees(), alpha);
}

nlohmann::json system_to_json(const TrajectorySystem& sys) {
  auto rows = [](const Matrix& m) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      std::vector<double> row(static_cast<std::size_t>(m.cols()));
      for (Eigen::Index c = 0; c < m.cols(); ++c) row[static_cast<std::size_t>(c)] = m(r, c);
      out.push_back(row);
    }
    return out;
  };
  return {{"degrees", sys.degrees}, {"alpha", sys.alpha}, {"k", sys.k}, {"F", sys.betas},
          {"V1", rows(sys.V1)},     {"V2", rows(sys.V2)}};
}

}  // namespace graphweave
