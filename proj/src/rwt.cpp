#include "graphweave/rwt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "graphweave/error.hpp"
#include "graphweave/log.hpp"

namespace graphweave {

std::vector<StartFunction> default_start_functions() { return {{1}, {-1}, {2}, {-2}}; }

Vector starting_vector(const DegreeSequence& d, StartFunction f) {
  const auto n = static_cast<Eigen::Index>(d.size());
  if (n == 0) throw PreconditionError("starting vector of an empty degree sequence");
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int di = d[static_cast<std::size_t>(i)];
    if (di < 1) throw PreconditionError("starting vector requires positive degrees");
    v[i] = f(di);
  }
  return v * (static_cast<double>(n) / v.sum());
}

Trajectory build_rwt(const SmoothedOperator& op, const Vector& start, int k) {
  if (k < 1) throw PreconditionError("trajectory needs k >= 1");
  Trajectory t;
  t.alpha = op.alpha();
  t.vectors.reserve(static_cast<std::size_t>(k) + 1);
  t.vectors.push_back(start);
  for (int j = 0; j < k; ++j) t.vectors.push_back(op.apply(t.vectors.back()));
  return t;
}

Trajectory build_rwt(const Graph& g, StartFunction f, double alpha, int k) {
  if (!is_connected(g)) warn("building a trajectory on a disconnected graph");
  SmoothedOperator op(g, alpha);
  Trajectory t = build_rwt(op, starting_vector(g.degrees(), f), k);
  t.f_beta = f.beta;
  return t;
}

std::vector<TrainingPair> build_training_set(const std::vector<Graph>& graphs, const std::vector<StartFunction>& functions,
                                             double alpha, int k) {
  if (graphs.empty() || functions.empty()) throw PreconditionError("training set needs graphs and start functions");
  std::vector<TrainingPair> pairs;
  pairs.reserve(graphs.size() * functions.size() * static_cast<std::size_t>(k));
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    SmoothedOperator op(graphs[gi], alpha);
    for (std::size_t fi = 0; fi < functions.size(); ++fi) {
      Trajectory t = build_rwt(op, starting_vector(graphs[gi].degrees(), functions[fi]), k);
      for (int j = 0; j < k; ++j) {
        TrainingPair p;
        p.target = t.vectors[static_cast<std::size_t>(j)];
        p.input = t.vectors[static_cast<std::size_t>(j) + 1];
        p.f_id = static_cast<int>(fi);
        p.step = j + 1;
        p.graph_id = static_cast<int>(gi);
        pairs.push_back(std::move(p));
      }
    }
  }
  return pairs;
}

int BinningStats::raw_bin(double x) const {
  const double scaled = std::floor(c * (x - mean) / stddev);
  constexpr double lim = static_cast<double>(std::numeric_limits<int>::max() / 2);
  return static_cast<int>(std::clamp(scaled, -lim, lim));
}

int BinningStats::bin(double x) const { return std::clamp(raw_bin(x), bin_lo, bin_hi); }

BinningStats binning_stats(const std::vector<TrainingPair>& pairs, double c) {
  if (pairs.empty()) throw PreconditionError("binning statistics of an empty training set");
  if (!(c > 0.0)) throw PreconditionError("bin-width parameter c must be positive");
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& p : pairs) {
    sum += p.input.sum() + p.target.sum();
    count += static_cast<std::size_t>(p.input.size() + p.target.size());
  }
  const double mean = sum / static_cast<double>(count);
  double sq = 0.0;
  for (const auto& p : pairs) {
    sq += (p.input.array() - mean).square().sum() + (p.target.array() - mean).square().sum();
  }
  const double stddev = std::sqrt(sq / static_cast<double>(count));
  if (!(stddev > 1e-12 * std::max(1.0, std::abs(mean))) || !std::isfinite(stddev)) {
    throw NumericalError("degenerate training data: all trajectory entries are equal");
  }
  BinningStats stats{mean, stddev, c, 0, 0};
  int lo = std::numeric_limits<int>::max(), hi = std::numeric_limits<int>::min();
  for (const auto& p : pairs) {
    for (const Vector* v : {&p.input, &p.target}) {
      for (double x : *v) {
        const int b = stats.raw_bin(x);
        lo = std::min(lo, b);
        hi = std::max(hi, b);
      }
    }
  }
  stats.bin_lo = lo;
  stats.bin_hi = hi;
  return stats;
}

std::vector<int> bin(const Vector& v, const BinningStats& stats) {
  std::vector<int> out(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = stats.bin(v[i]);
  return out;
}

nlohmann::json trajectory_to_json(const Trajectory& t, int k) {
  nlohmann::json vectors = nlohmann::json::array();
  for (const auto& v : t.vectors) vectors.push_back(std::vector<double>(v.data(), v.data() + v.size()));
  return {{"graph_id", t.graph_id}, {"f_beta", t.f_beta}, {"alpha", t.alpha}, {"k", k}, {"vectors", std::move(vectors)}};
}

}  // namespace graphweave
