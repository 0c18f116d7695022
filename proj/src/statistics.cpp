#include <algorithm>
#include <cmath>
#include <queue>
#include <random>

#include <Eigen/Dense>

#include "graphweave/error.hpp"
#include "graphweave/metrics.hpp"

namespace graphweave {

const std::vector<Metric>& all_metrics() {
  static const std::vector<Metric> metrics{Metric::Degree,     Metric::PageRank, Metric::Cut,
                                           Metric::Conductance, Metric::Modularity, Metric::Clustering,
                                           Metric::Orbit,      Metric::MaxFlow,  Metric::Resistance};
  return metrics;
}

std::string to_string(Metric metric) {
  switch (metric) {
    case Metric::Degree:
      return "degree";
    case Metric::PageRank:
      return "pagerank";
    case Metric::Cut:
      return "cut";
    case Metric::Conductance:
      return "conductance";
    case Metric::Modularity:
      return "modularity";
    case Metric::Clustering:
      return "clustering";
    case Metric::Orbit:
      return "orbit";
    case Metric::MaxFlow:
      return "maxflow";
    case Metric::Resistance:
      return "resistance";
  }
  return "?";
}

Metric parse_metric(const std::string& name) {
  for (Metric m : all_metrics())
    if (to_string(m) == name) return m;
  throw PreconditionError("unknown metric '" + name + "'");
}

std::vector<double> pagerank(const Graph& g, double damping, double tolerance) {
  const int n = g.num_nodes();
  if (n == 0) return {};
  std::vector<double> pr(static_cast<std::size_t>(n), 1.0 / n), next(pr.size());
  for (int iter = 0; iter < 100000; ++iter) {
    double dangling = 0.0;
    for (int v = 0; v < n; ++v)
      if (g.degree(v) == 0) dangling += pr[static_cast<std::size_t>(v)];
    const double base = (1.0 - damping) / n + damping * dangling / n;
    std::fill(next.begin(), next.end(), base);
    for (int v = 0; v < n; ++v) {
      if (g.degree(v) == 0) continue;
      const double share = damping * pr[static_cast<std::size_t>(v)] / g.degree(v);
      for (int u : g.neighbors(v)) next[static_cast<std::size_t>(u)] += share;
    }
    double change = 0.0;
    for (std::size_t i = 0; i < pr.size(); ++i) change += std::abs(next[i] - pr[i]);
    pr.swap(next);
    if (change < tolerance) break;
  }
  return pr;
}

std::vector<double> local_clustering(const Graph& g) {
  const int n = g.num_nodes();
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  std::vector<char> mark(static_cast<std::size_t>(n), 0);
  for (int v = 0; v < n; ++v) {
    const int d = g.degree(v);
    if (d < 2) continue;
    for (int u : g.neighbors(v)) mark[static_cast<std::size_t>(u)] = 1;
    long long links = 0;
    for (int u : g.neighbors(v))
      for (int w : g.neighbors(u))
        if (w > u && mark[static_cast<std::size_t>(w)]) ++links;
    for (int u : g.neighbors(v)) mark[static_cast<std::size_t>(u)] = 0;
    out[static_cast<std::size_t>(v)] = static_cast<double>(links) / (0.5 * d * (d - 1));
  }
  return out;
}

std::vector<char> random_partition(int n, std::uint64_t seed, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x70617274u,
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);
  std::vector<char> side(static_cast<std::size_t>(n));
  for (auto& s : side) s = static_cast<char>(rng() >> 63);
  return side;
}

std::pair<int, int> random_pair(int n, std::uint64_t seed, int index) {
  if (n < 2) throw PreconditionError("random_pair needs n >= 2");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x70616972u,
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);
  std::uniform_int_distribution<int> pick(0, n - 1);
  const int s = pick(rng);
  int t = pick(rng);
  while (t == s) t = pick(rng);
  return {s, t};
}

int cut_size(const Graph& g, std::span<const char> side) {
  int cut = 0;
  for (const auto& e : g.edges())
    if (side[static_cast<std::size_t>(e.u)] != side[static_cast<std::size_t>(e.v)]) ++cut;
  return cut;
}

double modularity(const Graph& g, std::span<const char> side) {
  const double m = static_cast<double>(g.num_edges());
  if (m == 0.0) return 0.0;
  double internal[2] = {0.0, 0.0}, vol[2] = {0.0, 0.0};
  for (const auto& e : g.edges())
    if (side[static_cast<std::size_t>(e.u)] == side[static_cast<std::size_t>(e.v)]) internal[side[static_cast<std::size_t>(e.u)]] += 1.0;
  for (int v = 0; v < g.num_nodes(); ++v) vol[side[static_cast<std::size_t>(v)]] += g.degree(v);
  double q = 0.0;
  for (int c = 0; c < 2; ++c) q += internal[c] / m - std::pow(vol[c] / (2.0 * m), 2);
  return q;
}

int max_flow(const Graph& g, int s, int t) {
  const int n = g.num_nodes();
  if (s == t) throw PreconditionError("max_flow needs distinct endpoints");
  // Residual capacity per directed arc; each undirected edge gives one unit each way.
  std::vector<std::vector<int>> cap(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) cap[static_cast<std::size_t>(v)].assign(static_cast<std::size_t>(g.degree(v)), 1);
  auto slot = [&](int from, int to) {
    const auto nb = g.neighbors(from);
    return static_cast<std::size_t>(std::lower_bound(nb.begin(), nb.end(), to) - nb.begin());
  };
  int flow = 0;
  std::vector<int> parent(static_cast<std::size_t>(n));
  for (;;) {
    std::fill(parent.begin(), parent.end(), -1);
    parent[static_cast<std::size_t>(s)] = s;
    std::queue<int> q;
    q.push(s);
    while (!q.empty() && parent[static_cast<std::size_t>(t)] < 0) {
      const int v = q.front();
      q.pop();
      const auto nb = g.neighbors(v);
      for (std::size_t k = 0; k < nb.size(); ++k) {
        const int u = nb[k];
        if (parent[static_cast<std::size_t>(u)] < 0 && cap[static_cast<std::size_t>(v)][k] > 0) {
          parent[static_cast<std::size_t>(u)] = v;
          q.push(u);
        }
      }
    }
    if (parent[static_cast<std::size_t>(t)] < 0) break;
    for (int v = t; v != s; v = parent[static_cast<std::size_t>(v)]) {
      const int p = parent[static_cast<std::size_t>(v)];
      --cap[static_cast<std::size_t>(p)][slot(p, v)];
      ++cap[static_cast<std::size_t>(v)][slot(v, p)];
    }
    ++flow;
  }
  return flow;
}

std::vector<std::optional<double>> effective_resistances(const Graph& g, std::span<const std::pair<int, int>> pairs) {
  int count = 0;
  const auto label = connected_components(g, &count);
  std::vector<std::vector<int>> members(static_cast<std::size_t>(count));
  std::vector<int> local(static_cast<std::size_t>(g.num_nodes()));
  for (int v = 0; v < g.num_nodes(); ++v) {
    auto& m = members[static_cast<std::size_t>(label[static_cast<std::size_t>(v)])];
    local[static_cast<std::size_t>(v)] = static_cast<int>(m.size());
    m.push_back(v);
  }
  // Laplacian of each component grounded at its first node.
  std::vector<std::optional<Eigen::LLT<Eigen::MatrixXd>>> factor(static_cast<std::size_t>(count));
  auto factor_of = [&](int c) -> const Eigen::LLT<Eigen::MatrixXd>& {
    auto& f = factor[static_cast<std::size_t>(c)];
    if (!f) {
      const auto& nodes = members[static_cast<std::size_t>(c)];
      const auto m = static_cast<Eigen::Index>(nodes.size()) - 1;
      Eigen::MatrixXd L = Eigen::MatrixXd::Zero(m, m);
      for (int v : nodes) {
        const int lv = local[static_cast<std::size_t>(v)] - 1;
        if (lv >= 0) L(lv, lv) = g.degree(v);
        for (int u : g.neighbors(v)) {
          const int lu = local[static_cast<std::size_t>(u)] - 1;
          if (lv >= 0 && lu >= 0) L(lv, lu) = -1.0;
        }
      }
      f.emplace(L);
      if (f->info() != Eigen::Success) throw NumericalError("grounded Laplacian factorisation failed");
    }
    return *f;
  };
  std::vector<std::optional<double>> out;
  out.reserve(pairs.size());
  for (const auto& [s, t] : pairs) {
    const int c = label[static_cast<std::size_t>(s)];
    if (c != label[static_cast<std::size_t>(t)]) {
      out.emplace_back(std::nullopt);
      continue;
    }
    const auto& llt = factor_of(c);
    const auto m = static_cast<Eigen::Index>(members[static_cast<std::size_t>(c)].size()) - 1;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
    const int ls = local[static_cast<std::size_t>(s)] - 1, lt = local[static_cast<std::size_t>(t)] - 1;
    if (ls >= 0) b[ls] += 1.0;
    if (lt >= 0) b[lt] -= 1.0;
    const Eigen::VectorXd x = llt.solve(b);
    const double xs = ls >= 0 ? x[ls] : 0.0, xt = lt >= 0 ? x[lt] : 0.0;
    out.emplace_back(xs - xt);
  }
  return out;
}

StatisticVector statistic(const Graph& g, Metric metric, std::uint64_t seed) {
  const int n = g.num_nodes();
  if (n == 0) throw PreconditionError("statistic of an empty graph");
  StatisticVector out{metric, {}, seed, 0};
  auto& values = out.values;
  switch (metric) {
    case Metric::Degree:
      for (int v = 0; v < n; ++v) values.push_back(g.degree(v));
      break;
    case Metric::PageRank:
      values = pagerank(g);
      break;
    case Metric::Clustering:
      values = local_clustering(g);
      break;
    case Metric::Cut:
      for (int p = 0; p < kNumPartitions; ++p) values.push_back(cut_size(g, random_partition(n, seed, p)));
      break;
    case Metric::Modularity:
      for (int p = 0; p < kNumPartitions; ++p) values.push_back(modularity(g, random_partition(n, seed, p)));
      break;
    case Metric::Conductance: {
      // Degenerate partitions (an empty side or zero volume) are skipped and
      // the stream continues until 100 usable ones are found.
      for (int p = 0; static_cast<int>(values.size()) < kNumPartitions && p < 100 * kNumPartitions; ++p) {
        const auto side = random_partition(n, seed, p);
        double vol[2] = {0.0, 0.0};
        for (int v = 0; v < n; ++v) vol[side[static_cast<std::size_t>(v)]] += g.degree(v);
        const double denom = std::min(vol[0], vol[1]);
        if (denom <= 0.0) continue;
        values.push_back(cut_size(g, side) / denom);
      }
      break;
    }
    case Metric::Orbit: {
      const auto counts = orbit_counts(g);
      values.reserve(static_cast<std::size_t>(n) * kNumOrbits);
      for (const auto& row : counts)
        for (auto c : row) values.push_back(static_cast<double>(c));
      break;
    }
    case Metric::MaxFlow:
      if (n < 2) break;
      for (int p = 0; p < kNumPairs; ++p) {
        const auto [s, t] = random_pair(n, seed, p);
        values.push_back(max_flow(g, s, t));
      }
      break;
    case Metric::Resistance: {
      if (n < 2) break;
      std::vector<std::pair<int, int>> pairs;
      for (int p = 0; p < kNumPairs; ++p) pairs.push_back(random_pair(n, seed, p));
      for (const auto& r : effective_resistances(g, pairs)) {
        if (r) {
          values.push_back(*r);
        } else {
          ++out.excluded;
        }
      }
      break;
    }
  }
  return out;
}

}  // namespace graphweave
