#include "graphweave/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include "graphweave/error.hpp"
#include "graphweave/log.hpp"

namespace graphweave {

namespace {

using Rng = std::mt19937_64;

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

// Independent pair sampling with the isolated-node retry shared by the SBM
// and Chung-Lu samplers.
Graph sample_independent_pairs(int n, const std::function<double(int, int)>& prob, Rng& rng, const char* name) {
  std::vector<std::vector<char>> linked(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
  auto draw = [&](int i, int j) {
    const bool on = uniform01(rng) < prob(i, j);
    linked[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = on;
    linked[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = on;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) draw(i, j);

  auto isolated = [&](int i) {
    const auto& row = linked[static_cast<std::size_t>(i)];
    return std::none_of(row.begin(), row.end(), [](char c) { return c != 0; });
  };
  for (int i = 0; i < n && n > 1; ++i) {
    if (!isolated(i)) continue;
    for (int j = 0; j < n; ++j)
      if (j != i) draw(std::min(i, j), std::max(i, j));
    if (isolated(i)) {
      throw GenerationError(std::string(name) + ": node " + std::to_string(i) + " still isolated after resampling");
    }
  }

  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (linked[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) edges.push_back({i, j});
  return Graph(n, edges);
}

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw PreconditionError(std::string(what) + " must lie in [0, 1]");
}

}  // namespace

std::vector<int> sbm_blocks(int n, const std::vector<double>& community_fractions) {
  if (n < 1) throw PreconditionError("sbm: n must be positive");
  if (community_fractions.empty()) throw PreconditionError("sbm: no communities");
  double total = 0.0;
  for (double f : community_fractions) {
    if (!(f > 0.0)) throw PreconditionError("sbm: community fractions must be positive");
    total += f;
  }
  if (std::abs(total - 1.0) > 1e-9) throw PreconditionError("sbm: community fractions must sum to 1");

  std::vector<int> block(static_cast<std::size_t>(n));
  int start = 0;
  const int last = static_cast<int>(community_fractions.size()) - 1;
  for (int b = 0; b <= last; ++b) {
    int size = b == last ? n - start
                         : std::min(n - start, static_cast<int>(std::floor(community_fractions[static_cast<std::size_t>(b)] * n)));
    for (int i = start; i < start + size; ++i) block[static_cast<std::size_t>(i)] = b;
    start += size;
  }
  return block;
}

Graph sample_sbm(int n, const std::vector<double>& community_fractions, double p_within, double q_across,
                 std::uint64_t seed) {
  check_probability(p_within, "sbm: p");
  check_probability(q_across, "sbm: q");
  const auto block = sbm_blocks(n, community_fractions);
  Rng rng(seed);
  return sample_independent_pairs(
      n,
      [&](int i, int j) {
        return block[static_cast<std::size_t>(i)] == block[static_cast<std::size_t>(j)] ? p_within : q_across;
      },
      rng, "sbm");
}

Graph sample_watts_strogatz(int n, int ring_neighbors, double rewire_prob, std::uint64_t seed) {
  if (ring_neighbors < 0 || ring_neighbors % 2 != 0 || ring_neighbors >= n) {
    throw PreconditionError("watts-strogatz: ring_neighbors must be even and < n");
  }
  check_probability(rewire_prob, "watts-strogatz: rewire_prob");
  Rng rng(seed);
  std::vector<std::set<int>> adj(static_cast<std::size_t>(n));
  auto link = [&](int a, int b) {
    adj[static_cast<std::size_t>(a)].insert(b);
    adj[static_cast<std::size_t>(b)].insert(a);
  };
  auto unlink = [&](int a, int b) {
    adj[static_cast<std::size_t>(a)].erase(b);
    adj[static_cast<std::size_t>(b)].erase(a);
  };
  const int half = ring_neighbors / 2;
  for (int u = 0; u < n; ++u)
    for (int j = 1; j <= half; ++j) link(u, (u + j) % n);

  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int j = 1; j <= half; ++j) {
    for (int u = 0; u < n; ++u) {
      const int v = (u + j) % n;
      if (uniform01(rng) >= rewire_prob) continue;
      auto& nbrs = adj[static_cast<std::size_t>(u)];
      if (static_cast<int>(nbrs.size()) >= n - 1) continue;
      int w = pick(rng);
      while (w == u || nbrs.count(w) != 0) w = pick(rng);
      unlink(u, v);
      link(u, w);
    }
  }

  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int w : adj[static_cast<std::size_t>(u)])
      if (u < w) edges.push_back({u, w});
  return Graph(n, edges);
}

Graph sample_barabasi_albert(int n, int edges_per_new_node, std::uint64_t seed) {
  const int m = edges_per_new_node;
  if (m < 1 || m >= n) throw PreconditionError("barabasi-albert: need 1 <= edges_per_new_node < n");
  Rng rng(seed);
  std::vector<Edge> edges;
  // Each node appears once per incident edge endpoint.
  std::vector<int> endpoints;
  const int seed_size = m + 1;
  for (int i = 0; i < seed_size; ++i)
    for (int j = i + 1; j < seed_size; ++j) {
      edges.push_back({i, j});
      endpoints.push_back(i);
      endpoints.push_back(j);
    }
  std::vector<int> chosen;
  for (int v = seed_size; v < n; ++v) {
    chosen.clear();
    std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
    while (static_cast<int>(chosen.size()) < m) {
      int t = endpoints[pick(rng)];
      if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) chosen.push_back(t);
    }
    for (int t : chosen) {
      edges.push_back({t, v});
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return Graph(n, edges);
}

Graph sample_chung_lu(const DegreeSequence& target, std::uint64_t seed) {
  const int n = static_cast<int>(target.size());
  if (n < 1) throw PreconditionError("chung-lu: empty degree sequence");
  double total = 0.0;
  for (int d : target) {
    if (d < 0) throw PreconditionError("chung-lu: negative target degree");
    total += d;
  }
  if (total <= 0.0) throw PreconditionError("chung-lu: all target degrees are zero");
  const int dmax = *std::max_element(target.begin(), target.end());
  if (static_cast<double>(dmax) * dmax / total > 1.0) {
    warn("chung-lu: some pair probabilities exceed 1 and are clipped");
  }
  Rng rng(seed);
  return sample_independent_pairs(
      n,
      [&](int i, int j) {
        return std::min(1.0, static_cast<double>(target[static_cast<std::size_t>(i)]) *
                                 target[static_cast<std::size_t>(j)] / total);
      },
      rng, "chung-lu");
}

}  // namespace graphweave
