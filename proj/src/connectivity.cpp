#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "graphweave/degree_model.hpp"
#include "graphweave/error.hpp"
#include "graphweave/graph_infer.hpp"
#include "graphweave/log.hpp"

namespace graphweave {

namespace {

Edge ordered(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

}  // namespace

Graph random_degree_feasible(const DegreeSequence& d, std::uint64_t seed) {
  if (!is_graphical(d)) throw InfeasibleError("degree sequence is not graphical");
  const int n = static_cast<int>(d.size());
  std::vector<int> remaining(d.begin(), d.end());
  std::vector<Edge> edges;
  // Havel-Hakimi: connect the node of largest residual to the next largest ones.
  for (;;) {
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return remaining[a] > remaining[b]; });
    const int v = order[0];
    const int k = remaining[static_cast<std::size_t>(v)];
    if (k == 0) break;
    remaining[static_cast<std::size_t>(v)] = 0;
    for (int q = 1; q <= k; ++q) {
      const int u = order[static_cast<std::size_t>(q)];
      if (remaining[static_cast<std::size_t>(u)] == 0) throw InfeasibleError("degree sequence is not graphical");
      --remaining[static_cast<std::size_t>(u)];
      edges.push_back(ordered(u, v));
    }
  }

  std::set<Edge> present(edges.begin(), edges.end());
  std::mt19937_64 rng(seed);
  const std::size_t swaps = 10 * edges.size();
  if (edges.size() >= 2) {
    std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
    for (std::size_t s = 0; s < swaps; ++s) {
      const std::size_t x = pick(rng), y = pick(rng);
      if (x == y) continue;
      auto [a, b] = edges[x];
      auto [c, e] = edges[y];
      if (std::bernoulli_distribution(0.5)(rng)) std::swap(c, e);
      if (a == c || a == e || b == c || b == e) continue;
      const Edge n1 = ordered(a, c), n2 = ordered(b, e);
      if (present.count(n1) || present.count(n2)) continue;
      present.erase(edges[x]);
      present.erase(edges[y]);
      present.insert(n1);
      present.insert(n2);
      edges[x] = n1;
      edges[y] = n2;
    }
  }
  return Graph(n, edges);
}

Graph repair_connectivity(const Graph& g, std::uint64_t seed, bool* success) {
  if (g.num_nodes() == 0) throw PreconditionError("repair_connectivity needs a nonempty graph");
  int count = 0;
  auto labels = connected_components(g, &count);
  if (count <= 1) {
    if (success) *success = true;
    return g;
  }
  std::vector<Edge> edges = g.edges();
  std::set<Edge> present(edges.begin(), edges.end());
  std::mt19937_64 rng(seed);
  const int n = g.num_nodes();
  const int attempts = 10 * n;
  Graph current = g;
  for (int t = 0; t < attempts && count > 1 && edges.size() >= 2; ++t) {
    std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
    const std::size_t x = pick(rng), y = pick(rng);
    const auto [a, b] = edges[x];
    auto [c, e] = edges[y];
    if (labels[static_cast<std::size_t>(a)] == labels[static_cast<std::size_t>(c)]) continue;
    if (std::bernoulli_distribution(0.5)(rng)) std::swap(c, e);
    const Edge n1 = ordered(a, c), n2 = ordered(b, e);
    if (present.count(n1) || present.count(n2)) continue;
    std::vector<Edge> trial = edges;
    trial[x] = n1;
    trial[y] = n2;
    Graph candidate(n, trial);
    int trial_count = 0;
    auto trial_labels = connected_components(candidate, &trial_count);
    if (trial_count >= count) continue;
    present.erase(edges[x]);
    present.erase(edges[y]);
    present.insert(n1);
    present.insert(n2);
    edges = std::move(trial);
    labels = std::move(trial_labels);
    count = trial_count;
    current = std::move(candidate);
  }
  if (count > 1) {
    warn("connectivity repair failed after " + std::to_string(attempts) + " attempts; keeping the original graph");
    if (success) *success = false;
    return g;
  }
  if (success) *success = true;
  return current;
}

}  // namespace graphweave
