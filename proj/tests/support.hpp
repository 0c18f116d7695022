#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "graphweave/graph.hpp"

namespace testing {

using graphweave::Edge;
using graphweave::Graph;

inline Graph path(int n) {
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return Graph(n, e);
}

inline Graph cycle(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n});
  return Graph(n, e);
}

inline Graph complete(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.push_back({i, j});
  return Graph(n, e);
}

inline Graph triangle() { return complete(3); }

/// Two triangles {0,1,2}, {3,4,5} joined by the edge (2,3).
inline Graph two_triangles_bridged() {
  const std::vector<Edge> e{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}};
  return Graph(6, e);
}

/// Connected G(n, p) sample: a random spanning tree plus independent extra edges.
inline Graph random_connected(int n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Edge> e;
  for (int i = 1; i < n; ++i) {
    const int parent = order[std::uniform_int_distribution<std::size_t>(0, static_cast<std::size_t>(i) - 1)(rng)];
    e.push_back({parent, order[static_cast<std::size_t>(i)]});
  }
  std::bernoulli_distribution coin(p);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng)) e.push_back({i, j});
  return Graph::from_pairs(n, e);
}

/// Uniform random graph, possibly disconnected or with isolated nodes.
inline Graph random_graph(int n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng)) e.push_back({i, j});
  return Graph(n, e);
}

}  // namespace testing
