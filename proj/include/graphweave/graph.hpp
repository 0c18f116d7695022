#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace graphweave {

struct Edge {
  int u;
  int v;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

using DegreeSequence = std::vector<int>;

/// Undirected simple graph on nodes 0..n-1.
///
/// Edges are stored once with u < v, sorted. Neighbor lists are sorted.
/// Immutable after construction.
class Graph {
 public:
  Graph() = default;

  /// Throws PreconditionError on out-of-range endpoints, self-loops or
  /// duplicate pairs.
  Graph(int n, std::span<const Edge> edges);

  /// Builds a graph from a possibly redundant edge list; duplicates are
  /// merged, orientation is normalised. Self-loops are still rejected.
  static Graph from_pairs(int n, std::vector<Edge> edges);

  int num_nodes() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const int> neighbors(int v) const { return adj_[static_cast<std::size_t>(v)]; }
  int degree(int v) const { return static_cast<int>(adj_[static_cast<std::size_t>(v)].size()); }
  DegreeSequence degrees() const;
  bool has_edge(int u, int v) const;
  int min_degree() const;

  friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
};

bool is_connected(const Graph& g);

/// Component label per node, labels numbered in order of first appearance.
std::vector<int> connected_components(const Graph& g, int* count = nullptr);

/// Relabels node i as perm[i].
Graph relabel(const Graph& g, std::span<const int> perm);

/// Number of unordered pairs present in exactly one of the two graphs.
std::size_t hamming_distance(const Graph& a, const Graph& b);

}  // namespace graphweave
