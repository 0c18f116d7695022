#include "graphweave/graph.hpp"

#include <algorithm>
#include <queue>
#include <string>

#include "graphweave/error.hpp"

namespace graphweave {

namespace {

Edge normalised(Edge e) {
  if (e.u > e.v) std::swap(e.u, e.v);
  return e;
}

void check_endpoints(int n, const Edge& e) {
  if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) {
    throw PreconditionError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                            ") out of range for n = " + std::to_string(n));
  }
  if (e.u == e.v) throw PreconditionError("self-loop at node " + std::to_string(e.u));
}

}  // namespace

Graph::Graph(int n, std::span<const Edge> edges) : n_(n) {
  if (n < 0) throw PreconditionError("negative node count");
  edges_.reserve(edges.size());
  for (const Edge& e : edges) {
    check_endpoints(n, e);
    edges_.push_back(normalised(e));
  }
  std::sort(edges_.begin(), edges_.end());
  auto dup = std::adjacent_find(edges_.begin(), edges_.end());
  if (dup != edges_.end()) {
    throw PreconditionError("duplicate edge (" + std::to_string(dup->u) + ", " + std::to_string(dup->v) + ")");
  }
  adj_.assign(static_cast<std::size_t>(n), {});
  for (const Edge& e : edges_) {
    adj_[static_cast<std::size_t>(e.u)].push_back(e.v);
    adj_[static_cast<std::size_t>(e.v)].push_back(e.u);
  }
  for (auto& list : adj_) std::sort(list.begin(), list.end());
}

Graph Graph::from_pairs(int n, std::vector<Edge> edges) {
  for (auto& e : edges) {
    check_endpoints(n, e);
    e = normalised(e);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return Graph(n, edges);
}

DegreeSequence Graph::degrees() const {
  DegreeSequence d(static_cast<std::size_t>(n_));
  for (int v = 0; v < n_; ++v) d[static_cast<std::size_t>(v)] = degree(v);
  return d;
}

bool Graph::has_edge(int u, int v) const {
  if (u < 0 || v < 0 || u >= n_ || v >= n_) return false;
  const auto& list = adj_[static_cast<std::size_t>(u)];
  return std::binary_search(list.begin(), list.end(), v);
}

int Graph::min_degree() const {
  int best = n_ > 0 ? degree(0) : 0;
  for (int v = 1; v < n_; ++v) best = std::min(best, degree(v));
  return best;
}

std::vector<int> connected_components(const Graph& g, int* count) {
  const int n = g.num_nodes();
  std::vector<int> label(static_cast<std::size_t>(n), -1);
  int next = 0;
  std::queue<int> frontier;
  for (int s = 0; s < n; ++s) {
    if (label[static_cast<std::size_t>(s)] >= 0) continue;
    label[static_cast<std::size_t>(s)] = next;
    frontier.push(s);
    while (!frontier.empty()) {
      int u = frontier.front();
      frontier.pop();
      for (int w : g.neighbors(u)) {
        if (label[static_cast<std::size_t>(w)] < 0) {
          label[static_cast<std::size_t>(w)] = next;
          frontier.push(w);
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return label;
}

bool is_connected(const Graph& g) {
  if (g.num_nodes() == 0) return true;
  int count = 0;
  connected_components(g, &count);
  return count == 1;
}

Graph relabel(const Graph& g, std::span<const int> perm) {
  if (static_cast<int>(perm.size()) != g.num_nodes()) throw PreconditionError("permutation size mismatch");
  std::vector<Edge> mapped;
  mapped.reserve(g.num_edges());
  for (const Edge& e : g.edges()) {
    mapped.push_back({perm[static_cast<std::size_t>(e.u)], perm[static_cast<std::size_t>(e.v)]});
  }
  return Graph(g.num_nodes(), mapped);
}

std::size_t hamming_distance(const Graph& a, const Graph& b) {
  if (a.num_nodes() != b.num_nodes()) throw PreconditionError("hamming distance needs equal node counts");
  std::vector<Edge> diff;
  std::set_symmetric_difference(a.edges().begin(), a.edges().end(), b.edges().begin(), b.edges().end(),
                                std::back_inserter(diff));
  return diff.size();
}

}  // namespace graphweave
