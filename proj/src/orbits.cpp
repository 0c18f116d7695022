#include <algorithm>

#include "graphweave/metrics.hpp"

namespace graphweave {

namespace {

// Orbit of each node of a connected graphlet on 2-4 nodes, identified by
// the node's degree inside the graphlet and the graphlet's edge count.
//   2 nodes: edge 0
//   3 nodes: path 1 (end) 2 (middle); triangle 3
//   4 nodes: path 4 (end) 5 (inner); star 6 (leaf) 7 (centre); cycle 8;
//            paw 9 (tail) 10 (degree 2) 11 (degree 3);
//            diamond 12 (degree 2) 13 (degree 3); clique 14
void classify(const int* deg, int size, int edges, int* orbit) {
  if (size == 2) {
    orbit[0] = orbit[1] = 0;
    return;
  }
  if (size == 3) {
    for (int q = 0; q < 3; ++q) orbit[q] = edges == 3 ? 3 : (deg[q] == 1 ? 1 : 2);
    return;
  }
  const int max_deg = *std::max_element(deg, deg + 4);
  for (int q = 0; q < 4; ++q) {
    const int d = deg[q];
    switch (edges) {
      case 3:
        orbit[q] = max_deg == 3 ? (d == 3 ? 7 : 6) : (d == 1 ? 4 : 5);
        break;
      case 4:
        orbit[q] = max_deg == 2 ? 8 : (d == 1 ? 9 : (d == 2 ? 10 : 11));
        break;
      case 5:
        orbit[q] = d == 2 ? 12 : 13;
        break;
      default:
        orbit[q] = 14;
        break;
    }
  }
}

class Census {
 public:
  explicit Census(const Graph& g)
      : g_(g), counts_(static_cast<std::size_t>(g.num_nodes())), in_sub_(static_cast<std::size_t>(g.num_nodes()), 0),
        near_(static_cast<std::size_t>(g.num_nodes()), 0) {
    for (auto& row : counts_) row.fill(0);
  }

  // ESU: every connected induced subgraph is reached exactly once, rooted
  // at its smallest node.
  std::vector<std::array<std::int64_t, kNumOrbits>> run() {
    for (int v = 0; v < g_.num_nodes(); ++v) {
      std::vector<int> ext;
      for (int u : g_.neighbors(v))
        if (u > v) ext.push_back(u);
      sub_[0] = v;
      size_ = 1;
      in_sub_[static_cast<std::size_t>(v)] = 1;
      mark_near(v, +1);
      extend(ext, v);
      mark_near(v, -1);
      in_sub_[static_cast<std::size_t>(v)] = 0;
    }
    return counts_;
  }

 private:
  void mark_near(int v, int delta) {
    for (int u : g_.neighbors(v)) near_[static_cast<std::size_t>(u)] += delta;
  }

  void record() {
    int deg[4] = {0, 0, 0, 0};
    int edges = 0;
    for (int a = 0; a < size_; ++a)
      for (int b = a + 1; b < size_; ++b)
        if (g_.has_edge(sub_[a], sub_[b])) {
          ++deg[a];
          ++deg[b];
          ++edges;
        }
    int orbit[4];
    classify(deg, size_, edges, orbit);
    for (int a = 0; a < size_; ++a) ++counts_[static_cast<std::size_t>(sub_[a])][static_cast<std::size_t>(orbit[a])];
  }

  void extend(std::vector<int> ext, int root) {
    if (size_ > 1) record();
    if (size_ == 4) return;
    while (!ext.empty()) {
      const int w = ext.back();
      ext.pop_back();
      std::vector<int> next = ext;
      // Exclusive neighbours of w: not in the subgraph and not adjacent to it.
      for (int u : g_.neighbors(w))
        if (u > root && !in_sub_[static_cast<std::size_t>(u)] && near_[static_cast<std::size_t>(u)] == 0) {
          next.push_back(u);
        }
      sub_[size_++] = w;
      in_sub_[static_cast<std::size_t>(w)] = 1;
      mark_near(w, +1);
      extend(std::move(next), root);
      mark_near(w, -1);
      in_sub_[static_cast<std::size_t>(w)] = 0;
      --size_;
    }
  }

  const Graph& g_;
  std::vector<std::array<std::int64_t, kNumOrbits>> counts_;
  std::vector<char> in_sub_;
  std::vector<int> near_;
  int sub_[4] = {0, 0, 0, 0};
  int size_ = 0;
};

}  // namespace

std::vector<std::array<std::int64_t, kNumOrbits>> orbit_counts(const Graph& g) { return Census(g).run(); }

}  // namespace graphweave
