#pragma once

#include <cstdint>
#include <vector>

#include "graphweave/graph.hpp"

namespace graphweave {

/// Stochastic block model with contiguous blocks sized floor(fraction * n);
/// the rounding residue goes to the last block. A node left isolated has
/// its pairs redrawn once; if it is still isolated a GenerationError is
/// thrown.
Graph sample_sbm(int n, const std::vector<double>& community_fractions, double p_within, double q_across,
                 std::uint64_t seed);

/// Block index of every node under the contiguous layout used by sample_sbm.
std::vector<int> sbm_blocks(int n, const std::vector<double>& community_fractions);

/// Watts-Strogatz: ring lattice with `ring_neighbors` (even) neighbours per
/// node, each clockwise edge rewired with probability `rewire_prob` to a
/// uniform target that is neither the source nor an existing neighbour.
Graph sample_watts_strogatz(int n, int ring_neighbors, double rewire_prob, std::uint64_t seed);

/// Barabasi-Albert preferential attachment grown from a clique on
/// edges_per_new_node + 1 nodes.
Graph sample_barabasi_albert(int n, int edges_per_new_node, std::uint64_t seed);

/// Chung-Lu expected-degree graph: pair (i, j) linked with probability
/// min(1, d_i d_j / sum(d)). Isolated nodes are handled as in sample_sbm.
Graph sample_chung_lu(const DegreeSequence& target, std::uint64_t seed);

}  // namespace graphweave
