#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "kmw/graph.hpp"

namespace kmw {

inline constexpr NodeId kNoMate = std::numeric_limits<NodeId>::max();

/// Maximum matching of a bipartite graph given as left -> right adjacency.
/// Hopcroft-Karp with neighbors scanned in list order.
struct BipartiteMatching {
    std::vector<NodeId> mate_left;   // left -> right or kNoMate
    std::vector<NodeId> mate_right;  // right -> left or kNoMate
    std::size_t size = 0;
};

BipartiteMatching hopcroft_karp(std::size_t right_count, const std::vector<std::vector<NodeId>>& left_adjacency);

/// Maximum matching of a bipartite Graph; mate[v] is v's partner or kNoMate.
/// Throws NotBipartite.
struct GraphMatching {
    std::vector<NodeId> mate;
    std::size_t size = 0;
    std::vector<Edge> edges() const;
};

GraphMatching maximum_bipartite_matching(const Graph& g);

/// Minimum vertex cover from a maximum matching (Koenig), ascending node order.
std::vector<NodeId> konig_cover(const Graph& g, const GraphMatching& matching);

}  // namespace kmw
