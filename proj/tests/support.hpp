#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <random>
#include <vector>

#include "kmw/cluster_tree.hpp"
#include "kmw/graph.hpp"

namespace kmw::testing {

/// G(n, p) with a fixed seed.
inline Graph random_graph(std::size_t n, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(p);
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
            if (coin(rng)) edges.emplace_back(u, v);
        }
    }
    return Graph::from_edges(n, edges);
}

/// Random bipartite graph with parts [0, a) and [a, a + b).
inline Graph random_bipartite(std::size_t a, std::size_t b, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(p);
    std::vector<Edge> edges;
    for (NodeId u = 0; u < a; ++u) {
        for (NodeId v = 0; v < b; ++v) {
            if (coin(rng)) edges.emplace_back(u, static_cast<NodeId>(a + v));
        }
    }
    return Graph::from_edges(a + b, edges);
}

/// The 50-graph corpus of small random graphs (n <= 40) used by the reduction checks.
inline std::vector<Graph> small_corpus(std::size_t count = 50) {
    std::vector<Graph> corpus;
    std::mt19937_64 rng(20240611);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(4, 40)(rng);
        const double p = std::uniform_real_distribution<double>(0.05, 0.35)(rng);
        corpus.push_back(random_graph(n, p, rng()));
    }
    return corpus;
}

inline bool covers(const Graph& g, std::uint64_t mask) {
    for (const auto& [u, v] : g.edges()) {
        if (!((mask >> u) & 1) && !((mask >> v) & 1)) return false;
    }
    return true;
}

inline bool dominates(const Graph& g, std::uint64_t mask) {
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if ((mask >> v) & 1) continue;
        const auto nb = g.neighbors(v);
        if (std::none_of(nb.begin(), nb.end(), [mask](NodeId w) { return (mask >> w) & 1; })) return false;
    }
    return true;
}

/// Exhaustive optimum over all subsets; only for n <= 20.
template <class Pred>
std::size_t brute_force_min(const Graph& g, Pred ok) {
    const std::size_t n = g.node_count();
    std::size_t best = n;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        const auto size = static_cast<std::size_t>(__builtin_popcountll(mask));
        if (size < best && ok(g, mask)) best = size;
    }
    return best;
}

inline std::size_t brute_force_matching(const Graph& g) {
    const auto edges = g.edges();
    std::size_t best = 0;
    std::vector<bool> used(g.node_count(), false);
    auto rec = [&](auto&& self, std::size_t i, std::size_t size) -> void {
        best = std::max(best, size);
        if (size + (edges.size() - i) <= best) return;
        for (std::size_t j = i; j < edges.size(); ++j) {
            const auto [u, v] = edges[j];
            if (used[u] || used[v]) continue;
            used[u] = used[v] = true;
            self(self, j + 1, size + 1);
            used[u] = used[v] = false;
        }
    };
    rec(rec, 0, 0);
    return best;
}

/// Disjoint union of the depth-k non-backtracking unrollings of `roots`: every
/// tree node copies the cluster of the node it came from. Nodes of depth < k keep
/// their full neighborhoods, so the result is a forest on which the k-hop views of
/// the roots agree with the universal cover.
struct UnrolledForest {
    Graph graph;
    std::vector<ClusterId> cluster_of;
    std::vector<NodeId> roots;
};

inline UnrolledForest unroll(const Graph& g, const std::vector<ClusterId>& cluster_of,
                             const std::vector<NodeId>& roots, std::size_t k) {
    UnrolledForest out;
    GraphBuilder b;
    struct Item {
        NodeId copy;
        NodeId original;
        NodeId came_from;
        std::size_t depth;
    };
    constexpr NodeId none = std::numeric_limits<NodeId>::max();
    for (NodeId r : roots) {
        const NodeId root = b.add_node();
        out.cluster_of.push_back(cluster_of[r]);
        out.roots.push_back(root);
        std::queue<Item> queue;
        queue.push({root, r, none, 0});
        while (!queue.empty()) {
            const auto it = queue.front();
            queue.pop();
            if (it.depth == k) continue;
            for (NodeId w : g.neighbors(it.original)) {
                if (w == it.came_from) continue;
                const NodeId c = b.add_node();
                out.cluster_of.push_back(cluster_of[w]);
                b.add_edge(it.copy, c);
                queue.push({c, w, it.original, it.depth + 1});
            }
        }
    }
    out.graph = b.build();
    return out;
}

}  // namespace kmw::testing
