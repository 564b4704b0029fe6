#include "kmw/matching.hpp"

#include <deque>

#include "kmw/errors.hpp"

namespace kmw {

namespace {

constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();

class HopcroftKarp {
public:
    HopcroftKarp(std::size_t right_count, const std::vector<std::vector<NodeId>>& adj)
        : adj_(adj), dist_(adj.size()), next_(adj.size()) {
        result_.mate_left.assign(adj.size(), kNoMate);
        result_.mate_right.assign(right_count, kNoMate);
    }

    BipartiteMatching run() {
        while (layer()) {
            std::fill(next_.begin(), next_.end(), 0);
            for (NodeId u = 0; u < adj_.size(); ++u) {
                if (result_.mate_left[u] == kNoMate && augment(u)) ++result_.size;
            }
        }
        return std::move(result_);
    }

private:
    bool layer() {
        std::deque<NodeId> queue;
        for (NodeId u = 0; u < adj_.size(); ++u) {
            if (result_.mate_left[u] == kNoMate) {
                dist_[u] = 0;
                queue.push_back(u);
            } else {
                dist_[u] = kInf;
            }
        }
        bool found = false;
        while (!queue.empty()) {
            const NodeId u = queue.front();
            queue.pop_front();
            for (NodeId v : adj_[u]) {
                const NodeId w = result_.mate_right[v];
                if (w == kNoMate) {
                    found = true;
                } else if (dist_[w] == kInf) {
                    dist_[w] = dist_[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        return found;
    }

    bool augment(NodeId root) {
        std::vector<NodeId> stack{root};
        while (!stack.empty()) {
            const NodeId u = stack.back();
            if (next_[u] == adj_[u].size()) {
                dist_[u] = kInf;
                stack.pop_back();
                if (!stack.empty()) ++next_[stack.back()];
                continue;
            }
            const NodeId v = adj_[u][next_[u]];
            const NodeId w = result_.mate_right[v];
            if (w == kNoMate) {
                for (NodeId x : stack) {
                    const NodeId y = adj_[x][next_[x]];
                    result_.mate_left[x] = y;
                    result_.mate_right[y] = x;
                }
                return true;
            }
            if (dist_[w] == dist_[u] + 1) {
                stack.push_back(w);
            } else {
                ++next_[u];
            }
        }
        return false;
    }

    const std::vector<std::vector<NodeId>>& adj_;
    std::vector<std::size_t> dist_;
    std::vector<std::size_t> next_;
    BipartiteMatching result_;
};

}  // namespace

BipartiteMatching hopcroft_karp(std::size_t right_count, const std::vector<std::vector<NodeId>>& left_adjacency) {
    return HopcroftKarp(right_count, left_adjacency).run();
}

std::vector<Edge> GraphMatching::edges() const {
    std::vector<Edge> out;
    for (NodeId v = 0; v < mate.size(); ++v) {
        if (mate[v] != kNoMate && v < mate[v]) out.emplace_back(v, mate[v]);
    }
    return out;
}

GraphMatching maximum_bipartite_matching(const Graph& g) {
    auto coloring = two_coloring(g);
    if (!coloring) throw NotBipartite();
    const auto n = g.node_count();
    std::vector<NodeId> index(n);
    std::vector<NodeId> left, right;
    for (NodeId v = 0; v < n; ++v) {
        auto& side = (*coloring)[v] == 0 ? left : right;
        index[v] = static_cast<NodeId>(side.size());
        side.push_back(v);
    }
    std::vector<std::vector<NodeId>> adj(left.size());
    for (std::size_t i = 0; i < left.size(); ++i) {
        for (NodeId w : g.neighbors(left[i])) adj[i].push_back(index[w]);
    }
    const auto m = hopcroft_karp(right.size(), adj);
    GraphMatching result{std::vector<NodeId>(n, kNoMate), m.size};
    for (std::size_t i = 0; i < left.size(); ++i) {
        if (m.mate_left[i] != kNoMate) {
            const NodeId r = right[m.mate_left[i]];
            result.mate[left[i]] = r;
            result.mate[r] = left[i];
        }
    }
    return result;
}

std::vector<NodeId> konig_cover(const Graph& g, const GraphMatching& matching) {
    auto coloring = two_coloring(g);
    if (!coloring) throw NotBipartite();
    const auto n = g.node_count();
    std::vector<bool> visited(n, false);
    std::deque<NodeId> queue;
    for (NodeId v = 0; v < n; ++v) {
        if ((*coloring)[v] == 0 && matching.mate[v] == kNoMate) {
            visited[v] = true;
            queue.push_back(v);
        }
    }
    // Alternating search: left -> right along non-matching edges, right -> left along the matching.
    while (!queue.empty()) {
        const NodeId v = queue.front();
        queue.pop_front();
        if ((*coloring)[v] == 0) {
            for (NodeId w : g.neighbors(v)) {
                if (!visited[w] && matching.mate[v] != w) {
                    visited[w] = true;
                    queue.push_back(w);
                }
            }
        } else if (matching.mate[v] != kNoMate && !visited[matching.mate[v]]) {
            visited[matching.mate[v]] = true;
            queue.push_back(matching.mate[v]);
        }
    }
    std::vector<NodeId> cover;
    for (NodeId v = 0; v < n; ++v) {
        const bool left = (*coloring)[v] == 0;
        if (left != visited[v]) cover.push_back(v);
    }
    return cover;
}

}  // namespace kmw
