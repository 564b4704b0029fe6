#include "kmw/graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "kmw/errors.hpp"

namespace kmw {

namespace {

void check_sorted_simple(const std::vector<std::vector<NodeId>>& adjacency) {
    const auto n = adjacency.size();
    for (std::size_t v = 0; v < n; ++v) {
        const auto& list = adjacency[v];
        for (std::size_t i = 0; i < list.size(); ++i) {
            if (list[i] >= n) {
                throw InvalidGraph("neighbor " + std::to_string(list[i]) + " of node " +
                                   std::to_string(v) + " out of range");
            }
            if (list[i] == v) throw InvalidGraph("self-loop at node " + std::to_string(v));
            if (i > 0 && list[i] == list[i - 1]) {
                throw InvalidGraph("duplicate edge {" + std::to_string(v) + "," +
                                   std::to_string(list[i]) + "}");
            }
        }
    }
}

}  // namespace

Graph::Graph(std::size_t node_count) : offsets_(node_count + 1, 0) {}

Graph Graph::from_edges(std::size_t node_count, std::span<const Edge> edges) {
    std::vector<std::size_t> degree(node_count, 0);
    for (const auto& [u, v] : edges) {
        if (u >= node_count || v >= node_count) {
            throw InvalidGraph("edge {" + std::to_string(u) + "," + std::to_string(v) +
                               "} out of range for n=" + std::to_string(node_count));
        }
        if (u == v) throw InvalidGraph("self-loop at node " + std::to_string(u));
        ++degree[u];
        ++degree[v];
    }
    Graph g;
    g.offsets_.assign(node_count + 1, 0);
    for (std::size_t v = 0; v < node_count; ++v) g.offsets_[v + 1] = g.offsets_[v] + degree[v];
    g.targets_.resize(g.offsets_[node_count]);
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const auto& [u, v] : edges) {
        g.targets_[cursor[u]++] = v;
        g.targets_[cursor[v]++] = u;
    }
    for (std::size_t v = 0; v < node_count; ++v) {
        auto first = g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]);
        auto last = g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]);
        std::sort(first, last);
        if (auto dup = std::adjacent_find(first, last); dup != last) {
            throw InvalidGraph("duplicate edge {" + std::to_string(v) + "," +
                               std::to_string(*dup) + "}");
        }
    }
    return g;
}

Graph Graph::from_adjacency(std::vector<std::vector<NodeId>> adjacency) {
    for (auto& list : adjacency) std::sort(list.begin(), list.end());
    check_sorted_simple(adjacency);
    Graph g;
    const auto n = adjacency.size();
    g.offsets_.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + adjacency[v].size();
    g.targets_.reserve(g.offsets_[n]);
    for (const auto& list : adjacency) g.targets_.insert(g.targets_.end(), list.begin(), list.end());
    for (std::size_t v = 0; v < n; ++v) {
        for (NodeId w : g.neighbors(static_cast<NodeId>(v))) {
            if (!g.has_edge(w, static_cast<NodeId>(v))) {
                throw InvalidGraph("asymmetric adjacency between " + std::to_string(v) + " and " +
                                   std::to_string(w));
            }
        }
    }
    return g;
}

std::size_t Graph::max_degree() const {
    std::size_t best = 0;
    for (std::size_t v = 0; v < node_count(); ++v) best = std::max(best, degree(static_cast<NodeId>(v)));
    return best;
}

std::size_t Graph::min_degree() const {
    if (node_count() == 0) return 0;
    std::size_t best = kUnreachable;
    for (std::size_t v = 0; v < node_count(); ++v) best = std::min(best, degree(static_cast<NodeId>(v)));
    return best;
}

bool Graph::is_regular() const { return max_degree() == min_degree(); }

bool Graph::has_edge(NodeId u, NodeId v) const {
    if (u >= node_count() || v >= node_count()) return false;
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (std::size_t u = 0; u < node_count(); ++u) {
        for (NodeId v : neighbors(static_cast<NodeId>(u))) {
            if (u < v) out.emplace_back(static_cast<NodeId>(u), v);
        }
    }
    return out;
}

GraphBuilder::GraphBuilder(const Graph& g) : adjacency_(g.node_count()) {
    for (std::size_t v = 0; v < g.node_count(); ++v) {
        auto nb = g.neighbors(static_cast<NodeId>(v));
        adjacency_[v].assign(nb.begin(), nb.end());
    }
}

NodeId GraphBuilder::add_node() {
    adjacency_.emplace_back();
    return static_cast<NodeId>(adjacency_.size() - 1);
}

NodeId GraphBuilder::add_nodes(std::size_t count) {
    const auto first = static_cast<NodeId>(adjacency_.size());
    adjacency_.resize(adjacency_.size() + count);
    return first;
}

void GraphBuilder::add_edge(NodeId u, NodeId v) {
    if (u >= node_count() || v >= node_count()) throw InvalidGraph("edge endpoint out of range");
    if (u == v) throw InvalidGraph("self-loop at node " + std::to_string(u));
    auto& lu = adjacency_[u];
    auto it = std::lower_bound(lu.begin(), lu.end(), v);
    if (it != lu.end() && *it == v) {
        throw InvalidGraph("duplicate edge {" + std::to_string(u) + "," + std::to_string(v) + "}");
    }
    lu.insert(it, v);
    auto& lv = adjacency_[v];
    lv.insert(std::lower_bound(lv.begin(), lv.end(), u), u);
}

void GraphBuilder::remove_edge(NodeId u, NodeId v) {
    if (!has_edge(u, v)) {
        throw InvalidGraph("no edge {" + std::to_string(u) + "," + std::to_string(v) + "}");
    }
    auto& lu = adjacency_[u];
    lu.erase(std::lower_bound(lu.begin(), lu.end(), v));
    auto& lv = adjacency_[v];
    lv.erase(std::lower_bound(lv.begin(), lv.end(), u));
}

bool GraphBuilder::has_edge(NodeId u, NodeId v) const {
    if (u >= node_count() || v >= node_count()) return false;
    const auto& lu = adjacency_[u];
    return std::binary_search(lu.begin(), lu.end(), v);
}

Graph GraphBuilder::build() const { return Graph::from_adjacency(adjacency_); }

bool girth_at_least(const Girth& girth, std::size_t bound) {
    if (std::holds_alternative<InfiniteGirth>(girth)) return true;
    return std::get<std::size_t>(girth) >= bound;
}

std::string to_string(const Girth& girth) {
    if (std::holds_alternative<InfiniteGirth>(girth)) return "inf";
    return std::to_string(std::get<std::size_t>(girth));
}

Girth girth(const Graph& g) {
    const auto n = g.node_count();
    if (n == 0) return InfiniteGirth{};
    const auto components = connected_components(g);
    if (g.edge_count() + *std::max_element(components.begin(), components.end()) + 1 == n) {
        return InfiniteGirth{};
    }
    std::size_t best = kUnreachable;
    std::vector<std::size_t> dist(n, kUnreachable);
    std::vector<NodeId> parent(n, 0);
    std::vector<NodeId> touched;
    std::deque<NodeId> queue;
    for (std::size_t s = 0; s < n && best > 3; ++s) {
        dist[s] = 0;
        touched.push_back(static_cast<NodeId>(s));
        queue.push_back(static_cast<NodeId>(s));
        while (!queue.empty()) {
            const NodeId u = queue.front();
            queue.pop_front();
            if (best != kUnreachable && 2 * dist[u] >= best) break;
            for (NodeId w : g.neighbors(u)) {
                if (dist[w] == kUnreachable) {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    touched.push_back(w);
                    queue.push_back(w);
                } else if (!(dist[u] > 0 && parent[u] == w)) {
                    best = std::min(best, dist[u] + dist[w] + 1);
                }
            }
        }
        queue.clear();
        for (NodeId t : touched) dist[t] = kUnreachable;
        touched.clear();
    }
    if (best == kUnreachable) return InfiniteGirth{};
    return best;
}

std::vector<std::size_t> bfs_distances(const Graph& g, NodeId source, std::size_t limit) {
    std::vector<std::size_t> dist(g.node_count(), kUnreachable);
    std::deque<NodeId> queue{source};
    dist[source] = 0;
    while (!queue.empty()) {
        const NodeId u = queue.front();
        queue.pop_front();
        if (dist[u] >= limit) continue;
        for (NodeId w : g.neighbors(u)) {
            if (dist[w] == kUnreachable) {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    return dist;
}

std::optional<std::vector<std::uint8_t>> two_coloring(const Graph& g) {
    constexpr std::uint8_t kNone = 2;
    std::vector<std::uint8_t> color(g.node_count(), kNone);
    std::deque<NodeId> queue;
    for (std::size_t s = 0; s < g.node_count(); ++s) {
        if (color[s] != kNone) continue;
        color[s] = 0;
        queue.push_back(static_cast<NodeId>(s));
        while (!queue.empty()) {
            const NodeId u = queue.front();
            queue.pop_front();
            for (NodeId w : g.neighbors(u)) {
                if (color[w] == kNone) {
                    color[w] = static_cast<std::uint8_t>(1 - color[u]);
                    queue.push_back(w);
                } else if (color[w] == color[u]) {
                    return std::nullopt;
                }
            }
        }
    }
    return color;
}

bool is_bipartite(const Graph& g) { return two_coloring(g).has_value(); }

std::vector<std::size_t> connected_components(const Graph& g) {
    std::vector<std::size_t> comp(g.node_count(), kUnreachable);
    std::size_t next = 0;
    std::vector<NodeId> stack;
    for (std::size_t s = 0; s < g.node_count(); ++s) {
        if (comp[s] != kUnreachable) continue;
        comp[s] = next;
        stack.push_back(static_cast<NodeId>(s));
        while (!stack.empty()) {
            const NodeId u = stack.back();
            stack.pop_back();
            for (NodeId w : g.neighbors(u)) {
                if (comp[w] == kUnreachable) {
                    comp[w] = next;
                    stack.push_back(w);
                }
            }
        }
        ++next;
    }
    return comp;
}

bool is_connected(const Graph& g) {
    if (g.node_count() == 0) return true;
    const auto comp = connected_components(g);
    return std::all_of(comp.begin(), comp.end(), [](std::size_t c) { return c == 0; });
}

std::optional<std::size_t> RootedSubgraph::depth_of(NodeId original) const {
    auto it = local_of.find(original);
    if (it == local_of.end()) return std::nullopt;
    return depth[it->second];
}

RootedSubgraph k_hop_subgraph(const Graph& g, NodeId v, std::size_t k) {
    RootedSubgraph sub;
    sub.radius = k;
    sub.nodes.push_back(v);
    sub.depth.push_back(0);
    sub.local_of.emplace(v, 0);
    for (std::size_t head = 0; head < sub.nodes.size(); ++head) {
        if (sub.depth[head] == k) continue;
        for (NodeId w : g.neighbors(sub.nodes[head])) {
            if (sub.local_of.contains(w)) continue;
            sub.local_of.emplace(w, static_cast<NodeId>(sub.nodes.size()));
            sub.nodes.push_back(w);
            sub.depth.push_back(sub.depth[head] + 1);
        }
    }
    std::vector<std::vector<NodeId>> adjacency(sub.nodes.size());
    for (std::size_t a = 0; a < sub.nodes.size(); ++a) {
        for (NodeId w : g.neighbors(sub.nodes[a])) {
            auto it = sub.local_of.find(w);
            if (it == sub.local_of.end()) continue;
            const auto b = it->second;
            if (sub.depth[a] == k && sub.depth[b] == k) continue;
            adjacency[a].push_back(b);
        }
    }
    sub.graph = Graph::from_adjacency(std::move(adjacency));
    return sub;
}

LineGraph line_graph(const Graph& g) {
    LineGraph lg;
    lg.endpoints = g.edges();
    // incident[v] lists the line nodes of edges at v, ascending by edge index.
    std::vector<std::vector<NodeId>> incident(g.node_count());
    for (std::size_t e = 0; e < lg.endpoints.size(); ++e) {
        incident[lg.endpoints[e].first].push_back(static_cast<NodeId>(e));
        incident[lg.endpoints[e].second].push_back(static_cast<NodeId>(e));
    }
    std::vector<Edge> edges;
    for (const auto& list : incident) {
        for (std::size_t i = 0; i < list.size(); ++i) {
            for (std::size_t j = i + 1; j < list.size(); ++j) edges.emplace_back(list[i], list[j]);
        }
    }
    // Two distinct simple-graph edges share at most one endpoint, so no duplicates arise.
    lg.graph = Graph::from_edges(lg.endpoints.size(), edges);
    return lg;
}

Graph complete_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    return Graph::from_edges(n, edges);
}

Graph complete_bipartite(std::size_t a, std::size_t b) {
    std::vector<Edge> edges;
    for (NodeId u = 0; u < a; ++u)
        for (NodeId v = 0; v < b; ++v) edges.emplace_back(u, static_cast<NodeId>(a + v));
    return Graph::from_edges(a + b, edges);
}

Graph cycle_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u) edges.emplace_back(u, static_cast<NodeId>((u + 1) % n));
    return Graph::from_edges(n, edges);
}

Graph path_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (NodeId u = 0; u + 1 < n; ++u) edges.emplace_back(u, u + 1);
    return Graph::from_edges(n, edges);
}

Graph star_graph(std::size_t leaves) {
    std::vector<Edge> edges;
    for (NodeId u = 1; u <= leaves; ++u) edges.emplace_back(0, u);
    return Graph::from_edges(leaves + 1, edges);
}

Graph petersen_graph() {
    std::vector<Edge> edges;
    for (NodeId i = 0; i < 5; ++i) {
        edges.emplace_back(i, (i + 1) % 5);
        edges.emplace_back(i, i + 5);
        edges.emplace_back(i + 5, (i + 2) % 5 + 5);
    }
    return Graph::from_edges(10, edges);
}

}  // namespace kmw
