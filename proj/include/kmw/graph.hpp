#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

namespace kmw {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

/// Simple undirected graph over nodes 0..n-1 in compressed adjacency form.
/// Neighbor lists are sorted ascending; the object is immutable once built.
class Graph {
public:
    Graph() = default;
    explicit Graph(std::size_t node_count);

    /// Builds a graph from an edge list in any order. Throws InvalidGraph on
    /// self-loops, duplicate edges or out-of-range endpoints.
    static Graph from_edges(std::size_t node_count, std::span<const Edge> edges);

    /// Builds from per-node neighbor lists; each list is sorted internally.
    /// Symmetry and simplicity are checked.
    static Graph from_adjacency(std::vector<std::vector<NodeId>> adjacency);

    std::size_t node_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t edge_count() const { return targets_.size() / 2; }

    std::span<const NodeId> neighbors(NodeId v) const {
        return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
    }
    std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
    std::size_t max_degree() const;
    std::size_t min_degree() const;
    bool is_regular() const;
    bool has_edge(NodeId u, NodeId v) const;

    /// All edges as (u, v) with u < v, sorted lexicographically.
    std::vector<Edge> edges() const;

    bool operator==(const Graph&) const = default;

private:
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> targets_;
};

/// Mutable adjacency used while a construction adds and removes edges.
class GraphBuilder {
public:
    explicit GraphBuilder(std::size_t node_count = 0) : adjacency_(node_count) {}
    explicit GraphBuilder(const Graph& g);

    std::size_t node_count() const { return adjacency_.size(); }
    NodeId add_node();
    NodeId add_nodes(std::size_t count);  // returns the first new id

    void add_edge(NodeId u, NodeId v);     // throws InvalidGraph on loops/duplicates
    void remove_edge(NodeId u, NodeId v);  // throws InvalidGraph if absent
    bool has_edge(NodeId u, NodeId v) const;
    std::size_t degree(NodeId v) const { return adjacency_[v].size(); }
    const std::vector<NodeId>& neighbors(NodeId v) const { return adjacency_[v]; }

    Graph build() const;

private:
    std::vector<std::vector<NodeId>> adjacency_;
};

struct InfiniteGirth {
    bool operator==(const InfiniteGirth&) const = default;
};

/// Length of the shortest cycle, or InfiniteGirth for forests.
using Girth = std::variant<std::size_t, InfiniteGirth>;

bool girth_at_least(const Girth& girth, std::size_t bound);
std::string to_string(const Girth& girth);

/// Exact girth: BFS from every node, stopping each search once it can no
/// longer improve on the best cycle found so far.
Girth girth(const Graph& g);

/// Hop distances from `source`; kUnreachable beyond `limit` or when disconnected.
std::vector<std::size_t> bfs_distances(const Graph& g, NodeId source,
                                       std::size_t limit = kUnreachable);

/// Proper 2-coloring (colors 0/1, BFS in ascending order), or nullopt.
std::optional<std::vector<std::uint8_t>> two_coloring(const Graph& g);
bool is_bipartite(const Graph& g);
bool is_connected(const Graph& g);

/// Component index per node, numbered in order of smallest member.
std::vector<std::size_t> connected_components(const Graph& g);

/// G^k(v): nodes within distance k of the root, induced edges minus those
/// joining two nodes that are both at distance exactly k.
struct RootedSubgraph {
    Graph graph;                     // local indices, BFS discovery order
    std::vector<NodeId> nodes;       // local -> original node
    std::vector<std::size_t> depth;  // local -> distance from root
    std::size_t radius = 0;
    std::unordered_map<NodeId, NodeId> local_of;  // original -> local

    NodeId root() const { return nodes.front(); }
    std::optional<std::size_t> depth_of(NodeId original) const;
    bool contains(NodeId original) const { return local_of.contains(original); }
    bool is_tree() const { return graph.edge_count() + 1 == graph.node_count() && is_connected(graph); }
};

RootedSubgraph k_hop_subgraph(const Graph& g, NodeId v, std::size_t k);

struct LineGraph {
    Graph graph;
    std::vector<Edge> endpoints;  // line node -> original edge (u < v)
};

/// One node per edge (in lexicographic edge order); adjacent iff the edges share an endpoint.
LineGraph line_graph(const Graph& g);

// Small named graphs used throughout tests and examples.
Graph complete_graph(std::size_t n);
Graph complete_bipartite(std::size_t a, std::size_t b);
Graph cycle_graph(std::size_t n);
Graph path_graph(std::size_t n);
Graph star_graph(std::size_t leaves);
Graph petersen_graph();

}  // namespace kmw
