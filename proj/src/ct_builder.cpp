#include "kmw/ct_builder.hpp"

#include <limits>

#include "kmw/errors.hpp"

namespace kmw {

namespace {

std::uint64_t pow_or_throw(std::uint64_t base, unsigned exponent) {
    auto value = checked_pow(base, exponent);
    if (!value) throw InvalidParameter("instance too large for 64-bit node indices");
    return *value;
}

}  // namespace

std::vector<std::uint64_t> low_girth_cluster_sizes(const ClusterTreeSkeleton& skeleton) {
    std::vector<std::uint64_t> sizes;
    for (const auto& c : skeleton.clusters()) {
        sizes.push_back(pow_or_throw(skeleton.beta(), static_cast<unsigned>(2 * skeleton.k() - c.level + 1)));
    }
    return sizes;
}

CTGraph build_low_girth(std::size_t k, std::uint64_t beta) {
    auto skeleton = build_skeleton(k, beta);
    const auto count = skeleton.cluster_count();
    const auto sizes = low_girth_cluster_sizes(skeleton);

    std::vector<std::uint64_t> first(count + 1, 0);
    for (ClusterId c = 0; c < count; ++c) {
        if (__builtin_add_overflow(first[c], sizes[c], &first[c + 1])) {
            throw InvalidParameter("instance too large for 64-bit node indices");
        }
    }
    if (first[count] > std::numeric_limits<NodeId>::max()) {
        throw InvalidParameter("instance has " + std::to_string(first[count]) + " nodes, too many to build");
    }

    std::vector<ClusterId> cluster_of(first[count]);
    for (ClusterId c = 0; c < count; ++c) {
        for (auto v = first[c]; v < first[c + 1]; ++v) cluster_of[v] = c;
    }

    std::vector<Edge> edges;
    for (const auto& e : skeleton.edges()) {
        const auto a_block = pow_or_throw(beta, e.exp_b);  // A-side nodes per block
        const auto b_block = pow_or_throw(beta, e.exp_a);  // B-side nodes per block
        const auto blocks = (first[e.a + 1] - first[e.a]) / a_block;
        for (std::uint64_t j = 0; j < blocks; ++j) {
            for (std::uint64_t x = 0; x < a_block; ++x) {
                for (std::uint64_t y = 0; y < b_block; ++y) {
                    edges.emplace_back(static_cast<NodeId>(first[e.a] + j * a_block + x),
                                       static_cast<NodeId>(first[e.b] + j * b_block + y));
                }
            }
        }
    }
    return CTGraph{Graph::from_edges(cluster_of.size(), edges), std::move(skeleton), std::move(cluster_of)};
}

std::vector<std::uint32_t> DoubledGraph::flat_clusters() const {
    std::vector<std::uint32_t> out(cluster_of.size());
    const auto offset = static_cast<std::uint32_t>(skeleton.cluster_count());
    for (std::size_t v = 0; v < out.size(); ++v) out[v] = cluster_of[v] + (side[v] ? offset : 0);
    return out;
}

DoubledGraph build_matching_double(const CTGraph& ct) {
    const auto n = ct.graph.node_count();
    std::vector<Edge> edges;
    edges.reserve(2 * ct.graph.edge_count() + n);
    for (const auto& [u, v] : ct.graph.edges()) {
        edges.emplace_back(u, v);
        edges.emplace_back(static_cast<NodeId>(u + n), static_cast<NodeId>(v + n));
    }
    for (std::size_t i = 0; i < n; ++i) edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(i + n));

    DoubledGraph d{Graph::from_edges(2 * n, edges), ct.skeleton, {}, {}, {}, n};
    d.cluster_of.resize(2 * n);
    d.side.resize(2 * n);
    d.partner.resize(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        d.cluster_of[i] = d.cluster_of[i + n] = ct.cluster_of[i];
        d.side[i] = 0;
        d.side[i + n] = 1;
        d.partner[i] = static_cast<NodeId>(i + n);
        d.partner[i + n] = static_cast<NodeId>(i);
    }
    return d;
}

GraphDocument to_document(const CTGraph& ct, const std::string& stage) {
    GraphDocument doc;
    doc.graph = ct.graph;
    doc.clusters = std::vector<std::uint32_t>(ct.cluster_of.begin(), ct.cluster_of.end());
    doc.meta = {{"k", ct.skeleton.k()}, {"beta", ct.skeleton.beta()}, {"stage", stage}};
    return doc;
}

GraphDocument to_document(const DoubledGraph& d) {
    GraphDocument doc;
    doc.graph = d.graph;
    doc.clusters = d.flat_clusters();
    doc.meta = {{"k", d.skeleton.k()},
                {"beta", d.skeleton.beta()},
                {"stage", "double"},
                {"partner", d.partner}};
    return doc;
}

namespace {

ClusterTreeSkeleton skeleton_of(const GraphDocument& doc) {
    if (!doc.meta.contains("k") || !doc.meta.contains("beta")) {
        throw InvalidGraph("graph meta must record k and beta");
    }
    if (!doc.clusters) throw InvalidGraph("graph has no cluster assignment");
    return build_skeleton(doc.meta.at("k").get<std::size_t>(), doc.meta.at("beta").get<std::uint64_t>());
}

}  // namespace

CTGraph ct_graph_from_document(const GraphDocument& doc) {
    auto skeleton = skeleton_of(doc);
    std::vector<ClusterId> clusters(doc.clusters->begin(), doc.clusters->end());
    return CTGraph{doc.graph, std::move(skeleton), std::move(clusters)};
}

DoubledGraph doubled_from_document(const GraphDocument& doc) {
    auto skeleton = skeleton_of(doc);
    const auto n = doc.graph.node_count();
    const auto offset = skeleton.cluster_count();
    DoubledGraph d{doc.graph, std::move(skeleton), {}, {}, {}, n / 2};
    d.cluster_of.resize(n);
    d.side.resize(n);
    for (std::size_t v = 0; v < n; ++v) {
        const auto c = (*doc.clusters)[v];
        d.side[v] = c >= offset ? 1 : 0;
        d.cluster_of[v] = static_cast<ClusterId>(c >= offset ? c - offset : c);
    }
    if (doc.meta.contains("partner")) {
        d.partner = doc.meta.at("partner").get<std::vector<NodeId>>();
        if (d.partner.size() != n) throw InvalidGraph("partner map length differs from n");
    } else {
        if (n % 2 != 0) throw InvalidGraph("doubled graph needs an even node count");
        d.partner.resize(n);
        for (std::size_t v = 0; v < n; ++v) d.partner[v] = static_cast<NodeId>(v < n / 2 ? v + n / 2 : v - n / 2);
    }
    for (std::size_t v = 0; v < n; ++v) {
        const auto p = d.partner[v];
        if (p >= n || d.partner[p] != v || !doc.graph.has_edge(static_cast<NodeId>(v), p)) {
            throw InvalidGraph("partner map is not a perfect matching of the graph");
        }
    }
    return d;
}

}  // namespace kmw
