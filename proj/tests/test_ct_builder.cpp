#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kmw/ct_builder.hpp"
#include "kmw/errors.hpp"
#include "kmw/matching.hpp"

using namespace kmw;

namespace {

std::size_t edges_between(const CTGraph& ct, ClusterId a, ClusterId b) {
    std::size_t count = 0;
    for (const auto& [u, v] : ct.graph.edges()) {
        const auto cu = ct.cluster_of[u], cv = ct.cluster_of[v];
        count += (cu == a && cv == b) || (cu == b && cv == a);
    }
    return count;
}

}  // namespace

TEST_CASE("G'_1(4) counts") {
    const auto ct = build_low_girth(1, 4);
    CHECK(ct.graph.node_count() == 100);
    CHECK(ct.graph.edge_count() == 336);
    CHECK(edges_between(ct, 0, 1) == 64);
    CHECK(edges_between(ct, 0, 2) == 256);
    CHECK(edges_between(ct, 1, 3) == 16);
    CHECK(ct.graph.max_degree() == 16);
    CHECK(girth(ct.graph) == Girth{std::size_t{4}});
    for (NodeId v : ct.nodes_in(0)) CHECK(ct.graph.degree(v) == 5);
    CHECK(validate_ct_graph(ct).ok());
}

TEST_CASE("clusters are contiguous and in id order") {
    const auto ct = build_low_girth(2, 6);
    CHECK(std::is_sorted(ct.cluster_of.begin(), ct.cluster_of.end()));
    CHECK(BigInt(ct.graph.node_count()) == predicted_sizes(2, 6).n);
    CHECK(validate_ct_graph(ct).ok());
}

TEST_CASE("edge count is the sum of |A| * beta^x over skeleton edges") {
    for (auto [k, beta] : std::vector<std::pair<std::size_t, std::uint64_t>>{{1, 4}, {1, 7}, {2, 6}, {2, 7}}) {
        const auto ct = build_low_girth(k, beta);
        std::vector<std::size_t> size(ct.skeleton.cluster_count(), 0);
        for (auto c : ct.cluster_of) ++size[c];
        std::size_t expected = 0;
        for (const auto& e : ct.skeleton.edges()) {
            expected += size[e.a] * *checked_pow(beta, e.exp_a);
            CHECK(edges_between(ct, e.a, e.b) == size[e.a] * *checked_pow(beta, e.exp_a));
        }
        CHECK(ct.graph.edge_count() == expected);
    }
}

TEST_CASE("even and odd levels form the bipartition") {
    for (auto [k, beta] : std::vector<std::pair<std::size_t, std::uint64_t>>{{1, 4}, {2, 6}}) {
        const auto ct = build_low_girth(k, beta);
        for (const auto& [u, v] : ct.graph.edges()) {
            const auto lu = ct.skeleton.cluster(ct.cluster_of[u]).level;
            const auto lv = ct.skeleton.cluster(ct.cluster_of[v]).level;
            CHECK(lu % 2 != lv % 2);
        }
        CHECK(is_bipartite(ct.graph));
    }
}

TEST_CASE("matching double") {
    const auto ct = build_low_girth(1, 4);
    const auto d = build_matching_double(ct);
    CHECK(d.graph.node_count() == 200);
    CHECK(d.graph.edge_count() == 772);
    CHECK(d.graph.max_degree() == 17);
    for (NodeId i = 0; i < 100; ++i) {
        CHECK(d.graph.has_edge(i, i + 100));
        CHECK(d.partner[i] == i + 100);
        CHECK(d.partner[i + 100] == i);
        CHECK(d.side[i] == 0);
        CHECK(d.side[i + 100] == 1);
        CHECK(d.cluster_of[i] == d.cluster_of[i + 100]);
    }
    const auto flat = d.flat_clusters();
    CHECK(flat[100] == ct.cluster_of[0] + 4);

    // Parity partition with the copy's parity flipped.
    for (const auto& [u, v] : d.graph.edges()) {
        const auto parity = [&](NodeId x) {
            return (d.skeleton.cluster(d.cluster_of[x]).level + d.side[x]) % 2;
        };
        CHECK(parity(u) != parity(v));
    }
    CHECK(maximum_bipartite_matching(d.graph).size == 100);
}

TEST_CASE("documents round trip") {
    const auto ct = build_low_girth(1, 5);
    const auto back = ct_graph_from_document(to_document(ct, "low-girth"));
    CHECK(back.graph == ct.graph);
    CHECK(back.cluster_of == ct.cluster_of);
    CHECK(back.skeleton == ct.skeleton);

    const auto d = build_matching_double(ct);
    const auto dback = doubled_from_document(to_document(d));
    CHECK(dback.graph == d.graph);
    CHECK(dback.partner == d.partner);
    CHECK(dback.side == d.side);

    auto doc = to_document(ct, "low-girth");
    doc.meta.erase("k");
    CHECK_THROWS(ct_graph_from_document(doc));
}

TEST_CASE("cluster size layout without edges") {
    const auto s = build_skeleton(3, 8);
    const auto sizes = low_girth_cluster_sizes(s);
    CHECK(sizes.size() == 32);
    BigInt total = 0;
    for (auto size : sizes) total += size;
    CHECK(total == predicted_sizes(3, 8).n);
    for (const auto& e : s.edges()) CHECK(sizes[e.a] == 8 * sizes[e.b]);

    const auto ct = build_low_girth(2, 6);
    const auto small = low_girth_cluster_sizes(ct.skeleton);
    for (ClusterId c = 0; c < small.size(); ++c) CHECK(ct.nodes_in(c).size() == small[c]);
}

TEST_CASE("invalid parameters") {
    CHECK_THROWS_AS(build_low_girth(1, 3), InvalidParameter);
    CHECK_THROWS_AS(build_low_girth(0, 4), InvalidParameter);
}
