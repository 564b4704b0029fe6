#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "kmw/cluster_tree.hpp"
#include "kmw/ct_builder.hpp"
#include "kmw/errors.hpp"

using namespace kmw;

namespace {

// Growth rules replayed on a bare list of (level, leaf?, label toward parent).
std::vector<std::size_t> simulated_level_counts(std::size_t k) {
    struct Node {
        std::size_t level;
        bool leaf;
        unsigned toward_parent;  // exponent on this cluster's side of the parent edge
    };
    std::vector<Node> nodes{{0, false, 0}, {1, false, 1}, {1, true, 2}, {2, true, 1}};
    for (std::size_t r = 2; r <= k; ++r) {
        std::vector<Node> grown = nodes;
        for (auto& n : nodes) {
            if (!n.leaf) {
                grown.push_back({n.level + 1, true, static_cast<unsigned>(r + 1)});
            } else {
                for (unsigned p = 0; p <= r; ++p) {
                    if (p != n.toward_parent) grown.push_back({n.level + 1, true, p + 1});
                }
            }
        }
        for (std::size_t i = 0; i < nodes.size(); ++i) grown[i].leaf = false;
        nodes = std::move(grown);
    }
    std::vector<std::size_t> counts;
    for (const auto& n : nodes) {
        if (counts.size() <= n.level) counts.resize(n.level + 1, 0);
        ++counts[n.level];
    }
    return counts;
}

CTGraph with_edges(const CTGraph& ct, const std::vector<Edge>& add, const std::vector<Edge>& remove) {
    GraphBuilder b(ct.graph);
    for (const auto& [u, v] : remove) b.remove_edge(u, v);
    for (const auto& [u, v] : add) b.add_edge(u, v);
    return CTGraph{b.build(), ct.skeleton, ct.cluster_of};
}

}  // namespace

TEST_CASE("CT_1 matches the defining picture") {
    const auto s = build_skeleton(1, 4);
    REQUIRE(s.cluster_count() == 4);
    const std::vector<SkeletonEdge> expected{{0, 1, 0, 1}, {0, 2, 1, 2}, {1, 3, 0, 1}};
    CHECK(s.edges() == expected);
    CHECK(s.level_counts() == std::vector<std::size_t>{1, 2, 1});
    CHECK(s.cluster(1).position == Position::Internal);
    CHECK(s.cluster(2).position == Position::Leaf);
    CHECK(s.outgoing_exponent(0, 2) == 1u);
    CHECK(s.outgoing_exponent(2, 0) == 2u);
    CHECK_FALSE(s.outgoing_exponent(2, 3).has_value());
}

TEST_CASE("skeleton sizes for larger k") {
    CHECK(build_skeleton(2, 6).cluster_count() == 10);
    CHECK(build_skeleton(2, 6).level_counts() == std::vector<std::size_t>{1, 3, 4, 2});
    CHECK(build_skeleton(3, 8).cluster_count() == 32);
    CHECK(build_skeleton(3, 8).level_counts() == std::vector<std::size_t>{1, 4, 9, 12, 6});
}

TEST_CASE("cluster_count point values") {
    CHECK(cluster_count(1, 0) == 1);
    CHECK(cluster_count(1, 1) == 2);
    CHECK(cluster_count(1, 2) == 1);
    CHECK(cluster_count(2, 2) == 4);
    for (std::size_t k = 1; k <= 8; ++k) CHECK(cluster_count(k, k + 2) == 0);
    CHECK_THROWS_AS(cluster_count(40, 40), std::overflow_error);
}

TEST_CASE("closed form, constructive growth and replayed growth agree for k <= 6") {
    for (std::size_t k = 1; k <= 6; ++k) {
        const auto s = build_skeleton(k, 2 * (k + 1));
        const auto built = s.level_counts();
        const auto replayed = simulated_level_counts(k);
        CHECK(built == replayed);
        std::size_t total = 0;
        for (std::size_t l = 0; l <= k + 2; ++l) {
            const std::size_t constructive = l < built.size() ? built[l] : 0;
            CHECK(cluster_count(k, l) == constructive);
            total += cluster_count(k, l);
        }
        CHECK(total == s.cluster_count());
    }
}

TEST_CASE("internal clusters carry every exponent once; leaves have one edge") {
    for (std::size_t k = 1; k <= 5; ++k) {
        const auto s = build_skeleton(k, 2 * (k + 1));
        for (const auto& c : s.clusters()) {
            const auto links = s.links(c.id);
            if (c.position == Position::Leaf) {
                CHECK(links.size() == 1);
                continue;
            }
            std::vector<unsigned> exps;
            for (const auto& l : links) exps.push_back(l.own_exponent);
            std::sort(exps.begin(), exps.end());
            std::vector<unsigned> want(k + 1);
            std::iota(want.begin(), want.end(), 0u);
            CHECK(exps == want);
        }
    }
}

TEST_CASE("CT_{k-1} is exactly the internal part of CT_k") {
    for (std::size_t k = 2; k <= 6; ++k) {
        const auto big = build_skeleton(k, 2 * (k + 1));
        const auto small = build_skeleton(k - 1, 2 * (k + 1));
        for (const auto& c : big.clusters()) {
            CHECK((c.position == Position::Internal) == (c.id < small.cluster_count()));
        }
        std::vector<SkeletonEdge> restricted;
        for (const auto& e : big.edges()) {
            if (e.a < small.cluster_count() && e.b < small.cluster_count()) restricted.push_back(e);
        }
        CHECK(restricted == small.edges());
    }
}

TEST_CASE("labels along every edge differ by one exponent") {
    const auto s = build_skeleton(4, 10);
    for (const auto& e : s.edges()) {
        CHECK(e.exp_b == e.exp_a + 1);
        CHECK(s.cluster(e.b).level == s.cluster(e.a).level + 1);
        CHECK(s.cluster(e.b).parent == e.a);
    }
}

TEST_CASE("parameter checks") {
    CHECK_THROWS_AS(build_skeleton(0, 4), InvalidParameter);
    CHECK_THROWS_AS(build_skeleton(1, 3), InvalidParameter);
    CHECK_THROWS_AS(build_skeleton(2, 5), InvalidParameter);
    CHECK_NOTHROW(build_skeleton(2, 6));
    CHECK_THROWS_AS(predicted_sizes(1, 3), InvalidParameter);
}

TEST_CASE("predicted sizes") {
    const auto p = predicted_sizes(1, 4);
    CHECK(p.n0 == 64);
    CHECK(p.n == 100);
    CHECK(p.max_degree == 16);
    const auto q = predicted_sizes(1, 16);
    CHECK(q.n0 == 4096);
    CHECK(q.n == 4624);
    CHECK(q.max_degree == 256);
    CHECK(predicted_sizes(2, 6).n == BigInt(build_low_girth(2, 6).graph.node_count()));
}

TEST_CASE("order bounds hold across parameters") {
    for (std::size_t k = 1; k <= 6; ++k) {
        for (std::uint64_t beta = 2 * (k + 1); beta <= 2 * (k + 1) + 40; beta += 3) {
            const auto p = predicted_sizes(k, beta);
            CHECK(p.order_bound_holds);
            CHECK(p.excess_bound_holds);
            // Same inequality as a rational comparison computed separately.
            const BigInt b = beta;
            CHECK(p.n * (b - (k + 1)) < p.n0 * b);
        }
    }
}

TEST_CASE("validation flags corrupted graphs") {
    const auto ct = build_low_girth(1, 4);
    CHECK(validate_ct_graph(ct).ok());

    const NodeId a = ct.nodes_in(0).front();
    NodeId b = 0;
    for (NodeId w : ct.graph.neighbors(a)) {
        if (ct.cluster_of[w] == 1) b = w;
    }
    const auto missing = validate_ct_graph(with_edges(ct, {}, {{std::min(a, b), std::max(a, b)}}));
    std::map<NodeId, std::size_t> flagged;
    for (const auto& v : missing.violations) {
        if (v.kind == Violation::Kind::Biregularity) ++flagged[*v.node];
    }
    CHECK(flagged.contains(a));
    CHECK(flagged.contains(b));

    const auto c0 = ct.nodes_in(0);
    const auto extra = validate_ct_graph(with_edges(ct, {{c0[0], c0[1]}}, {}));
    CHECK(std::any_of(extra.violations.begin(), extra.violations.end(),
                      [](const Violation& v) { return v.kind == Violation::Kind::NotIndependent; }));

    const auto c2 = ct.nodes_in(2);
    const auto c3 = ct.nodes_in(3);
    const auto cross = validate_ct_graph(with_edges(ct, {{c2[0], c3[0]}}, {}));
    CHECK(std::any_of(cross.violations.begin(), cross.violations.end(),
                      [](const Violation& v) { return v.kind == Violation::Kind::NonSkeletonEdge; }));

    auto shrunk = ct;
    shrunk.cluster_of[c3[0]] = 2;
    const auto ratio = validate_ct_graph(shrunk);
    CHECK(std::any_of(ratio.violations.begin(), ratio.violations.end(),
                      [](const Violation& v) { return v.kind == Violation::Kind::SizeRatio; }));

    auto bad = ct;
    bad.cluster_of[0] = 99;
    CHECK(validate_ct_graph(bad).violations.front().kind == Violation::Kind::ClusterOutOfRange);
}

TEST_CASE("skeleton json and dot") {
    const auto s = build_skeleton(2, 6);
    const auto j = skeleton_to_json(s);
    CHECK(j.at("clusters").size() == 10);
    CHECK(skeleton_from_json(j) == s);
    auto tampered = j;
    tampered["edges"][0]["exp_b"] = 5;
    CHECK_THROWS_AS(skeleton_from_json(tampered), InvalidParameter);

    std::ostringstream os;
    write_skeleton_dot(os, s);
    CHECK(os.str().find("C0 -- C1") != std::string::npos);
}

TEST_CASE("checked_pow") {
    CHECK(checked_pow(4, 3) == 64u);
    CHECK(checked_pow(7, 0) == 1u);
    CHECK_FALSE(checked_pow(10, 20).has_value());
}
