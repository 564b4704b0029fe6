#include "kmw/cluster_tree.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "kmw/errors.hpp"

namespace kmw {

using nlohmann::json;

std::string to_string(Position p) { return p == Position::Internal ? "internal" : "leaf"; }

std::string to_string(Violation::Kind kind) {
    switch (kind) {
        case Violation::Kind::ClusterOutOfRange: return "cluster-out-of-range";
        case Violation::Kind::NotIndependent: return "not-independent";
        case Violation::Kind::NonSkeletonEdge: return "non-skeleton-edge";
        case Violation::Kind::Biregularity: return "biregularity";
        case Violation::Kind::SizeRatio: return "size-ratio";
    }
    return "unknown";
}

std::optional<std::uint64_t> checked_pow(std::uint64_t base, unsigned exponent) {
    std::uint64_t result = 1;
    for (unsigned i = 0; i < exponent; ++i) {
        if (__builtin_mul_overflow(result, base, &result)) return std::nullopt;
    }
    return result;
}

std::optional<unsigned> ClusterTreeSkeleton::outgoing_exponent(ClusterId from, ClusterId to) const {
    for (const auto& link : links_.at(from)) {
        if (link.neighbor == to) return link.own_exponent;
    }
    return std::nullopt;
}

std::vector<std::size_t> ClusterTreeSkeleton::level_counts() const {
    std::vector<std::size_t> counts;
    for (const auto& c : clusters_) {
        if (counts.size() <= c.level) counts.resize(c.level + 1, 0);
        ++counts[c.level];
    }
    return counts;
}

void ClusterTreeSkeleton::add_cluster(Cluster c) {
    c.id = static_cast<ClusterId>(clusters_.size());
    clusters_.push_back(c);
    links_.emplace_back();
}

void ClusterTreeSkeleton::add_edge(SkeletonEdge e) {
    edges_.push_back(e);
    links_[e.a].push_back({e.b, e.exp_a, e.exp_b});
    links_[e.b].push_back({e.a, e.exp_b, e.exp_a});
}

ClusterTreeSkeleton build_skeleton(std::size_t k, std::uint64_t beta) {
    if (k < 1) throw InvalidParameter("k must be at least 1");
    if (beta < 2 * (k + 1)) {
        throw InvalidParameter("beta must be at least 2(k+1) = " + std::to_string(2 * (k + 1)) +
                               ", got " + std::to_string(beta));
    }
    ClusterTreeSkeleton s;
    s.k_ = k;
    s.beta_ = beta;

    auto attach = [&s](ClusterId parent, unsigned exponent, std::size_t round) {
        Cluster c;
        c.level = s.clusters_[parent].level + 1;
        c.position = Position::Leaf;
        c.round = round;
        c.parent = parent;
        c.parent_exponent = exponent;
        s.add_cluster(c);
        s.add_edge({parent, static_cast<ClusterId>(s.clusters_.size() - 1), exponent, exponent + 1});
    };

    // CT_1: C_0 -(0,1)- C_1, C_0 -(1,2)- C_2, C_1 -(0,1)- C_3.
    s.add_cluster(Cluster{});
    attach(0, 0, 1);
    attach(0, 1, 1);
    attach(1, 0, 1);
    s.clusters_[1].position = Position::Internal;

    for (std::size_t round = 2; round <= k; ++round) {
        const auto existing = s.clusters_.size();
        for (ClusterId c = 0; c < existing; ++c) {
            const Cluster current = s.clusters_[c];
            if (current.position == Position::Internal) {
                attach(c, static_cast<unsigned>(round), round);
            } else {
                const unsigned history = current.parent_exponent + 1;
                for (unsigned p = 0; p <= round; ++p) {
                    if (p != history) attach(c, p, round);
                }
                s.clusters_[c].position = Position::Internal;
            }
        }
    }
    return s;
}

std::uint64_t cluster_count(std::size_t k, std::size_t level) {
    if (level == 0) return 1;
    if (level > k + 1) return 0;
    // k!/(k-l+1)! * (k-l+2) = (k-l+2) * prod_{j=k-l+2}^{k} j
    std::uint64_t result = k - level + 2;
    for (std::size_t j = k - level + 2; j <= k; ++j) {
        if (__builtin_mul_overflow(result, static_cast<std::uint64_t>(j), &result)) {
            throw std::overflow_error("cluster_count overflows 64 bits");
        }
    }
    return result;
}

PredictedSizes predicted_sizes(std::size_t k, std::uint64_t beta) {
    if (k < 1 || beta < 2 * (k + 1)) {
        throw InvalidParameter("predicted_sizes requires k >= 1 and beta >= 2(k+1)");
    }
    PredictedSizes p;
    const BigInt b = beta;
    p.n0 = boost::multiprecision::pow(b, static_cast<unsigned>(2 * k + 1));
    p.n = 0;
    for (std::size_t l = 0; l <= k + 1; ++l) {
        BigInt size = boost::multiprecision::pow(b, static_cast<unsigned>(2 * k - l + 1));
        p.n += BigInt(cluster_count(k, l)) * size;
        p.cluster_size.push_back(std::move(size));
    }
    p.max_degree = boost::multiprecision::pow(b, static_cast<unsigned>(k + 1));
    const BigInt kp1 = k + 1;
    p.order_bound_holds = p.n * (b - kp1) < p.n0 * b;
    p.excess_bound_holds = (p.n - p.n0) * b < p.n0 * 2 * kp1;
    return p;
}

std::vector<NodeId> CTGraph::nodes_in(ClusterId c) const {
    std::vector<NodeId> out;
    for (std::size_t v = 0; v < cluster_of.size(); ++v) {
        if (cluster_of[v] == c) out.push_back(static_cast<NodeId>(v));
    }
    return out;
}

ValidationReport validate_ct_graph(const CTGraph& ct) {
    ValidationReport report;
    const auto& g = ct.graph;
    const auto& s = ct.skeleton;
    auto add = [&report](Violation v) { report.violations.push_back(std::move(v)); };

    if (ct.cluster_of.size() != g.node_count()) {
        add({Violation::Kind::ClusterOutOfRange, std::nullopt, std::nullopt, 0, 0,
             "cluster assignment has " + std::to_string(ct.cluster_of.size()) + " entries for " +
                 std::to_string(g.node_count()) + " nodes"});
        return report;
    }
    bool clusters_ok = true;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (ct.cluster_of[v] >= s.cluster_count()) {
            clusters_ok = false;
            add({Violation::Kind::ClusterOutOfRange, v, std::nullopt, ct.cluster_of[v], 0,
                 "node " + std::to_string(v) + " assigned to unknown cluster " +
                     std::to_string(ct.cluster_of[v])});
        }
    }
    if (!clusters_ok) return report;

    std::vector<std::size_t> cluster_sizes(s.cluster_count(), 0);
    for (ClusterId c : ct.cluster_of) ++cluster_sizes[c];

    std::vector<std::size_t> counts;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        const ClusterId cv = ct.cluster_of[v];
        const auto links = s.links(cv);
        counts.assign(links.size(), 0);
        for (NodeId w : g.neighbors(v)) {
            const ClusterId cw = ct.cluster_of[w];
            if (cw == cv) {
                if (v < w) {
                    add({Violation::Kind::NotIndependent, v, w, cv, cw,
                         "edge {" + std::to_string(v) + "," + std::to_string(w) +
                             "} inside cluster " + std::to_string(cv)});
                }
                continue;
            }
            auto it = std::find_if(links.begin(), links.end(),
                                   [cw](const ClusterLink& l) { return l.neighbor == cw; });
            if (it == links.end()) {
                if (v < w) {
                    add({Violation::Kind::NonSkeletonEdge, v, w, cv, cw,
                         "edge {" + std::to_string(v) + "," + std::to_string(w) +
                             "} joins non-adjacent clusters " + std::to_string(cv) + " and " +
                             std::to_string(cw)});
                }
                continue;
            }
            ++counts[static_cast<std::size_t>(it - links.begin())];
        }
        for (std::size_t i = 0; i < links.size(); ++i) {
            const auto expected = checked_pow(s.beta(), links[i].own_exponent);
            if (!expected || *expected != counts[i]) {
                add({Violation::Kind::Biregularity, v, std::nullopt, cv, links[i].neighbor,
                     "node " + std::to_string(v) + " in cluster " + std::to_string(cv) + " has " +
                         std::to_string(counts[i]) + " neighbors in cluster " +
                         std::to_string(links[i].neighbor) + ", expected beta^" +
                         std::to_string(links[i].own_exponent)});
            }
        }
    }

    for (const auto& e : s.edges()) {
        const BigInt lhs = BigInt(cluster_sizes[e.a]);
        const BigInt rhs = BigInt(cluster_sizes[e.b]) * s.beta();
        if (lhs != rhs) {
            add({Violation::Kind::SizeRatio, std::nullopt, std::nullopt, e.a, e.b,
                 "|C" + std::to_string(e.a) + "| = " + std::to_string(cluster_sizes[e.a]) +
                     " is not beta * |C" + std::to_string(e.b) + "| = beta * " +
                     std::to_string(cluster_sizes[e.b])});
        }
    }
    return report;
}

json skeleton_to_json(const ClusterTreeSkeleton& s) {
    json clusters = json::array();
    for (const auto& c : s.clusters()) {
        json jc{{"id", c.id}, {"level", c.level}, {"position", to_string(c.position)}, {"round", c.round}};
        if (c.parent) jc["parent"] = *c.parent;
        clusters.push_back(std::move(jc));
    }
    json edges = json::array();
    for (const auto& e : s.edges()) {
        edges.push_back({{"a", e.a}, {"b", e.b}, {"exp_a", e.exp_a}, {"exp_b", e.exp_b}});
    }
    return json{{"k", s.k()}, {"beta", s.beta()}, {"clusters", std::move(clusters)}, {"edges", std::move(edges)}};
}

ClusterTreeSkeleton skeleton_from_json(const json& j) {
    auto s = build_skeleton(j.at("k").get<std::size_t>(), j.at("beta").get<std::uint64_t>());
    if (j.contains("edges")) {
        std::vector<SkeletonEdge> edges;
        for (const auto& e : j.at("edges")) {
            edges.push_back({e.at("a").get<ClusterId>(), e.at("b").get<ClusterId>(),
                             e.at("exp_a").get<unsigned>(), e.at("exp_b").get<unsigned>()});
        }
        if (edges != s.edges()) throw InvalidParameter("skeleton edges do not match CT_k for (k, beta)");
    }
    if (j.contains("clusters") && j.at("clusters").size() != s.cluster_count()) {
        throw InvalidParameter("skeleton cluster count does not match CT_k for (k, beta)");
    }
    return s;
}

void write_skeleton_dot(std::ostream& out, const ClusterTreeSkeleton& s) {
    static constexpr const char* shades[] = {"gray90", "gray75", "gray60", "gray45", "gray30", "gray20", "gray10"};
    out << "graph CT" << s.k() << " {\n  rankdir=LR;\n  node [style=filled];\n";
    for (const auto& c : s.clusters()) {
        out << "  C" << c.id << " [label=\"C" << c.id << "\", shape="
            << (c.position == Position::Internal ? "box, penwidth=2" : "ellipse")
            << ", fillcolor=" << shades[std::min<std::size_t>(c.level, 6)] << "];\n";
    }
    for (const auto& e : s.edges()) {
        out << "  C" << e.a << " -- C" << e.b << " [taillabel=\"" << e.exp_a << "\", headlabel=\""
            << e.exp_b << "\"];\n";
    }
    out << "}\n";
}

}  // namespace kmw
