#include "kmw/lifts.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "kmw/errors.hpp"
#include "kmw/matching.hpp"

namespace kmw {

std::string CoveringCheck::describe() const {
    if (ok()) return "ok";
    std::ostringstream out;
    const char* sep = "";
    auto flag = [&](bool good, const char* what) {
        if (!good) {
            out << sep << what;
            sep = ", ";
        }
    };
    flag(sizes_match, "map size or range");
    flag(surjective, "not surjective");
    flag(adjacency_preserving, "not adjacency preserving");
    flag(locally_bijective, "not locally bijective");
    flag(fibers_equal, "unequal fibers");
    if (first_bad_node) out << " (node " << *first_bad_node << ")";
    return out.str();
}

CoveringCheck check_covering_map(const CoveringMap& cm) {
    CoveringCheck check;
    const Graph& s = *cm.source;
    const Graph& t = *cm.target;
    auto bad = [&check](NodeId v) {
        if (!check.first_bad_node) check.first_bad_node = v;
    };
    if (cm.map.size() != s.node_count()) {
        check.sizes_match = false;
        return check;
    }
    std::vector<std::size_t> fiber(t.node_count(), 0);
    for (NodeId v = 0; v < s.node_count(); ++v) {
        if (cm.map[v] >= t.node_count()) {
            check.sizes_match = false;
            bad(v);
            return check;
        }
        ++fiber[cm.map[v]];
    }
    for (NodeId x = 0; x < t.node_count(); ++x) {
        if (fiber[x] == 0) {
            check.surjective = false;
            break;
        }
    }
    std::vector<NodeId> images;
    for (NodeId v = 0; v < s.node_count(); ++v) {
        const NodeId x = cm.map[v];
        images.clear();
        bool into_neighborhood = true;
        for (NodeId w : s.neighbors(v)) {
            if (!t.has_edge(x, cm.map[w])) {
                check.adjacency_preserving = false;
                into_neighborhood = false;
                bad(v);
            }
            images.push_back(cm.map[w]);
        }
        std::sort(images.begin(), images.end());
        const bool distinct = std::adjacent_find(images.begin(), images.end()) == images.end();
        if (!into_neighborhood || !distinct || images.size() != t.degree(x)) {
            check.locally_bijective = false;
            bad(v);
        }
    }
    const auto component = connected_components(t);
    std::vector<std::optional<std::size_t>> size_of_component(t.node_count());
    for (NodeId x = 0; x < t.node_count(); ++x) {
        auto& expected = size_of_component[component[x]];
        if (!expected) {
            expected = fiber[x];
        } else if (*expected != fiber[x]) {
            check.fibers_equal = false;
        }
    }
    return check;
}

bool verify_covering_map(const CoveringMap& cm) { return check_covering_map(cm).ok(); }

CoveringMap compose(const CoveringMap& inner, const CoveringMap& outer) {
    if (inner.target->node_count() != outer.source->node_count()) {
        throw InvalidParameter("covering maps do not compose");
    }
    CoveringMap out{inner.source, outer.target, std::vector<NodeId>(inner.map.size())};
    for (std::size_t v = 0; v < inner.map.size(); ++v) out.map[v] = outer.map[inner.map[v]];
    return out;
}

CoveringMap identity_covering(std::shared_ptr<const Graph> g) {
    std::vector<NodeId> map(g->node_count());
    for (std::size_t v = 0; v < map.size(); ++v) map[v] = static_cast<NodeId>(v);
    return CoveringMap{g, g, std::move(map)};
}

std::vector<std::vector<Edge>> matching_decomposition(const Graph& g) {
    auto coloring = two_coloring(g);
    if (!coloring) throw NotBipartite();
    if (!g.is_regular()) throw NotRegular();
    const auto delta = g.node_count() == 0 ? 0 : g.max_degree();

    std::vector<NodeId> index(g.node_count());
    std::vector<NodeId> left, right;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        auto& side = (*coloring)[v] == 0 ? left : right;
        index[v] = static_cast<NodeId>(side.size());
        side.push_back(v);
    }
    std::vector<std::vector<NodeId>> adj(left.size());
    for (std::size_t i = 0; i < left.size(); ++i) {
        for (NodeId w : g.neighbors(left[i])) adj[i].push_back(index[w]);
    }

    std::vector<std::vector<Edge>> matchings;
    for (std::size_t round = 0; round < delta; ++round) {
        const auto m = hopcroft_karp(right.size(), adj);
        if (m.size != left.size()) throw Error("regular bipartite graph without a perfect matching");
        std::vector<Edge> matching;
        for (std::size_t i = 0; i < left.size(); ++i) {
            const NodeId u = left[i];
            const NodeId w = right[m.mate_left[i]];
            matching.emplace_back(std::min(u, w), std::max(u, w));
            auto& row = adj[i];
            row.erase(std::find(row.begin(), row.end(), m.mate_left[i]));
        }
        std::sort(matching.begin(), matching.end());
        matchings.push_back(std::move(matching));
    }
    return matchings;
}

CoveringMap canonical_double_cover(const Graph& g) {
    const auto n = static_cast<NodeId>(g.node_count());
    std::vector<Edge> edges;
    edges.reserve(2 * g.edge_count());
    for (const auto& [v, w] : g.edges()) {
        edges.emplace_back(v, w + n);
        edges.emplace_back(w, v + n);
    }
    auto cover = std::make_shared<const Graph>(Graph::from_edges(2 * g.node_count(), edges));
    std::vector<NodeId> map(2 * g.node_count());
    for (NodeId x = 0; x < map.size(); ++x) map[x] = x % n;
    return CoveringMap{std::move(cover), std::make_shared<const Graph>(g), std::move(map)};
}

namespace {

CoveringMap bipartite_version(const Graph& g) {
    if (is_bipartite(g)) return identity_covering(std::make_shared<const Graph>(g));
    return canonical_double_cover(g);
}

}  // namespace

CommonLift common_lift(const Graph& h, const Graph& h_prime) {
    if (!h.is_regular() || !h_prime.is_regular()) throw NotRegular();
    const auto d1 = h.node_count() == 0 ? 0 : h.max_degree();
    const auto d2 = h_prime.node_count() == 0 ? 0 : h_prime.max_degree();
    if (d1 != d2) throw DegreeMismatch(d1, d2);

    const auto a = bipartite_version(h);
    const auto b = bipartite_version(h_prime);
    const auto ma = matching_decomposition(*a.source);
    const auto mb = matching_decomposition(*b.source);
    const auto nb = static_cast<NodeId>(b.source->node_count());
    const auto n = a.source->node_count() * b.source->node_count();
    if (n > std::numeric_limits<NodeId>::max()) throw TooLarge("common lift exceeds 32-bit node indices");

    std::vector<Edge> edges;
    for (std::size_t i = 0; i < ma.size(); ++i) {
        for (const auto& [x, x2] : ma[i]) {
            for (const auto& [y, y2] : mb[i]) {
                edges.emplace_back(x * nb + y, x2 * nb + y2);
                edges.emplace_back(x * nb + y2, x2 * nb + y);
            }
        }
    }
    auto lift = std::make_shared<const Graph>(Graph::from_edges(n, edges));
    std::vector<NodeId> first(n), second(n);
    for (NodeId z = 0; z < n; ++z) {
        first[z] = z / nb;
        second[z] = z % nb;
    }
    CoveringMap to_a{lift, a.source, std::move(first)};
    CoveringMap to_b{lift, b.source, std::move(second)};
    return CommonLift{lift, compose(to_a, a), compose(to_b, b)};
}

Supergraph regular_supergraph(const Graph& g) {
    if (g.node_count() == 0 || g.max_degree() == 0) throw EmptyGraph();
    const auto delta = g.max_degree();
    GraphBuilder b(g);
    auto deficient = [&b, delta]() {
        std::vector<NodeId> out;
        for (NodeId v = 0; v < b.node_count(); ++v) {
            if (b.degree(v) < delta) out.push_back(v);
        }
        return out;
    };

    const auto initial = deficient();
    for (std::size_t i = 0; i < initial.size(); ++i) {
        for (std::size_t j = i + 1; j < initial.size(); ++j) {
            const NodeId v = initial[i], w = initial[j];
            if (b.degree(v) < delta && b.degree(w) < delta && !b.has_edge(v, w)) b.add_edge(v, w);
        }
    }

    const auto clique = deficient();
    if (!clique.empty()) {
        // K_{Delta,Delta} on l_1..l_Delta, r_1..r_Delta; M_i = {l_x r_y : (x - y) mod Delta = i}.
        const NodeId l0 = b.add_nodes(delta);
        const NodeId r0 = b.add_nodes(delta);
        auto l = [l0](std::size_t x) { return static_cast<NodeId>(l0 + x - 1); };
        auto r = [r0](std::size_t y) { return static_cast<NodeId>(r0 + y - 1); };
        for (std::size_t x = 1; x <= delta; ++x) {
            for (std::size_t y = 1; y <= delta; ++y) b.add_edge(l(x), r(y));
        }
        auto partner_in = [delta](std::size_t matching, std::size_t x) {
            return (x + delta - matching % delta - 1) % delta + 1;
        };

        for (std::size_t j = 0; j < clique.size(); ++j) {
            const NodeId v = clique[j];
            const auto missing = delta - b.degree(v);
            for (std::size_t x = 1; x <= missing / 2; ++x) {
                const auto y = partner_in(j, x);
                b.remove_edge(l(x), r(y));
                b.add_edge(v, l(x));
                b.add_edge(v, r(y));
            }
        }

        std::vector<std::size_t> open;  // positions in `clique` still one short
        for (std::size_t j = 0; j < clique.size(); ++j) {
            if (b.degree(clique[j]) < delta) open.push_back(j);
        }
        std::size_t p = 0;
        for (; p + 1 < open.size(); p += 2) {
            const NodeId v = clique[open[p]];
            const NodeId w = clique[open[p + 1]];
            const auto y = partner_in(open[p], delta);
            b.remove_edge(l(delta), r(y));
            b.add_edge(w, l(delta));
            b.add_edge(v, r(y));
        }
        if (p < open.size()) {
            // K_{Delta,Delta-1}; v takes a_1, the remaining Delta-1 short nodes are matched up.
            const NodeId v = clique[open[p]];
            const NodeId a0 = b.add_nodes(delta);
            const NodeId b0 = b.add_nodes(delta - 1);
            for (std::size_t x = 0; x < delta; ++x) {
                for (std::size_t y = 0; y + 1 < delta; ++y) b.add_edge(a0 + x, b0 + y);
            }
            b.add_edge(v, a0);
            for (std::size_t x = 1; x + 1 < delta; x += 2) b.add_edge(a0 + x, a0 + x + 1);
        }
    }

    Supergraph out{b.build(), std::vector<NodeId>(g.node_count())};
    for (NodeId v = 0; v < g.node_count(); ++v) out.embedding[v] = v;
    if (!out.graph.is_regular()) throw Error("regular_supergraph produced a non-regular graph");
    return out;
}

std::optional<std::size_t> min_high_girth_half_order(std::size_t delta, std::size_t girth) {
    if (delta < 1 || girth < 2) return std::size_t{2};
    std::size_t sum = 0;
    std::size_t term = 1;
    for (std::size_t i = 0; i + 2 <= girth; ++i) {
        if (__builtin_add_overflow(sum, term, &sum)) return std::nullopt;
        if (i + 2 < girth && __builtin_mul_overflow(term, delta - 1, &term)) return std::nullopt;
    }
    if (__builtin_mul_overflow(sum, std::size_t{2}, &sum)) return std::nullopt;
    return sum;
}

namespace {

std::vector<std::size_t> builder_distances(const GraphBuilder& b, NodeId source, std::size_t limit) {
    std::vector<std::size_t> dist(b.node_count(), kUnreachable);
    std::deque<NodeId> queue{source};
    dist[source] = 0;
    while (!queue.empty()) {
        const NodeId u = queue.front();
        queue.pop_front();
        if (dist[u] == limit) continue;
        for (NodeId w : b.neighbors(u)) {
            if (dist[w] == kUnreachable) {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    return dist;
}

// Smallest edge {x, y} with neither endpoint within `radius` of v or w.
std::optional<Edge> edge_outside_balls(const GraphBuilder& b, NodeId v, NodeId w, std::size_t radius) {
    const auto dv = builder_distances(b, v, radius);
    const auto dw = builder_distances(b, w, radius);
    auto outside = [&](NodeId x) { return dv[x] == kUnreachable && dw[x] == kUnreachable; };
    for (NodeId x = 0; x < b.node_count(); ++x) {
        if (!outside(x)) continue;
        std::optional<NodeId> best;
        for (NodeId y : b.neighbors(x)) {
            if (y > x && outside(y) && (!best || y < *best)) best = y;
        }
        if (best) return Edge{x, *best};
    }
    return std::nullopt;
}

}  // namespace

Graph high_girth_regular(std::size_t delta, std::size_t girth, std::size_t m) {
    if (delta < 2) throw InvalidParameter("high_girth_regular needs delta >= 2");
    if (girth < 3) throw InvalidParameter("high_girth_regular needs girth >= 3");
    const auto bound = min_high_girth_half_order(delta, girth);
    if (!bound || m < *bound) {
        throw BoundViolated("m = " + std::to_string(m) + " is below 2 * sum_{i<=g-2} (delta-1)^i" +
                            (bound ? " = " + std::to_string(*bound) : std::string(" (overflow)")));
    }

    GraphBuilder b(cycle_graph(2 * m));
    const std::size_t cap = 4 * m * delta + 64;
    std::size_t steps = 0;
    for (std::size_t target = 3; target <= delta; ++target) {
        while (true) {
            std::vector<NodeId> deficient;
            for (NodeId v = 0; v < b.node_count(); ++v) {
                if (b.degree(v) < target) deficient.push_back(v);
            }
            if (deficient.empty()) break;
            if (++steps > cap) throw IterationLimit("high_girth_regular exceeded " + std::to_string(cap) + " steps");

            std::optional<Edge> best;
            std::size_t best_distance = 0;
            for (std::size_t i = 0; i < deficient.size(); ++i) {
                const auto dist = builder_distances(b, deficient[i], kUnreachable);
                for (std::size_t j = i + 1; j < deficient.size(); ++j) {
                    const auto d = dist[deficient[j]];
                    if (d >= girth - 1 && (!best || d > best_distance)) {
                        best = Edge{deficient[i], deficient[j]};
                        best_distance = d;
                    }
                }
            }
            if (best) {
                b.add_edge(best->first, best->second);
                continue;
            }

            bool swapped = false;
            for (std::size_t i = 0; i < deficient.size() && !swapped; ++i) {
                for (std::size_t j = i + 1; j < deficient.size() && !swapped; ++j) {
                    const NodeId v = deficient[i], w = deficient[j];
                    if (auto e = edge_outside_balls(b, v, w, girth - 2)) {
                        b.remove_edge(e->first, e->second);
                        b.add_edge(e->first, v);
                        b.add_edge(e->second, w);
                        swapped = true;
                    }
                }
            }
            if (!swapped) {
                throw IterationLimit("no admissible exchange at degree " + std::to_string(target));
            }
        }
    }
    return b.build();
}

BigInt lift_size_estimate(const BigInt& n, const BigInt& delta, std::size_t min_girth) {
    const auto g = std::max<std::size_t>(min_girth, 3);
    BigInt sum = 0;
    BigInt term = 1;
    for (std::size_t i = 0; i + 2 <= g; ++i) {
        sum += term;
        term *= (delta - 1);
    }
    return 4 * (n + 4 * delta - 1) * 2 * (2 * sum);
}

GirthLift lift_to_girth(const Graph& g, std::size_t min_girth, const BigInt& size_cap) {
    if (g.node_count() == 0 || g.max_degree() == 0) throw EmptyGraph();
    const auto delta = g.max_degree();
    const auto estimate = lift_size_estimate(g.node_count(), delta, min_girth);
    if (estimate > size_cap) throw SizeCapExceeded(estimate.str(), size_cap.str());

    auto base = std::make_shared<const Graph>(g);
    LiftStats stats;
    stats.delta = delta;
    stats.girth_target = std::max<std::size_t>(min_girth, 3);
    if (delta < 2) {
        // A matching has no cycles at all.
        stats.common_lift_nodes = g.node_count();
        return GirthLift{identity_covering(base), stats};
    }

    const auto super = regular_supergraph(g);
    stats.supergraph_nodes = super.graph.node_count();
    stats.m = *min_high_girth_half_order(delta, stats.girth_target);
    const auto regular = high_girth_regular(delta, stats.girth_target, stats.m);
    stats.regular_nodes = regular.node_count();
    const auto lift = common_lift(super.graph, regular);
    stats.common_lift_nodes = lift.graph->node_count();

    const auto& psi = lift.to_h.map;
    std::vector<NodeId> index(psi.size(), kNoMate);
    std::vector<NodeId> map;
    for (NodeId z = 0; z < psi.size(); ++z) {
        if (psi[z] < g.node_count()) {
            index[z] = static_cast<NodeId>(map.size());
            map.push_back(psi[z]);
        }
    }
    std::vector<Edge> edges;
    for (const auto& [x, y] : lift.graph->edges()) {
        if (index[x] != kNoMate && index[y] != kNoMate && g.has_edge(psi[x], psi[y])) {
            edges.emplace_back(index[x], index[y]);
        }
    }
    auto restricted = std::make_shared<const Graph>(Graph::from_edges(map.size(), edges));
    return GirthLift{CoveringMap{std::move(restricted), std::move(base), std::move(map)}, stats};
}

HighGirthCT build_high_girth_ct(std::size_t k, std::uint64_t beta, const BigInt& size_cap) {
    const auto predicted = predicted_sizes(k, beta);
    const auto estimate = lift_size_estimate(predicted.n, predicted.max_degree, 2 * k + 1);
    if (estimate > size_cap) throw SizeCapExceeded(estimate.str(), size_cap.str());

    auto low = build_low_girth(k, beta);
    auto lifted = lift_to_girth(low.graph, 2 * k + 1, size_cap);
    const auto& map = lifted.to_base.map;
    std::vector<ClusterId> cluster_of(map.size());
    for (std::size_t v = 0; v < map.size(); ++v) cluster_of[v] = low.cluster_of[map[v]];
    CTGraph ct{*lifted.to_base.source, std::move(low.skeleton), std::move(cluster_of)};
    return HighGirthCT{std::move(ct), std::move(lifted.to_base), lifted.stats};
}

LiftedDouble lift_doubled(const DoubledGraph& d, std::size_t min_girth, const BigInt& size_cap) {
    auto lifted = lift_to_girth(d.graph, min_girth, size_cap);
    const Graph& g = *lifted.to_base.source;
    const auto& phi = lifted.to_base.map;
    DoubledGraph out{g, d.skeleton, {}, {}, {}, g.node_count() / 2};
    out.cluster_of.resize(g.node_count());
    out.side.resize(g.node_count());
    out.partner.resize(g.node_count());
    for (NodeId x = 0; x < g.node_count(); ++x) {
        out.cluster_of[x] = d.cluster_of[phi[x]];
        out.side[x] = d.side[phi[x]];
        const NodeId want = d.partner[phi[x]];
        const auto nbrs = g.neighbors(x);
        const auto it = std::find_if(nbrs.begin(), nbrs.end(), [&](NodeId y) { return phi[y] == want; });
        if (it == nbrs.end()) throw Error("lifted doubled graph lost a matching edge");
        out.partner[x] = *it;
    }
    return LiftedDouble{std::move(out), std::move(lifted.to_base), lifted.stats};
}

}  // namespace kmw
