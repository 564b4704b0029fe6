#include "kmw/isomorphism.hpp"

#include <algorithm>
#include <limits>
#include <unordered_set>

#include "kmw/errors.hpp"

namespace kmw {

namespace {
constexpr NodeId kNoParent = std::numeric_limits<NodeId>::max();
}  // namespace

std::string to_string(InvariantCase c) {
    switch (c) {
        case InvariantCase::Unclassified: return "unclassified";
        case InvariantCase::Case1: return "case1";
        case InvariantCase::Case2: return "case2";
        case InvariantCase::Neither: return "neither";
        case InvariantCase::Both: return "both";
    }
    return "unknown";
}

BucketCheck check_bucket_lengths(const AuditRecord& r) {
    if (r.len_v.empty() || !r.history_v || !r.history_w) return BucketCheck::NotApplicable;
    const auto x = *r.history_v;
    const auto y = *r.history_w;
    if (r.position_v == r.position_w && x == y) {
        return r.len_v == r.len_w ? BucketCheck::Holds : BucketCheck::Fails;
    }
    if (r.position_v == Position::Internal && r.position_w == Position::Internal) {
        if (x >= r.len_v.size() || y >= r.len_v.size()) return BucketCheck::Fails;
        for (std::size_t i = 0; i < r.len_v.size(); ++i) {
            bool ok = true;
            if (i == x) {
                ok = r.len_v[i] + 1 == r.len_w[i];
            } else if (i == y) {
                ok = r.len_v[i] == r.len_w[i] + 1;
            } else {
                ok = r.len_v[i] == r.len_w[i];
            }
            if (!ok) return BucketCheck::Fails;
        }
        return BucketCheck::Holds;
    }
    return BucketCheck::NotApplicable;
}

InvariantCase classify_invariant(const ClusterTreeSkeleton& s, std::size_t d, ClusterId cv, ClusterId cw,
                                 unsigned history_v, unsigned history_w) {
    const auto& a = s.cluster(cv);
    const auto& b = s.cluster(cw);
    const bool case1 = a.round <= d && b.round <= d &&
                       (history_v == history_w || (history_v <= d + 1 && history_w <= d + 1));
    const bool case2 = a.round == b.round && a.round > d && a.round <= s.k() && history_v == history_w &&
                       a.parent && b.parent && a.parent_exponent == b.parent_exponent;
    if (case1 && case2) return InvariantCase::Both;
    if (case1) return InvariantCase::Case1;
    if (case2) return InvariantCase::Case2;
    return InvariantCase::Neither;
}

IsomorphismFinder::IsomorphismFinder(const Graph& graph, const ClusterTreeSkeleton& skeleton,
                                     const std::vector<ClusterId>& cluster_of, std::size_t k)
    : graph_(graph), skeleton_(skeleton), cluster_of_(cluster_of), k_(k) {
    if (cluster_of.size() != graph.node_count()) throw InvalidParameter("cluster assignment size mismatch");
    const auto g = girth(graph);
    if (!girth_at_least(g, 2 * k + 1)) {
        throw GirthTooLow("girth " + to_string(g) + " is below 2k+1 = " + std::to_string(2 * k + 1));
    }
}

PartialIsomorphism IsomorphismFinder::find(NodeId v0, NodeId v1) const {
    if (v0 >= graph_.node_count() || v1 >= graph_.node_count()) throw InvalidParameter("node out of range");
    if (cluster_of_[v0] != 0) throw InvalidParameter("v0 = " + std::to_string(v0) + " is not in C_0");
    if (cluster_of_[v1] != 1) throw InvalidParameter("v1 = " + std::to_string(v1) + " is not in C_1");

    const auto buckets = skeleton_.k() + 2;
    PartialIsomorphism phi;
    auto assign = [&phi](NodeId a, NodeId b) {
        if (!phi.forward.emplace(a, b).second || !phi.backward.emplace(b, a).second) {
            throw PairingFailure("node " + std::to_string(a) + " or " + std::to_string(b) + " reached twice");
        }
    };
    auto bucket_of = [this](NodeId from, NodeId to) {
        const auto e = skeleton_.outgoing_exponent(cluster_of_[from], cluster_of_[to]);
        if (!e) {
            throw PairingFailure("edge {" + std::to_string(from) + "," + std::to_string(to) +
                                 "} has no skeleton label");
        }
        return *e;
    };

    struct Frame {
        NodeId v;
        NodeId w;
        std::optional<NodeId> prev;
        std::size_t depth;  // remaining Walk depth
    };
    assign(v0, v1);
    std::vector<Frame> stack{{v0, v1, std::nullopt, k_}};
    std::vector<std::vector<NodeId>> nv(buckets), nw(buckets);

    while (!stack.empty()) {
        const Frame f = stack.back();
        stack.pop_back();

        AuditRecord rec;
        rec.v = f.v;
        rec.w = f.w;
        rec.depth = k_ - f.depth;
        const ClusterId cv = cluster_of_[f.v];
        const ClusterId cw = cluster_of_[f.w];
        rec.position_v = skeleton_.cluster(cv).position;
        rec.position_w = skeleton_.cluster(cw).position;
        rec.round_v = skeleton_.cluster(cv).round;
        rec.round_w = skeleton_.cluster(cw).round;
        std::optional<NodeId> prev_image;
        if (f.prev) {
            prev_image = phi.forward.at(*f.prev);
            rec.history_v = bucket_of(f.v, *f.prev);
            rec.history_w = bucket_of(f.w, *prev_image);
            if (rec.depth > 0 && rec.depth < k_) {
                rec.invariant = classify_invariant(skeleton_, rec.depth, cv, cw, *rec.history_v, *rec.history_w);
            }
        }
        if (f.depth == 0) {
            phi.audit.push_back(std::move(rec));
            continue;
        }

        for (auto& b : nv) b.clear();
        for (auto& b : nw) b.clear();
        for (NodeId x : graph_.neighbors(f.v)) {
            if (x != f.prev) nv.at(bucket_of(f.v, x)).push_back(x);
        }
        for (NodeId y : graph_.neighbors(f.w)) {
            if (y != prev_image) nw.at(bucket_of(f.w, y)).push_back(y);
        }

        // Map: zip each bucket, then the single cross-bucket repair.
        std::optional<std::size_t> iv, iw;
        for (std::size_t i = 0; i < buckets; ++i) {
            const auto common = std::min(nv[i].size(), nw[i].size());
            for (std::size_t j = 0; j < common; ++j) assign(nv[i][j], nw[i][j]);
            rec.len_v.push_back(nv[i].size());
            rec.len_w.push_back(nw[i].size());
            if (nv[i].size() == nw[i].size()) continue;
            if (nv[i].size() == nw[i].size() + 1 && !iv) {
                iv = i;
            } else if (nv[i].size() + 1 == nw[i].size() && !iw) {
                iw = i;
            } else {
                throw PairingFailure("bucket " + std::to_string(i) + " lengths " + std::to_string(nv[i].size()) +
                                     " vs " + std::to_string(nw[i].size()) + " at (" + std::to_string(f.v) +
                                     ", " + std::to_string(f.w) + ")");
            }
        }
        if (iv.has_value() != iw.has_value()) {
            throw PairingFailure("unbalanced buckets at (" + std::to_string(f.v) + ", " + std::to_string(f.w) + ")");
        }
        if (iv) {
            assign(nv[*iv].back(), nw[*iw].back());
            rec.special_case = true;
            ++phi.special_case_count;
        }
        phi.audit.push_back(std::move(rec));

        for (std::size_t i = buckets; i-- > 0;) {
            for (auto it = nv[i].rbegin(); it != nv[i].rend(); ++it) {
                stack.push_back({*it, phi.forward.at(*it), f.v, f.depth - 1});
            }
        }
    }
    return phi;
}

PartialIsomorphism find_isomorphism(const CTGraph& ct, std::size_t k, NodeId v0, NodeId v1) {
    return IsomorphismFinder(ct.graph, ct.skeleton, ct.cluster_of, k).find(v0, v1);
}

bool verify_isomorphism(const Graph& g, std::size_t k, NodeId v0, NodeId v1, const PartialIsomorphism& phi) {
    if (v0 >= g.node_count() || v1 >= g.node_count()) return false;
    const auto a = k_hop_subgraph(g, v0, k);
    const auto b = k_hop_subgraph(g, v1, k);
    if (a.nodes.size() != b.nodes.size() || phi.forward.size() != a.nodes.size()) return false;
    if (a.graph.edge_count() != b.graph.edge_count()) return false;
    auto root = phi.forward.find(v0);
    if (root == phi.forward.end() || root->second != v1) return false;

    std::vector<NodeId> image(a.nodes.size());
    std::vector<bool> hit(b.nodes.size(), false);
    for (NodeId i = 0; i < a.nodes.size(); ++i) {
        auto it = phi.forward.find(a.nodes[i]);
        if (it == phi.forward.end()) return false;
        auto local = b.local_of.find(it->second);
        if (local == b.local_of.end() || hit[local->second]) return false;
        hit[local->second] = true;
        image[i] = local->second;
        if (!phi.backward.empty()) {
            auto back = phi.backward.find(it->second);
            if (back == phi.backward.end() || back->second != a.nodes[i]) return false;
        }
    }
    for (const auto& [x, y] : a.graph.edges()) {
        if (!b.graph.has_edge(image[x], image[y])) return false;
    }
    return true;
}

bool verify_isomorphism(const CTGraph& ct, std::size_t k, NodeId v0, NodeId v1, const PartialIsomorphism& phi) {
    return verify_isomorphism(ct.graph, k, v0, v1, phi);
}

std::optional<std::string> rooted_tree_form(const std::vector<std::vector<NodeId>>& adjacency, NodeId root) {
    const auto n = adjacency.size();
    std::vector<NodeId> parent(n, kNoParent), order{root};
    std::vector<bool> seen(n, false);
    seen[root] = true;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const NodeId u = order[i];
        for (NodeId x : adjacency[u]) {
            if (x == parent[u]) continue;
            if (seen[x]) return std::nullopt;
            seen[x] = true;
            parent[x] = u;
            order.push_back(x);
        }
    }
    std::vector<std::vector<std::string>> parts(n);
    std::vector<std::string> code(n);
    for (std::size_t i = order.size(); i-- > 0;) {
        const NodeId u = order[i];
        auto& children = parts[u];
        std::sort(children.begin(), children.end());
        std::string s = "(";
        for (auto& c : children) s += c;
        s += ")";
        children.clear();
        if (u == root) return s;
        parts[parent[u]].push_back(std::move(s));
    }
    return std::nullopt;
}

std::string canonical_form(const RootedSubgraph& t) {
    if (!t.is_tree()) throw NotATree();
    std::vector<std::vector<NodeId>> adjacency(t.graph.node_count());
    for (NodeId v = 0; v < adjacency.size(); ++v) {
        const auto nb = t.graph.neighbors(v);
        adjacency[v].assign(nb.begin(), nb.end());
    }
    return *rooted_tree_form(adjacency, 0);
}

std::optional<std::string> edge_view_form(const Graph& g, NodeId a, NodeId b, std::size_t k) {
    const auto da = bfs_distances(g, a, k);
    const auto db = bfs_distances(g, b, k);
    std::vector<NodeId> nodes;
    std::unordered_map<NodeId, NodeId> local;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (da[v] != kUnreachable || db[v] != kUnreachable) {
            local.emplace(v, static_cast<NodeId>(nodes.size()));
            nodes.push_back(v);
        }
    }
    auto in_view = [k](const std::vector<std::size_t>& d, NodeId x, NodeId y) {
        return d[x] != kUnreachable && d[y] != kUnreachable && !(d[x] == k && d[y] == k);
    };
    std::vector<std::vector<NodeId>> adjacency(nodes.size());
    for (NodeId i = 0; i < nodes.size(); ++i) {
        const NodeId x = nodes[i];
        for (NodeId y : g.neighbors(x)) {
            if ((x == a && y == b) || (x == b && y == a)) continue;
            auto it = local.find(y);
            if (it == local.end()) continue;
            if (in_view(da, x, y) || in_view(db, x, y)) adjacency[i].push_back(it->second);
        }
    }
    const auto la = local.at(a);
    const auto lb = local.at(b);
    auto fa = rooted_tree_form(adjacency, la);
    auto fb = rooted_tree_form(adjacency, lb);
    if (!fa || !fb) return std::nullopt;
    // The two sides must be disjoint; equal total size then rules out a shared component.
    auto count = [](const std::string& s) { return std::count(s.begin(), s.end(), '('); };
    if (static_cast<std::size_t>(count(*fa) + count(*fb)) != nodes.size()) return std::nullopt;
    return *fa + "|" + *fb;
}

}  // namespace kmw
