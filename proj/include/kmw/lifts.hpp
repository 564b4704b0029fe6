#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kmw/cluster_tree.hpp"
#include "kmw/ct_builder.hpp"
#include "kmw/graph.hpp"

namespace kmw {

/// Node map from a lift (source) onto its base (target).
struct CoveringMap {
    std::shared_ptr<const Graph> source;
    std::shared_ptr<const Graph> target;
    std::vector<NodeId> map;
};

struct CoveringCheck {
    bool sizes_match = true;  // map has one entry per source node, all in range
    bool surjective = true;
    bool adjacency_preserving = true;
    bool locally_bijective = true;
    bool fibers_equal = true;  // per connected component of the target
    std::optional<NodeId> first_bad_node;

    bool ok() const {
        return sizes_match && surjective && adjacency_preserving && locally_bijective && fibers_equal;
    }
    std::string describe() const;
};

CoveringCheck check_covering_map(const CoveringMap& cm);
bool verify_covering_map(const CoveringMap& cm);

/// phi_outer after phi_inner: source of inner -> target of outer.
CoveringMap compose(const CoveringMap& inner, const CoveringMap& outer);

CoveringMap identity_covering(std::shared_ptr<const Graph> g);

/// Partition of a regular bipartite graph into perfect matchings.
/// Throws NotBipartite, NotRegular.
std::vector<std::vector<Edge>> matching_decomposition(const Graph& g);

/// Tensor product with K_2: node v + b*n is (v, b). Source of the returned map.
CoveringMap canonical_double_cover(const Graph& g);

struct CommonLift {
    std::shared_ptr<const Graph> graph;
    CoveringMap to_h;
    CoveringMap to_h_prime;
};

/// Product of matching decompositions; node (a, b) is a * |B| + b where A, B
/// are the bipartite versions of h and h_prime. Throws DegreeMismatch, NotRegular.
CommonLift common_lift(const Graph& h, const Graph& h_prime);

struct Supergraph {
    Graph graph;
    std::vector<NodeId> embedding;  // input node -> supergraph node (identity prefix)
};

/// Delta-regular supergraph on fewer than n + 4*Delta nodes. Throws EmptyGraph.
Supergraph regular_supergraph(const Graph& g);

/// Smallest m accepted by high_girth_regular, or nullopt if it overflows.
std::optional<std::size_t> min_high_girth_half_order(std::size_t delta, std::size_t girth);

/// delta-regular graph on 2m nodes with girth >= g, grown from C_{2m} one degree at a time.
/// Throws BoundViolated, InvalidParameter, IterationLimit.
Graph high_girth_regular(std::size_t delta, std::size_t girth, std::size_t m);

inline constexpr std::uint64_t kDefaultSizeCap = 2'000'000;

struct LiftStats {
    std::size_t delta = 0;
    std::size_t girth_target = 0;
    std::size_t supergraph_nodes = 0;
    std::size_t regular_nodes = 0;
    std::size_t common_lift_nodes = 0;
    std::size_t m = 0;
};

/// Upper bound 4 * (n + 4*Delta - 1) * 2m on the common lift used by lift_to_girth.
BigInt lift_size_estimate(const BigInt& n, const BigInt& delta, std::size_t min_girth);

/// Preimage of g inside a common lift of its regular supergraph and a
/// high-girth regular graph. The result has girth >= min_girth and covers g.
struct GirthLift {
    CoveringMap to_base;  // source: the lifted graph, target: g
    LiftStats stats;
};

GirthLift lift_to_girth(const Graph& g, std::size_t min_girth, const BigInt& size_cap = kDefaultSizeCap);

struct HighGirthCT {
    CTGraph ct;
    CoveringMap to_low_girth;
    LiftStats stats;
};

/// Full pipeline: G'_k, its regular supergraph, a girth 2k+1 regular graph, the
/// common lift and the restriction to the preimage of G'_k. Throws SizeCapExceeded.
HighGirthCT build_high_girth_ct(std::size_t k, std::uint64_t beta, const BigInt& size_cap = kDefaultSizeCap);

struct LiftedDouble {
    DoubledGraph doubled;
    CoveringMap to_base;
    LiftStats stats;
};

/// Lifts a doubled graph to girth >= min_girth; partners follow the base partner map.
LiftedDouble lift_doubled(const DoubledGraph& d, std::size_t min_girth, const BigInt& size_cap = kDefaultSizeCap);

}  // namespace kmw
