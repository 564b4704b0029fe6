#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "kmw/cluster_tree.hpp"
#include "kmw/graph.hpp"

namespace kmw {

enum class InvariantCase { Unclassified, Case1, Case2, Neither, Both };

std::string to_string(InvariantCase c);

/// One Walk invocation: the pair (v, w = phi(v)) at distance `depth` from the roots.
struct AuditRecord {
    NodeId v = 0;
    NodeId w = 0;
    std::size_t depth = 0;
    std::optional<unsigned> history_v;  // exponent of C(v)'s label toward C(prev)
    std::optional<unsigned> history_w;
    Position position_v = Position::Internal;
    Position position_w = Position::Internal;
    std::size_t round_v = 0;  // creation round of C(v)
    std::size_t round_w = 0;
    std::vector<std::size_t> len_v;  // bucket lengths, empty when Walk returned at depth 0
    std::vector<std::size_t> len_w;
    bool special_case = false;
    InvariantCase invariant = InvariantCase::Unclassified;
};

enum class BucketCheck { Holds, Fails, NotApplicable };

/// Bucket-length accounting for a record: equal position and history give equal
/// lengths; two internal nodes with histories x != y differ by one at x and y.
BucketCheck check_bucket_lengths(const AuditRecord& r);

struct PartialIsomorphism {
    std::unordered_map<NodeId, NodeId> forward;
    std::unordered_map<NodeId, NodeId> backward;
    std::vector<AuditRecord> audit;
    std::size_t special_case_count = 0;
};

/// Case-1 / case-2 classification of a pair at depth 0 < d < k.
InvariantCase classify_invariant(const ClusterTreeSkeleton& s, std::size_t d, ClusterId cv, ClusterId cw,
                                 unsigned history_v, unsigned history_w);

/// Coupled DFS over G^k(v0) and G^k(v1). Construction checks the girth once;
/// find() may then be called for many pairs.
class IsomorphismFinder {
public:
    /// Throws GirthTooLow if girth(graph) < 2k+1.
    IsomorphismFinder(const Graph& graph, const ClusterTreeSkeleton& skeleton,
                      const std::vector<ClusterId>& cluster_of, std::size_t k);

    /// Throws InvalidParameter unless v0 is in C_0 and v1 in C_1; PairingFailure on
    /// a bucket mismatch the repair step cannot absorb.
    PartialIsomorphism find(NodeId v0, NodeId v1) const;

private:
    const Graph& graph_;
    const ClusterTreeSkeleton& skeleton_;
    const std::vector<ClusterId>& cluster_of_;
    std::size_t k_;
};

PartialIsomorphism find_isomorphism(const CTGraph& ct, std::size_t k, NodeId v0, NodeId v1);

/// Exact check that phi is an isomorphism G^k(v0) -> G^k(v1) with phi(v0) = v1.
bool verify_isomorphism(const Graph& g, std::size_t k, NodeId v0, NodeId v1, const PartialIsomorphism& phi);
bool verify_isomorphism(const CTGraph& ct, std::size_t k, NodeId v0, NodeId v1, const PartialIsomorphism& phi);

/// AHU encoding of a rooted tree. Throws NotATree.
std::string canonical_form(const RootedSubgraph& t);

/// Encoding of adjacency restricted to a tree reachable from `root`, or nullopt on a cycle.
std::optional<std::string> rooted_tree_form(const std::vector<std::vector<NodeId>>& adjacency, NodeId root);

/// Union view G^k(a) u G^k(b) with the edge {a, b} removed, encoded as the
/// ordered pair of rooted trees at a and b; nullopt if that is not two disjoint trees.
std::optional<std::string> edge_view_form(const Graph& g, NodeId a, NodeId b, std::size_t k);

}  // namespace kmw
