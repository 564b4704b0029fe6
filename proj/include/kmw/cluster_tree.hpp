#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include "kmw/graph.hpp"

namespace kmw {

using BigInt = boost::multiprecision::cpp_int;
using ClusterId = std::uint32_t;

enum class Position { Internal, Leaf };

std::string to_string(Position p);

struct Cluster {
    ClusterId id = 0;
    std::size_t level = 0;  // hops from C_0
    Position position = Position::Internal;
    std::size_t round = 1;  // growth iteration that created it (CT_1 clusters: 1)
    std::optional<ClusterId> parent;
    unsigned parent_exponent = 0;  // exponent on the parent's side of the edge to the parent
};

/// Skeleton edge {(a, beta^exp_a), (b, beta^exp_b)}; a is the parent (lower level).
struct SkeletonEdge {
    ClusterId a = 0;
    ClusterId b = 0;
    unsigned exp_a = 0;
    unsigned exp_b = 0;

    bool operator==(const SkeletonEdge&) const = default;
};

/// One side of a skeleton edge as seen from a cluster.
struct ClusterLink {
    ClusterId neighbor = 0;
    unsigned own_exponent = 0;    // outgoing label beta^own_exponent
    unsigned other_exponent = 0;  // label on the neighbor's side
};

/// Cluster tree skeleton CT_k. Labels are stored as exponents of beta.
class ClusterTreeSkeleton {
public:
    std::size_t k() const { return k_; }
    std::uint64_t beta() const { return beta_; }
    const std::vector<Cluster>& clusters() const { return clusters_; }
    const std::vector<SkeletonEdge>& edges() const { return edges_; }
    std::size_t cluster_count() const { return clusters_.size(); }
    const Cluster& cluster(ClusterId c) const { return clusters_.at(c); }

    std::span<const ClusterLink> links(ClusterId c) const { return links_.at(c); }
    std::optional<unsigned> outgoing_exponent(ClusterId from, ClusterId to) const;

    /// Number of clusters on each level 0..max level.
    std::vector<std::size_t> level_counts() const;

    bool operator==(const ClusterTreeSkeleton& other) const {
        return k_ == other.k_ && beta_ == other.beta_ && edges_ == other.edges_;
    }

private:
    friend ClusterTreeSkeleton build_skeleton(std::size_t k, std::uint64_t beta);
    void add_cluster(Cluster c);
    void add_edge(SkeletonEdge e);

    std::size_t k_ = 0;
    std::uint64_t beta_ = 0;
    std::vector<Cluster> clusters_;
    std::vector<SkeletonEdge> edges_;
    std::vector<std::vector<ClusterLink>> links_;
};

/// CT_1 followed by k-1 applications of the growth rules. Cluster ids follow
/// creation order; each round's new clusters are sorted by (parent, exponent).
/// Throws InvalidParameter if k < 1 or beta < 2(k+1).
ClusterTreeSkeleton build_skeleton(std::size_t k, std::uint64_t beta);

/// Closed-form number of clusters on level l of CT_k.
std::uint64_t cluster_count(std::size_t k, std::size_t level);

/// Minimum instance sizes for (k, beta), computed exactly.
struct PredictedSizes {
    BigInt n0;                         // |C_0| = beta^(2k+1)
    std::vector<BigInt> cluster_size;  // per level l: beta^(2k-l+1)
    BigInt n;                          // total nodes
    BigInt max_degree;                 // beta^(k+1)
    bool order_bound_holds = false;    // n < n0 * beta / (beta - (k+1))
    bool excess_bound_holds = false;   // n - n0 < n0 * 2(k+1) / beta
};

PredictedSizes predicted_sizes(std::size_t k, std::uint64_t beta);

/// A concrete graph together with the cluster identity of every node.
struct CTGraph {
    Graph graph;
    ClusterTreeSkeleton skeleton;
    std::vector<ClusterId> cluster_of;

    std::vector<NodeId> nodes_in(ClusterId c) const;
};

struct Violation {
    enum class Kind { ClusterOutOfRange, NotIndependent, NonSkeletonEdge, Biregularity, SizeRatio };
    Kind kind;
    std::optional<NodeId> node;
    std::optional<NodeId> other_node;
    ClusterId cluster = 0;
    ClusterId other_cluster = 0;
    std::string message;
};

std::string to_string(Violation::Kind kind);

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

/// Checks independence of clusters, biregular degrees for every skeleton edge,
/// absence of non-skeleton edges and the |B| = |A|/beta size ratio.
ValidationReport validate_ct_graph(const CTGraph& ct);

nlohmann::json skeleton_to_json(const ClusterTreeSkeleton& s);

/// Rebuilds the skeleton from (k, beta) and checks the stored clusters/edges agree.
ClusterTreeSkeleton skeleton_from_json(const nlohmann::json& j);

/// Flat representation; exponents appear as head/tail labels next to each endpoint.
void write_skeleton_dot(std::ostream& out, const ClusterTreeSkeleton& s);

/// beta^e, or nullopt if it does not fit in 64 bits.
std::optional<std::uint64_t> checked_pow(std::uint64_t base, unsigned exponent);

}  // namespace kmw
