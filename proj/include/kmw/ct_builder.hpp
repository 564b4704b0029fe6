#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "kmw/cluster_tree.hpp"
#include "kmw/graph_io.hpp"

namespace kmw {

/// G'_k: minimum cluster sizes, every skeleton edge (x, x+1) realized by
/// disjoint copies of K_{beta^x, beta^(x+1)} over contiguous index ranges.
/// Nodes of a cluster are contiguous and clusters appear in id order.
CTGraph build_low_girth(std::size_t k, std::uint64_t beta);

/// Cluster sizes build_low_girth uses (beta^(2k-l+1) on level l), in cluster id
/// order, without materializing any edges.
std::vector<std::uint64_t> low_girth_cluster_sizes(const ClusterTreeSkeleton& skeleton);

/// Two copies of a CT graph joined by the perfect matching i <-> i + n.
struct DoubledGraph {
    Graph graph;
    ClusterTreeSkeleton skeleton;
    std::vector<ClusterId> cluster_of;  // cluster of the original node (same id on both copies)
    std::vector<std::uint8_t> side;     // 0 = original, 1 = copy (the barred clusters)
    std::vector<NodeId> partner;        // node matched across the copies
    std::size_t n_original = 0;

    /// Flattened cluster ids: c on the original side, c + cluster_count on the copy.
    std::vector<std::uint32_t> flat_clusters() const;
};

DoubledGraph build_matching_double(const CTGraph& ct);

GraphDocument to_document(const CTGraph& ct, const std::string& stage);
GraphDocument to_document(const DoubledGraph& d);

/// Inverse of to_document; needs meta.k and meta.beta and a "clusters" array.
CTGraph ct_graph_from_document(const GraphDocument& doc);
DoubledGraph doubled_from_document(const GraphDocument& doc);

}  // namespace kmw
