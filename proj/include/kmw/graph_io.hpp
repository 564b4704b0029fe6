#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "kmw/graph.hpp"

namespace kmw {

/// On-disk graph: {"n", "edges", optional "clusters", optional "meta"}.
struct GraphDocument {
    Graph graph;
    std::optional<std::vector<std::uint32_t>> clusters;
    nlohmann::json meta = nlohmann::json::object();
};

nlohmann::json to_json(const GraphDocument& doc);
GraphDocument graph_document_from_json(const nlohmann::json& j);

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::filesystem::path& path);

void save_graph(const std::filesystem::path& path, const GraphDocument& doc);
GraphDocument load_graph(const std::filesystem::path& path);

/// Graphviz export. When `clusters` is non-empty, nodes of one cluster share a
/// rank-same subgraph; `cluster_level` (indexed by cluster id) drives the fill color.
void write_dot(std::ostream& out, const Graph& g, std::span<const std::uint32_t> clusters = {},
               std::span<const std::size_t> cluster_level = {});

}  // namespace kmw
