#include "kmw/graph_io.hpp"

#include <array>
#include <fstream>
#include <map>
#include <ostream>

#include "kmw/errors.hpp"

namespace kmw {

using nlohmann::json;

json to_json(const GraphDocument& doc) {
    json j;
    j["n"] = doc.graph.node_count();
    json edges = json::array();
    for (const auto& [u, v] : doc.graph.edges()) edges.push_back({u, v});
    j["edges"] = std::move(edges);
    if (doc.clusters) j["clusters"] = *doc.clusters;
    if (!doc.meta.empty()) j["meta"] = doc.meta;
    return j;
}

GraphDocument graph_document_from_json(const json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("edges")) {
        throw InvalidGraph("graph JSON needs fields \"n\" and \"edges\"");
    }
    const auto n = j.at("n").get<std::size_t>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2) throw InvalidGraph("edge entries must be [u, v] pairs");
        auto u = e[0].get<NodeId>();
        auto v = e[1].get<NodeId>();
        edges.emplace_back(std::min(u, v), std::max(u, v));
    }
    GraphDocument doc;
    doc.graph = Graph::from_edges(n, edges);
    if (j.contains("clusters")) {
        auto clusters = j.at("clusters").get<std::vector<std::uint32_t>>();
        if (clusters.size() != n) throw InvalidGraph("\"clusters\" length differs from \"n\"");
        doc.clusters = std::move(clusters);
    }
    if (j.contains("meta")) doc.meta = j.at("meta");
    return doc;
}

void write_json_file(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << j.dump() << '\n';
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(path.string() + ": " + e.what());
    }
}

void save_graph(const std::filesystem::path& path, const GraphDocument& doc) {
    write_json_file(path, to_json(doc));
}

GraphDocument load_graph(const std::filesystem::path& path) {
    return graph_document_from_json(read_json_file(path));
}

void write_dot(std::ostream& out, const Graph& g, std::span<const std::uint32_t> clusters,
               std::span<const std::size_t> cluster_level) {
    static constexpr std::array<const char*, 8> palette{
        "#f4f4f4", "#c6dbef", "#9ecae1", "#6baed6", "#4292c6", "#2171b5", "#08519c", "#08306b"};
    out << "graph G {\n  node [shape=circle, style=filled, fontsize=8];\n";
    if (clusters.empty()) {
        for (std::size_t v = 0; v < g.node_count(); ++v) out << "  " << v << ";\n";
    } else {
        std::map<std::uint32_t, std::vector<std::size_t>> members;
        for (std::size_t v = 0; v < clusters.size(); ++v) members[clusters[v]].push_back(v);
        for (const auto& [cluster, nodes] : members) {
            const std::size_t level = cluster < cluster_level.size() ? cluster_level[cluster] : 0;
            out << "  subgraph cluster_" << cluster << " {\n    rank=same; label=\"C" << cluster
                << "\";\n    node [fillcolor=\"" << palette[level % palette.size()] << "\"];\n";
            for (std::size_t v : nodes) out << "    " << v << ";\n";
            out << "  }\n";
        }
    }
    for (const auto& [u, v] : g.edges()) out << "  " << u << " -- " << v << ";\n";
    out << "}\n";
}

}  // namespace kmw
