#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kmw/ct_builder.hpp"
#include "kmw/graph.hpp"

namespace kmw {

enum class ProblemKind { VC, DS, MaxM, MM, MIS };

std::string to_string(ProblemKind kind);
ProblemKind parse_problem_kind(const std::string& name);  // vc|ds|maxm|mm|mis, throws InvalidParameter
bool is_matching_kind(ProblemKind kind);

/// Distinct ids drawn uniformly from [1, n^3]; optional 64-bit random tape per node.
struct Labeling {
    std::vector<std::uint64_t> ids;
    std::vector<std::uint64_t> tapes;
    std::uint64_t seed = 0;
};

Labeling random_labeling(std::size_t n, std::uint64_t seed, bool with_tapes = false);

/// What a node sees after k rounds: its k-hop subgraph (local index 0 is the
/// node itself) labeled with ids and tapes. Nothing else is passed.
struct LabeledView {
    const RootedSubgraph& view;
    std::vector<std::uint64_t> ids;    // local index -> id
    std::vector<std::uint64_t> tapes;  // local index -> tape, empty without tapes
    std::size_t k;

    std::uint64_t root_id() const { return ids.front(); }
};

/// Output token per node. Node problems: nonzero = selected. Matching problems:
/// the id of the neighbor the node is matched to, 0 for unmatched.
using LocalAlgorithm = std::function<std::uint64_t(const LabeledView&)>;

/// Caches G^k(v) for every node so repeated trials only relabel.
class LocalRunner {
public:
    LocalRunner(const Graph& g, std::size_t k);

    const Graph& graph() const { return graph_; }
    std::size_t k() const { return k_; }
    const RootedSubgraph& view(NodeId v) const { return views_[v]; }

    std::vector<std::uint64_t> run(const LocalAlgorithm& algorithm, const Labeling& labeling) const;

private:
    const Graph& graph_;
    std::size_t k_;
    std::vector<RootedSubgraph> views_;
};

std::vector<std::uint64_t> run_local(const Graph& g, std::size_t k, const LocalAlgorithm& algorithm,
                                     const Labeling& labeling);

struct NamedAlgorithm {
    std::string name;
    LocalAlgorithm run;
    bool needs_tapes = false;
};

/// always-select, local-max, not-local-min, greedy-vc-view, random-mm.
/// random-mm simulates floor(k/2) phases of random-priority edge selection.
NamedAlgorithm bundled_algorithm(const std::string& name, std::size_t k);
std::vector<std::string> bundled_algorithm_names();

/// Random-priority matching run for `phases` phases; needs a view of radius >= 2 * phases.
LocalAlgorithm random_priority_matching(std::size_t phases);

struct Solution {
    std::vector<NodeId> nodes;
    std::vector<Edge> edges;  // (u, v) with u < v
};

/// Turns per-node tokens into a solution. For matching kinds an edge is taken when
/// both endpoints claim each other; `consistent` is false on any dangling claim.
struct DecodedOutput {
    Solution solution;
    bool consistent = true;
};

DecodedOutput decode_output(const Graph& g, ProblemKind kind, const std::vector<std::uint64_t>& outputs,
                            const Labeling& labeling);

bool validate_solution(const Graph& g, ProblemKind kind, const Solution& solution);
std::size_t solution_size(ProblemKind kind, const Solution& solution);

struct CoverResult {
    std::size_t size = 0;
    std::vector<NodeId> witness;
};

/// Minimum vertex cover via maximum matching and Koenig. Throws NotBipartite.
CoverResult exact_mvc_bipartite(const Graph& g);

/// Exact optimum: branch and bound for VC/DS (n <= 40, else TooLarge); maximum
/// matching for MaxM at any size.
std::size_t exact_small(const Graph& g, ProblemKind kind);

inline constexpr std::size_t kExactSmallLimit = 40;

struct SimulationOptions {
    unsigned jobs = 1;
    bool with_tapes = false;
    bool compute_ratio = true;
};

struct SimulationReport {
    std::string algorithm;
    ProblemKind kind = ProblemKind::VC;
    std::size_t k = 0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::vector<std::size_t> sizes;
    std::vector<bool> valid;
    double mean = 0;
    double stddev = 0;  // sample standard deviation, 0 for a single trial
    bool all_valid = false;
    std::optional<std::size_t> optimum;
    std::optional<double> ratio;  // mean/opt for minimization, opt/mean for maximization

    double standard_error() const;
};

/// Independent labelings per trial (seeded from (seed, trial)); validates each output.
SimulationReport measure_expectation(const Graph& g, std::size_t k, const NamedAlgorithm& algorithm,
                                     ProblemKind kind, std::size_t trials, std::uint64_t seed,
                                     const SimulationOptions& options = {});

nlohmann::json report_to_json(const SimulationReport& report);

/// Vertex cover from repeated truncated runs of a matching algorithm.
struct MmToMvcResult {
    std::vector<NodeId> cover;
    std::size_t runs = 0;
};

MmToMvcResult mm_to_mvc(const Graph& g, const LocalAlgorithm& mm_algorithm, std::size_t radius, double c = 36,
                        std::uint64_t seed = 0);

// Reductions through the line graph; line-node i is line.endpoints[i].
std::vector<NodeId> vc_to_line_ds(const Graph& g, const LineGraph& line, const std::vector<NodeId>& cover);
std::vector<NodeId> line_ds_to_vc(const LineGraph& line, const std::vector<NodeId>& dominating_set);
std::vector<NodeId> matching_to_line_nodes(const LineGraph& line, const std::vector<Edge>& matching);
std::vector<Edge> line_nodes_to_matching(const LineGraph& line, const std::vector<NodeId>& nodes);

struct EdgePairResult {
    std::string family;  // "C0C1-vs-C0C0bar" or "C0barC1bar-vs-C1C1bar"
    Edge first;          // (v, w) in mapping order
    Edge second;         // (v', w')
    bool pass = false;
};

struct EdgeIndistinguishabilityReport {
    std::size_t k = 0;
    std::vector<EdgePairResult> pairs;
    bool all_pass() const;
};

/// Compares union views of edges between C_0 and C_1 with matching edges
/// between C_0 and its copy, and the barred counterpart. Throws GirthTooLow.
EdgeIndistinguishabilityReport edge_indistinguishability_check(const DoubledGraph& d, std::size_t k,
                                                              std::size_t samples = 32, std::uint64_t seed = 0);

nlohmann::json edge_report_to_json(const EdgeIndistinguishabilityReport& report);

}  // namespace kmw
