#include "kmw/local_sim.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/max_cardinality_matching.hpp>

#include "kmw/errors.hpp"
#include "kmw/isomorphism.hpp"
#include "kmw/matching.hpp"

namespace kmw {

std::string to_string(ProblemKind kind) {
    switch (kind) {
        case ProblemKind::VC: return "vc";
        case ProblemKind::DS: return "ds";
        case ProblemKind::MaxM: return "maxm";
        case ProblemKind::MM: return "mm";
        case ProblemKind::MIS: return "mis";
    }
    return "unknown";
}

ProblemKind parse_problem_kind(const std::string& name) {
    for (auto kind : {ProblemKind::VC, ProblemKind::DS, ProblemKind::MaxM, ProblemKind::MM, ProblemKind::MIS}) {
        if (to_string(kind) == name) return kind;
    }
    throw InvalidParameter("unknown problem kind '" + name + "'");
}

bool is_matching_kind(ProblemKind kind) { return kind == ProblemKind::MaxM || kind == ProblemKind::MM; }

namespace {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace

Labeling random_labeling(std::size_t n, std::uint64_t seed, bool with_tapes) {
    Labeling labeling;
    labeling.seed = seed;
    std::mt19937_64 rng(seed);
    std::uint64_t range = std::numeric_limits<std::uint64_t>::max();
    const auto n64 = static_cast<std::uint64_t>(std::max<std::size_t>(n, 1));
    std::uint64_t square = 0;
    if (!__builtin_mul_overflow(n64, n64, &square) && !__builtin_mul_overflow(square, n64, &range)) {
        // range = n^3
    } else {
        range = std::numeric_limits<std::uint64_t>::max();
    }
    std::uniform_int_distribution<std::uint64_t> draw(1, range);
    std::unordered_set<std::uint64_t> used;
    used.reserve(2 * n);
    labeling.ids.reserve(n);
    while (labeling.ids.size() < n) {
        const auto id = draw(rng);
        if (used.insert(id).second) labeling.ids.push_back(id);
    }
    if (with_tapes) {
        labeling.tapes.resize(n);
        for (auto& t : labeling.tapes) t = rng();
    }
    return labeling;
}

LocalRunner::LocalRunner(const Graph& g, std::size_t k) : graph_(g), k_(k) {
    views_.reserve(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) views_.push_back(k_hop_subgraph(g, v, k));
}

std::vector<std::uint64_t> LocalRunner::run(const LocalAlgorithm& algorithm, const Labeling& labeling) const {
    if (labeling.ids.size() != graph_.node_count()) throw InvalidParameter("labeling size mismatch");
    const bool tapes = !labeling.tapes.empty();
    std::vector<std::uint64_t> out(graph_.node_count());
    for (NodeId v = 0; v < graph_.node_count(); ++v) {
        const auto& view = views_[v];
        LabeledView lv{view, std::vector<std::uint64_t>(view.nodes.size()), {}, k_};
        for (std::size_t i = 0; i < view.nodes.size(); ++i) lv.ids[i] = labeling.ids[view.nodes[i]];
        if (tapes) {
            lv.tapes.resize(view.nodes.size());
            for (std::size_t i = 0; i < view.nodes.size(); ++i) lv.tapes[i] = labeling.tapes[view.nodes[i]];
        }
        out[v] = algorithm(lv);
    }
    return out;
}

std::vector<std::uint64_t> run_local(const Graph& g, std::size_t k, const LocalAlgorithm& algorithm,
                                     const Labeling& labeling) {
    return LocalRunner(g, k).run(algorithm, labeling);
}

LocalAlgorithm random_priority_matching(std::size_t phases) {
    return [phases](const LabeledView& lv) -> std::uint64_t {
        const auto& g = lv.view.graph;
        const auto& tape = lv.tapes.empty() ? lv.ids : lv.tapes;
        const auto edges = g.edges();
        std::vector<std::vector<std::size_t>> incident(g.node_count());
        for (std::size_t e = 0; e < edges.size(); ++e) {
            incident[edges[e].first].push_back(e);
            incident[edges[e].second].push_back(e);
        }
        std::vector<bool> active(edges.size(), true), matched(g.node_count(), false), chosen(edges.size());
        using Key = std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>;
        std::vector<Key> key(edges.size());
        for (std::size_t phase = 0; phase < phases; ++phase) {
            for (std::size_t e = 0; e < edges.size(); ++e) {
                const auto a = std::min(tape[edges[e].first], tape[edges[e].second]);
                const auto b = std::max(tape[edges[e].first], tape[edges[e].second]);
                const auto ia = std::min(lv.ids[edges[e].first], lv.ids[edges[e].second]);
                const auto ib = std::max(lv.ids[edges[e].first], lv.ids[edges[e].second]);
                key[e] = {mix64(mix64(a ^ (phase * 0x632be59bd9b4e019ULL)) + b), ia, ib};
            }
            std::fill(chosen.begin(), chosen.end(), false);
            for (std::size_t e = 0; e < edges.size(); ++e) {
                if (!active[e]) continue;
                bool minimum = true;
                for (NodeId end : {edges[e].first, edges[e].second}) {
                    for (std::size_t f : incident[end]) {
                        if (f != e && active[f] && key[f] < key[e]) minimum = false;
                    }
                }
                chosen[e] = minimum;
            }
            for (std::size_t e = 0; e < edges.size(); ++e) {
                if (!chosen[e]) continue;
                matched[edges[e].first] = matched[edges[e].second] = true;
                if (edges[e].first == 0) return lv.ids[edges[e].second];
                if (edges[e].second == 0) return lv.ids[edges[e].first];
            }
            bool any = false;
            for (std::size_t e = 0; e < edges.size(); ++e) {
                if (matched[edges[e].first] || matched[edges[e].second]) active[e] = false;
                any = any || active[e];
            }
            if (!any) break;
        }
        return 0;
    };
}

namespace {

std::uint64_t always_select(const LabeledView&) { return 1; }

std::uint64_t local_max(const LabeledView& lv) {
    return std::all_of(lv.ids.begin() + 1, lv.ids.end(), [&](std::uint64_t id) { return id < lv.root_id(); });
}

std::uint64_t not_local_min(const LabeledView& lv) {
    for (NodeId u : lv.view.graph.neighbors(0)) {
        if (lv.ids[u] < lv.root_id()) return 1;
    }
    return 0;
}

// Edges are covered from the endpoint with the larger (degree, id); degrees of
// nodes on the view boundary count as what the view shows.
std::uint64_t greedy_vc_view(const LabeledView& lv) {
    const auto& g = lv.view.graph;
    const std::pair<std::size_t, std::uint64_t> mine{g.degree(0), lv.root_id()};
    for (NodeId u : g.neighbors(0)) {
        if (std::pair<std::size_t, std::uint64_t>{g.degree(u), lv.ids[u]} < mine) return 1;
    }
    return 0;
}

}  // namespace

std::vector<std::string> bundled_algorithm_names() {
    return {"always-select", "local-max", "not-local-min", "greedy-vc-view", "random-mm"};
}

NamedAlgorithm bundled_algorithm(const std::string& name, std::size_t k) {
    if (name == "always-select") return {name, always_select, false};
    if (name == "local-max") return {name, local_max, false};
    if (name == "not-local-min") return {name, not_local_min, false};
    if (name == "greedy-vc-view") return {name, greedy_vc_view, false};
    if (name == "random-mm") return {name, random_priority_matching(k / 2), true};
    throw InvalidParameter("unknown algorithm '" + name + "'");
}

DecodedOutput decode_output(const Graph& g, ProblemKind kind, const std::vector<std::uint64_t>& outputs,
                            const Labeling& labeling) {
    DecodedOutput out;
    if (!is_matching_kind(kind)) {
        for (NodeId v = 0; v < outputs.size(); ++v) {
            if (outputs[v] != 0) out.solution.nodes.push_back(v);
        }
        return out;
    }
    std::unordered_map<std::uint64_t, NodeId> node_of;
    node_of.reserve(labeling.ids.size());
    for (NodeId v = 0; v < labeling.ids.size(); ++v) node_of.emplace(labeling.ids[v], v);
    for (NodeId v = 0; v < outputs.size(); ++v) {
        if (outputs[v] == 0) continue;
        auto it = node_of.find(outputs[v]);
        if (it == node_of.end() || !g.has_edge(v, it->second) || outputs[it->second] != labeling.ids[v]) {
            out.consistent = false;
            continue;
        }
        if (v < it->second) out.solution.edges.emplace_back(v, it->second);
    }
    return out;
}

bool validate_solution(const Graph& g, ProblemKind kind, const Solution& solution) {
    const auto n = g.node_count();
    if (!is_matching_kind(kind)) {
        std::vector<bool> in(n, false);
        for (NodeId v : solution.nodes) {
            if (v >= n) return false;
            in[v] = true;
        }
        switch (kind) {
            case ProblemKind::VC:
                for (const auto& [u, v] : g.edges()) {
                    if (!in[u] && !in[v]) return false;
                }
                return true;
            case ProblemKind::DS:
                for (NodeId v = 0; v < n; ++v) {
                    if (in[v]) continue;
                    const auto nb = g.neighbors(v);
                    if (std::none_of(nb.begin(), nb.end(), [&](NodeId w) { return in[w]; })) return false;
                }
                return true;
            case ProblemKind::MIS:
                for (const auto& [u, v] : g.edges()) {
                    if (in[u] && in[v]) return false;
                }
                for (NodeId v = 0; v < n; ++v) {
                    if (in[v]) continue;
                    const auto nb = g.neighbors(v);
                    if (std::none_of(nb.begin(), nb.end(), [&](NodeId w) { return in[w]; })) return false;
                }
                return true;
            default: return false;
        }
    }
    std::vector<bool> matched(n, false);
    for (const auto& [u, v] : solution.edges) {
        if (u >= n || v >= n || !g.has_edge(u, v) || matched[u] || matched[v]) return false;
        matched[u] = matched[v] = true;
    }
    if (kind == ProblemKind::MM) {
        for (const auto& [u, v] : g.edges()) {
            if (!matched[u] && !matched[v]) return false;
        }
    }
    return true;
}

std::size_t solution_size(ProblemKind kind, const Solution& solution) {
    return is_matching_kind(kind) ? solution.edges.size() : solution.nodes.size();
}

CoverResult exact_mvc_bipartite(const Graph& g) {
    const auto matching = maximum_bipartite_matching(g);
    auto cover = konig_cover(g, matching);
    return CoverResult{cover.size(), std::move(cover)};
}

namespace {

using Mask = std::uint64_t;

class VertexCoverSolver {
public:
    explicit VertexCoverSolver(const Graph& g) : adj_(g.node_count(), 0) {
        for (const auto& [u, v] : g.edges()) {
            adj_[u] |= Mask{1} << v;
            adj_[v] |= Mask{1} << u;
        }
        const Mask all = g.node_count() == 64 ? ~Mask{0} : (Mask{1} << g.node_count()) - 1;
        best_ = static_cast<std::size_t>(std::popcount(all));
        solve(all, 0);
    }
    std::size_t best() const { return best_; }

private:
    void solve(Mask alive, std::size_t taken) {
        if (taken >= best_) return;
        std::size_t edges2 = 0, max_degree = 0;
        int pick = -1;
        int leaf = -1;
        for (Mask rest = alive; rest; rest &= rest - 1) {
            const int v = std::countr_zero(rest);
            const auto d = static_cast<std::size_t>(std::popcount(adj_[v] & alive));
            edges2 += d;
            if (d == 1 && leaf < 0) leaf = v;
            if (d > max_degree) {
                max_degree = d;
                pick = v;
            }
        }
        if (max_degree == 0) {
            best_ = std::min(best_, taken);
            return;
        }
        const auto edges = edges2 / 2;
        if (taken + (edges + max_degree - 1) / max_degree >= best_) return;
        if (leaf >= 0) {
            // Taking the neighbor of a degree-1 node is always safe.
            const int u = std::countr_zero(adj_[leaf] & alive);
            solve(alive & ~(Mask{1} << u), taken + 1);
            return;
        }
        const Mask nb = adj_[pick] & alive;
        solve(alive & ~(Mask{1} << pick), taken + 1);
        solve(alive & ~nb & ~(Mask{1} << pick), taken + static_cast<std::size_t>(std::popcount(nb)));
    }

    std::vector<Mask> adj_;
    std::size_t best_ = 0;
};

class DominatingSetSolver {
public:
    explicit DominatingSetSolver(const Graph& g) : closed_(g.node_count()) {
        const auto n = g.node_count();
        for (NodeId v = 0; v < n; ++v) {
            closed_[v] = Mask{1} << v;
            for (NodeId w : g.neighbors(v)) closed_[v] |= Mask{1} << w;
        }
        all_ = n == 64 ? ~Mask{0} : (Mask{1} << n) - 1;
        best_ = n;
        solve(0, 0);
    }
    std::size_t best() const { return best_; }

private:
    void solve(Mask dominated, std::size_t taken) {
        const Mask open = all_ & ~dominated;
        if (open == 0) {
            best_ = std::min(best_, taken);
            return;
        }
        if (taken + 1 >= best_) return;
        std::size_t max_gain = 0;
        for (std::size_t w = 0; w < closed_.size(); ++w) {
            max_gain = std::max<std::size_t>(max_gain, std::popcount(closed_[w] & open));
        }
        const auto remaining = static_cast<std::size_t>(std::popcount(open));
        if (taken + (remaining + max_gain - 1) / max_gain >= best_) return;

        int target = -1;
        int fewest = std::numeric_limits<int>::max();
        for (Mask rest = open; rest; rest &= rest - 1) {
            const int u = std::countr_zero(rest);
            const int options = std::popcount(closed_[u]);
            if (options < fewest) {
                fewest = options;
                target = u;
            }
        }
        std::vector<std::pair<int, int>> choices;
        for (Mask rest = closed_[target]; rest; rest &= rest - 1) {
            const int w = std::countr_zero(rest);
            choices.emplace_back(-std::popcount(closed_[w] & open), w);
        }
        std::sort(choices.begin(), choices.end());
        for (const auto& [gain, w] : choices) solve(dominated | closed_[w], taken + 1);
    }

    std::vector<Mask> closed_;
    Mask all_ = 0;
    std::size_t best_ = 0;
};

std::size_t maximum_matching_size(const Graph& g) {
    if (is_bipartite(g)) return maximum_bipartite_matching(g).size;
    using BoostGraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
    BoostGraph bg(g.node_count());
    for (const auto& [u, v] : g.edges()) boost::add_edge(u, v, bg);
    std::vector<boost::graph_traits<BoostGraph>::vertex_descriptor> mate(g.node_count());
    boost::edmonds_maximum_cardinality_matching(bg, &mate[0]);
    return boost::matching_size(bg, &mate[0]);
}

}  // namespace

std::size_t exact_small(const Graph& g, ProblemKind kind) {
    switch (kind) {
        case ProblemKind::MaxM: return maximum_matching_size(g);
        case ProblemKind::VC:
        case ProblemKind::DS:
            if (g.node_count() > kExactSmallLimit) {
                throw TooLarge("exact " + to_string(kind) + " supports at most " +
                               std::to_string(kExactSmallLimit) + " nodes, got " +
                               std::to_string(g.node_count()));
            }
            return kind == ProblemKind::VC ? VertexCoverSolver(g).best() : DominatingSetSolver(g).best();
        default: throw InvalidParameter("no exact solver for " + to_string(kind));
    }
}

double SimulationReport::standard_error() const {
    return trials == 0 ? 0.0 : stddev / std::sqrt(static_cast<double>(trials));
}

namespace {

std::optional<std::size_t> oracle_optimum(const Graph& g, ProblemKind kind) {
    switch (kind) {
        case ProblemKind::VC:
            if (is_bipartite(g)) return exact_mvc_bipartite(g).size;
            if (g.node_count() <= kExactSmallLimit) return exact_small(g, kind);
            return std::nullopt;
        case ProblemKind::DS:
            if (g.node_count() <= kExactSmallLimit) return exact_small(g, kind);
            return std::nullopt;
        case ProblemKind::MaxM:
        case ProblemKind::MM: return exact_small(g, ProblemKind::MaxM);
        default: return std::nullopt;
    }
}

}  // namespace

SimulationReport measure_expectation(const Graph& g, std::size_t k, const NamedAlgorithm& algorithm,
                                     ProblemKind kind, std::size_t trials, std::uint64_t seed,
                                     const SimulationOptions& options) {
    if (trials == 0) throw InvalidParameter("trials must be at least 1");
    const LocalRunner runner(g, k);
    const bool tapes = options.with_tapes || algorithm.needs_tapes;

    SimulationReport report;
    report.algorithm = algorithm.name;
    report.kind = kind;
    report.k = k;
    report.trials = trials;
    report.seed = seed;
    report.sizes.assign(trials, 0);
    std::vector<char> valid(trials, 0);

    auto run_trial = [&](std::size_t t) {
        auto rng = trial_rng(seed, t);
        const auto labeling = random_labeling(g.node_count(), rng(), tapes);
        const auto outputs = runner.run(algorithm.run, labeling);
        const auto decoded = decode_output(g, kind, outputs, labeling);
        report.sizes[t] = solution_size(kind, decoded.solution);
        valid[t] = decoded.consistent && validate_solution(g, kind, decoded.solution);
    };
    const auto jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(trials)));
    if (jobs == 1) {
        for (std::size_t t = 0; t < trials; ++t) run_trial(t);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        for (unsigned j = 0; j < jobs; ++j) {
            workers.emplace_back([&] {
                for (std::size_t t = next++; t < trials; t = next++) run_trial(t);
            });
        }
        for (auto& w : workers) w.join();
    }

    report.valid.assign(valid.begin(), valid.end());
    report.all_valid = std::all_of(valid.begin(), valid.end(), [](char c) { return c != 0; });
    double sum = 0;
    for (auto s : report.sizes) sum += static_cast<double>(s);
    report.mean = sum / static_cast<double>(trials);
    if (trials > 1) {
        double sq = 0;
        for (auto s : report.sizes) sq += (static_cast<double>(s) - report.mean) * (static_cast<double>(s) - report.mean);
        report.stddev = std::sqrt(sq / static_cast<double>(trials - 1));
    }
    if (report.all_valid && options.compute_ratio) {
        report.optimum = oracle_optimum(g, kind);
        if (report.optimum) {
            const auto opt = static_cast<double>(*report.optimum);
            if (is_matching_kind(kind)) {
                if (report.mean > 0) report.ratio = opt / report.mean;
            } else if (opt > 0) {
                report.ratio = report.mean / opt;
            } else if (report.mean == 0) {
                report.ratio = 1.0;
            }
        }
    }
    return report;
}

nlohmann::json report_to_json(const SimulationReport& r) {
    nlohmann::json j{{"algorithm", r.algorithm},
                     {"kind", to_string(r.kind)},
                     {"k", r.k},
                     {"trials", r.trials},
                     {"seed", r.seed},
                     {"sizes", r.sizes},
                     {"valid", r.valid},
                     {"all_valid", r.all_valid},
                     {"mean", r.mean},
                     {"stddev", r.stddev},
                     {"standard_error", r.standard_error()}};
    j["optimum"] = r.optimum ? nlohmann::json(*r.optimum) : nlohmann::json(nullptr);
    j["ratio"] = r.ratio ? nlohmann::json(*r.ratio) : nlohmann::json(nullptr);
    return j;
}

MmToMvcResult mm_to_mvc(const Graph& g, const LocalAlgorithm& mm_algorithm, std::size_t radius, double c,
                        std::uint64_t seed) {
    MmToMvcResult result;
    const auto n = g.node_count();
    if (n == 0 || g.edge_count() == 0) return result;
    const double log_delta = std::log(static_cast<double>(g.max_degree()));
    result.runs = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(c * log_delta)));
    const double denominator = log_delta > 0 ? c * log_delta : static_cast<double>(result.runs);

    const LocalRunner runner(g, radius);
    std::vector<std::size_t> count(n, 0);
    std::vector<std::size_t> selected_at(n);
    for (std::size_t i = 0; i < result.runs; ++i) {
        auto rng = trial_rng(seed, i);
        const auto labeling = random_labeling(n, rng(), true);
        const auto outputs = runner.run(mm_algorithm, labeling);
        std::unordered_map<std::uint64_t, NodeId> node_of;
        for (NodeId v = 0; v < n; ++v) node_of.emplace(labeling.ids[v], v);

        std::vector<Edge> selected;
        for (NodeId v = 0; v < n; ++v) {
            if (outputs[v] == 0) continue;
            auto it = node_of.find(outputs[v]);
            if (it == node_of.end() || !g.has_edge(v, it->second)) continue;
            selected.emplace_back(std::min(v, it->second), std::max(v, it->second));
        }
        std::sort(selected.begin(), selected.end());
        selected.erase(std::unique(selected.begin(), selected.end()), selected.end());
        std::fill(selected_at.begin(), selected_at.end(), 0);
        for (const auto& [u, v] : selected) {
            ++selected_at[u];
            ++selected_at[v];
        }
        for (const auto& [u, v] : selected) {
            if (selected_at[u] == 1 && selected_at[v] == 1) {
                ++count[u];
                ++count[v];
            }
        }
    }
    std::vector<bool> in(n, false);
    for (NodeId v = 0; v < n; ++v) in[v] = 6.0 * static_cast<double>(count[v]) / denominator >= 1.0;
    for (const auto& [u, v] : g.edges()) {
        if (!in[u] && !in[v]) in[u] = in[v] = true;
    }
    for (NodeId v = 0; v < n; ++v) {
        if (in[v]) result.cover.push_back(v);
    }
    return result;
}

std::vector<NodeId> vc_to_line_ds(const Graph& g, const LineGraph& line, const std::vector<NodeId>& cover) {
    std::vector<NodeId> ds;
    for (NodeId v : cover) {
        const auto nb = g.neighbors(v);
        if (nb.empty()) continue;
        const Edge e{std::min(v, nb.front()), std::max(v, nb.front())};
        const auto it = std::lower_bound(line.endpoints.begin(), line.endpoints.end(), e);
        ds.push_back(static_cast<NodeId>(it - line.endpoints.begin()));
    }
    std::sort(ds.begin(), ds.end());
    ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
    return ds;
}

std::vector<NodeId> line_ds_to_vc(const LineGraph& line, const std::vector<NodeId>& dominating_set) {
    std::vector<NodeId> cover;
    for (NodeId e : dominating_set) {
        cover.push_back(line.endpoints.at(e).first);
        cover.push_back(line.endpoints.at(e).second);
    }
    std::sort(cover.begin(), cover.end());
    cover.erase(std::unique(cover.begin(), cover.end()), cover.end());
    return cover;
}

std::vector<NodeId> matching_to_line_nodes(const LineGraph& line, const std::vector<Edge>& matching) {
    std::vector<NodeId> nodes;
    for (auto [u, v] : matching) {
        const Edge e{std::min(u, v), std::max(u, v)};
        const auto it = std::lower_bound(line.endpoints.begin(), line.endpoints.end(), e);
        if (it == line.endpoints.end() || *it != e) throw InvalidParameter("matching edge not in graph");
        nodes.push_back(static_cast<NodeId>(it - line.endpoints.begin()));
    }
    std::sort(nodes.begin(), nodes.end());
    return nodes;
}

std::vector<Edge> line_nodes_to_matching(const LineGraph& line, const std::vector<NodeId>& nodes) {
    std::vector<Edge> edges;
    for (NodeId x : nodes) edges.push_back(line.endpoints.at(x));
    std::sort(edges.begin(), edges.end());
    return edges;
}

bool EdgeIndistinguishabilityReport::all_pass() const {
    return std::all_of(pairs.begin(), pairs.end(), [](const EdgePairResult& p) { return p.pass; });
}

EdgeIndistinguishabilityReport edge_indistinguishability_check(const DoubledGraph& d, std::size_t k,
                                                              std::size_t samples, std::uint64_t seed) {
    const Graph& g = d.graph;
    if (k > 0) {
        const auto gi = girth(g);
        if (!girth_at_least(gi, 2 * k + 1)) {
            throw GirthTooLow("girth " + to_string(gi) + " is below 2k+1 = " + std::to_string(2 * k + 1));
        }
    }
    std::vector<NodeId> c0, c0bar, c1;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (d.cluster_of[v] == 0) (d.side[v] ? c0bar : c0).push_back(v);
        if (d.cluster_of[v] == 1 && d.side[v] == 0) c1.push_back(v);
    }
    if (c0.empty() || c0bar.empty() || c1.empty()) throw InvalidParameter("doubled graph lacks C_0 or C_1 nodes");

    // A neighbor of v in cluster C_1 on the same side.
    auto c1_neighbor = [&](NodeId v) {
        for (NodeId w : g.neighbors(v)) {
            if (d.cluster_of[w] == 1 && d.side[w] == d.side[v]) return w;
        }
        throw InvalidParameter("C_0 node " + std::to_string(v) + " has no C_1 neighbor");
    };
    auto same = [&](NodeId a, NodeId b, NodeId a2, NodeId b2) {
        if (k == 0) return true;
        const auto f1 = edge_view_form(g, a, b, k);
        const auto f2 = edge_view_form(g, a2, b2, k);
        return f1 && f2 && *f1 == *f2;
    };

    EdgeIndistinguishabilityReport report;
    report.k = k;
    std::mt19937_64 rng(seed);
    auto pick = [&rng](const std::vector<NodeId>& from) {
        return from[std::uniform_int_distribution<std::size_t>(0, from.size() - 1)(rng)];
    };
    for (std::size_t s = 0; s < samples; ++s) {
        const NodeId v0 = pick(c0);
        const NodeId v1 = c1_neighbor(v0);
        const NodeId u0 = pick(c0);
        report.pairs.push_back({"C0C1-vs-C0C0bar", {v0, v1}, {u0, d.partner[u0]}, same(v0, v1, u0, d.partner[u0])});

        const NodeId w0 = pick(c0bar);
        const NodeId w1 = c1_neighbor(w0);
        const NodeId u1 = pick(c1);
        report.pairs.push_back(
            {"C0barC1bar-vs-C1C1bar", {w0, w1}, {u1, d.partner[u1]}, same(w0, w1, u1, d.partner[u1])});
    }
    return report;
}

nlohmann::json edge_report_to_json(const EdgeIndistinguishabilityReport& report) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& p : report.pairs) {
        pairs.push_back({{"family", p.family},
                         {"first", {p.first.first, p.first.second}},
                         {"second", {p.second.first, p.second.second}},
                         {"pass", p.pass}});
    }
    return {{"k", report.k}, {"all_pass", report.all_pass()}, {"pairs", std::move(pairs)}};
}

}  // namespace kmw
