#include "kmw/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "kmw/cluster_tree.hpp"
#include "kmw/ct_builder.hpp"
#include "kmw/errors.hpp"
#include "kmw/graph_io.hpp"
#include "kmw/isomorphism.hpp"
#include "kmw/lifts.hpp"
#include "kmw/local_sim.hpp"

namespace kmw {

namespace {

using nlohmann::json;

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct UsageError : Error {
    using Error::Error;
};

void emit_json(std::ostream& out, const std::string& path, const json& j) {
    if (path.empty() || path == "-") {
        out << j.dump(2) << '\n';
    } else {
        write_json_file(path, j);
    }
}

BigInt parse_cap(const std::string& text, const char* source) {
    try {
        BigInt cap(text);
        if (cap <= 0) throw std::runtime_error("not positive");
        return cap;
    } catch (const std::exception&) {
        throw UsageError(std::string(source) + ": invalid size cap '" + text + "'");
    }
}

BigInt size_cap(const std::string& flag) {
    if (!flag.empty()) return parse_cap(flag, "--size-cap");
    if (const char* env = std::getenv("KMW_SIZE_CAP"); env && *env) return parse_cap(env, "KMW_SIZE_CAP");
    return kDefaultSizeCap;
}

json covering_to_json(const CoveringMap& cm) {
    return {{"source_n", cm.source->node_count()}, {"target_n", cm.target->node_count()}, {"map", cm.map}};
}

void write_graph(std::ostream& out, const std::string& path, const GraphDocument& doc) {
    emit_json(out, path, to_json(doc));
}

GraphDocument plain_document(const Graph& g, const std::string& stage) {
    GraphDocument doc;
    doc.graph = g;
    doc.meta = {{"stage", stage}};
    return doc;
}

void print_ct_summary(std::ostream& out, const Graph& g) {
    out << "n=" << g.node_count() << " edges=" << g.edge_count() << " max_degree=" << g.max_degree() << '\n';
}

std::vector<std::size_t> cluster_levels(const ClusterTreeSkeleton& s, bool doubled) {
    std::vector<std::size_t> levels;
    for (const auto& c : s.clusters()) levels.push_back(c.level);
    if (doubled) {
        for (const auto& c : s.clusters()) levels.push_back(c.level);
    }
    return levels;
}

struct Context {
    std::ostream& out;
    std::ostream& err;
};

// ---- skeleton / build / predict --------------------------------------------------------------

void add_skeleton(CLI::App& app, Context& ctx, int& status) {
    auto* cmd = app.add_subcommand("skeleton", "Build the cluster tree skeleton CT_k");
    auto k = std::make_shared<std::size_t>(1);
    auto beta = std::make_shared<std::uint64_t>(4);
    auto path = std::make_shared<std::string>();
    auto dot = std::make_shared<std::string>();
    cmd->add_option("--k", *k, "Number of growth rounds")->required();
    cmd->add_option("--beta", *beta, "Label base, at least 2(k+1)")->required();
    cmd->add_option("--out", *path, "Output JSON (default stdout)");
    cmd->add_option("--dot", *dot, "Also write a Graphviz rendering");
    cmd->callback([=, &ctx, &status] {
        const auto s = build_skeleton(*k, *beta);
        emit_json(ctx.out, *path, skeleton_to_json(s));
        if (!dot->empty()) {
            std::ofstream f(*dot);
            if (!f) throw Error("cannot open " + *dot);
            write_skeleton_dot(f, s);
        }
        if (!path->empty() && *path != "-") ctx.out << "clusters=" << s.cluster_count() << '\n';
        status = kOk;
    });
}

void add_build(CLI::App& app, Context& ctx, int& status) {
    auto* cmd = app.add_subcommand("build", "Instantiate the low-girth CT graph G'_k");
    auto k = std::make_shared<std::size_t>(1);
    auto beta = std::make_shared<std::uint64_t>(4);
    auto path = std::make_shared<std::string>();
    auto doubled = std::make_shared<bool>(false);
    cmd->add_option("--k", *k)->required();
    cmd->add_option("--beta", *beta)->required();
    cmd->add_option("--out", *path, "Output graph JSON (default stdout)");
    cmd->add_flag("--double", *doubled, "Emit two copies joined by a perfect matching");
    cmd->callback([=, &ctx, &status] {
        const auto ct = build_low_girth(*k, *beta);
        const auto report = validate_ct_graph(ct);
        if (*doubled) {
            const auto d = build_matching_double(ct);
            write_graph(ctx.out, *path, to_document(d));
            if (!path->empty()) print_ct_summary(ctx.out, d.graph);
        } else {
            write_graph(ctx.out, *path, to_document(ct, "low-girth"));
            if (!path->empty()) print_ct_summary(ctx.out, ct.graph);
        }
        for (const auto& v : report.violations) ctx.err << to_string(v.kind) << ": " << v.message << '\n';
        status = report.ok() ? kOk : kFailed;
    });
}

void add_predict(CLI::App& app, Context& ctx, int& status) {
    auto* cmd = app.add_subcommand("predict", "Closed-form sizes for (k, beta)");
    auto k = std::make_shared<std::size_t>(1);
    auto beta = std::make_shared<std::uint64_t>(4);
    auto level = std::make_shared<std::size_t>(0);
    auto* level_opt = cmd->add_option("--level", *level, "Only print the cluster count on this level");
    cmd->add_option("--k", *k)->required();
    cmd->add_option("--beta", *beta);
    cmd->callback([=, &ctx, &status] {
        if (level_opt->count() > 0) {
            ctx.out << "clusters_on_level=" << cluster_count(*k, *level) << '\n';
            status = kOk;
            return;
        }
        const auto p = predicted_sizes(*k, *beta);
        ctx.out << "n_0=" << p.n0 << '\n' << "n=" << p.n << '\n' << "Δ=" << p.max_degree << '\n';
        ctx.out << "level_counts=";
        for (std::size_t l = 0; l <= *k + 1; ++l) ctx.out << (l ? "," : "") << cluster_count(*k, l);
        ctx.out << '\n' << "cluster_sizes=";
        for (std::size_t l = 0; l < p.cluster_size.size(); ++l) ctx.out << (l ? "," : "") << p.cluster_size[l];
        ctx.out << '\n'
                << "order_bound=" << (p.order_bound_holds ? "holds" : "fails") << '\n'
                << "excess_bound=" << (p.excess_bound_holds ? "holds" : "fails") << '\n';
        status = p.order_bound_holds && p.excess_bound_holds ? kOk : kFailed;
    });
}

// ---- lift -------------------------------------------------------------------------------------

void add_lift(CLI::App& app, Context& ctx, int& status) {
    auto* lift = app.add_subcommand("lift", "Lifts, covering maps and the high-girth pipeline");
    lift->require_subcommand(1);

    {
        auto* cmd = lift->add_subcommand("pipeline", "High-girth CT graph G_k (or its doubled variant)");
        auto k = std::make_shared<std::size_t>(1);
        auto beta = std::make_shared<std::uint64_t>(4);
        auto path = std::make_shared<std::string>();
        auto map = std::make_shared<std::string>();
        auto cap = std::make_shared<std::string>();
        auto doubled = std::make_shared<bool>(false);
        cmd->add_option("--k", *k)->required();
        cmd->add_option("--beta", *beta)->required();
        cmd->add_option("--out", *path, "Output graph JSON")->required();
        cmd->add_option("--map", *map, "Write the covering map onto G'_k");
        cmd->add_option("--size-cap", *cap, "Maximum estimated lift size (overrides KMW_SIZE_CAP)");
        cmd->add_flag("--double", *doubled, "Lift the matching double instead");
        cmd->callback([=, &ctx, &status] {
            const auto limit = size_cap(*cap);
            if (*doubled) {
                const auto base = build_matching_double(build_low_girth(*k, *beta));
                const auto lifted = lift_doubled(base, 2 * *k + 1, limit);
                auto doc = to_document(lifted.doubled);
                doc.meta["stage"] = "double-high-girth";
                write_graph(ctx.out, *path, doc);
                if (!map->empty()) write_json_file(*map, covering_to_json(lifted.to_base));
                print_ct_summary(ctx.out, lifted.doubled.graph);
                status = verify_covering_map(lifted.to_base) ? kOk : kFailed;
                return;
            }
            const auto result = build_high_girth_ct(*k, *beta, limit);
            write_graph(ctx.out, *path, to_document(result.ct, "high-girth"));
            if (!map->empty()) write_json_file(*map, covering_to_json(result.to_low_girth));
            print_ct_summary(ctx.out, result.ct.graph);
            ctx.out << "supergraph_nodes=" << result.stats.supergraph_nodes
                    << " regular_nodes=" << result.stats.regular_nodes
                    << " common_lift_nodes=" << result.stats.common_lift_nodes << '\n';
            const bool ok = validate_ct_graph(result.ct).ok() && verify_covering_map(result.to_low_girth);
            status = ok ? kOk : kFailed;
        });
    }
    {
        auto* cmd = lift->add_subcommand("double-cover", "Canonical double cover");
        auto in = std::make_shared<std::string>();
        auto path = std::make_shared<std::string>();
        auto map = std::make_shared<std::string>();
        cmd->add_option("--in", *in)->required();
        cmd->add_option("--out", *path);
        cmd->add_option("--map", *map);
        cmd->callback([=, &ctx, &status] {
            const auto cm = canonical_double_cover(load_graph(*in).graph);
            write_graph(ctx.out, *path, plain_document(*cm.source, "double-cover"));
            if (!map->empty()) write_json_file(*map, covering_to_json(cm));
            status = verify_covering_map(cm) ? kOk : kFailed;
        });
    }
    {
        auto* cmd = lift->add_subcommand("common", "Common lift of two regular graphs of equal degree");
        auto a = std::make_shared<std::string>();
        auto b = std::make_shared<std::string>();
        auto path = std::make_shared<std::string>();
        auto map = std::make_shared<std::string>();
        cmd->add_option("--in", *a)->required();
        cmd->add_option("--in2", *b)->required();
        cmd->add_option("--out", *path);
        cmd->add_option("--map", *map, "Write both covering maps");
        cmd->callback([=, &ctx, &status] {
            const auto lift_result = common_lift(load_graph(*a).graph, load_graph(*b).graph);
            write_graph(ctx.out, *path, plain_document(*lift_result.graph, "common-lift"));
            if (!map->empty()) {
                write_json_file(*map, {{"to_first", covering_to_json(lift_result.to_h)},
                                       {"to_second", covering_to_json(lift_result.to_h_prime)}});
            }
            const bool ok = verify_covering_map(lift_result.to_h) && verify_covering_map(lift_result.to_h_prime);
            status = ok ? kOk : kFailed;
        });
    }
    {
        auto* cmd = lift->add_subcommand("supergraph", "Regular supergraph of a graph");
        auto in = std::make_shared<std::string>();
        auto path = std::make_shared<std::string>();
        cmd->add_option("--in", *in)->required();
        cmd->add_option("--out", *path);
        cmd->callback([=, &ctx, &status] {
            const auto s = regular_supergraph(load_graph(*in).graph);
            write_graph(ctx.out, *path, plain_document(s.graph, "supergraph"));
            status = kOk;
        });
    }
    {
        auto* cmd = lift->add_subcommand("high-girth", "Regular graph on 2m nodes with prescribed girth");
        auto delta = std::make_shared<std::size_t>(3);
        auto girth_target = std::make_shared<std::size_t>(3);
        auto m = std::make_shared<std::size_t>(0);
        auto path = std::make_shared<std::string>();
        cmd->add_option("--delta", *delta)->required();
        cmd->add_option("--girth", *girth_target)->required();
        cmd->add_option("--m", *m, "Half the node count (default: smallest admissible)");
        cmd->add_option("--out", *path);
        cmd->callback([=, &ctx, &status] {
            auto half = *m;
            if (half == 0) {
                const auto bound = min_high_girth_half_order(*delta, *girth_target);
                if (!bound) throw InvalidParameter("admissible m overflows");
                half = *bound;
            }
            const auto g = high_girth_regular(*delta, *girth_target, half);
            write_graph(ctx.out, *path, plain_document(g, "high-girth-regular"));
            status = kOk;
        });
    }
    {
        auto* cmd = lift->add_subcommand("decompose", "Perfect matching decomposition of a regular bipartite graph");
        auto in = std::make_shared<std::string>();
        auto path = std::make_shared<std::string>();
        cmd->add_option("--in", *in)->required();
        cmd->add_option("--out", *path);
        cmd->callback([=, &ctx, &status] {
            const auto matchings = matching_decomposition(load_graph(*in).graph);
            json j = json::array();
            for (const auto& m : matchings) {
                json edges = json::array();
                for (const auto& [u, v] : m) edges.push_back({u, v});
                j.push_back(std::move(edges));
            }
            emit_json(ctx.out, *path, {{"matchings", std::move(j)}});
            status = kOk;
        });
    }
    {
        auto* cmd = lift->add_subcommand("verify", "Check a covering map");
        auto source = std::make_shared<std::string>();
        auto target = std::make_shared<std::string>();
        auto map = std::make_shared<std::string>();
        cmd->add_option("--source", *source)->required();
        cmd->add_option("--target", *target)->required();
        cmd->add_option("--map", *map)->required();
        cmd->callback([=, &ctx, &status] {
            CoveringMap cm{std::make_shared<const Graph>(load_graph(*source).graph),
                           std::make_shared<const Graph>(load_graph(*target).graph),
                           read_json_file(*map).at("map").get<std::vector<NodeId>>()};
            const auto check = check_covering_map(cm);
            ctx.out << "covering_map=" << check.describe() << '\n';
            status = check.ok() ? kOk : kFailed;
        });
    }
}

// ---- verification -----------------------------------------------------------------------------

void add_verify_iso(CLI::App& app, Context& ctx, int& status) {
    auto* cmd = app.add_subcommand("verify-iso", "Run the coupled DFS isomorphism on C_0 x C_1 pairs");
    auto path = std::make_shared<std::string>();
    auto k = std::make_shared<std::size_t>(1);
    auto v0 = std::make_shared<NodeId>(0);
    auto v1 = std::make_shared<NodeId>(0);
    auto sample = std::make_shared<std::size_t>(0);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto report_path = std::make_shared<std::string>();
    cmd->add_option("--graph", *path)->required();
    cmd->add_option("--k", *k)->required();
    auto* o0 = cmd->add_option("--v0", *v0);
    auto* o1 = cmd->add_option("--v1", *v1);
    auto* os = cmd->add_option("--all-pairs-sample", *sample, "Number of random (v0, v1) pairs");
    cmd->add_option("--seed", *seed);
    cmd->add_option("--report", *report_path);
    o0->needs(o1);
    o1->needs(o0);
    os->excludes(o0);
    cmd->callback([=, &ctx, &status] {
        if (o0->count() == 0 && os->count() == 0) throw UsageError("give --v0/--v1 or --all-pairs-sample");
        const auto ct = ct_graph_from_document(load_graph(*path));
        const IsomorphismFinder finder(ct.graph, ct.skeleton, ct.cluster_of, *k);

        std::vector<std::pair<NodeId, NodeId>> pairs;
        if (o0->count() > 0) {
            pairs.emplace_back(*v0, *v1);
        } else {
            const auto c0 = ct.nodes_in(0);
            const auto c1 = ct.nodes_in(1);
            std::mt19937_64 rng(*seed);
            std::uniform_int_distribution<std::size_t> d0(0, c0.size() - 1), d1(0, c1.size() - 1);
            for (std::size_t i = 0; i < *sample; ++i) pairs.emplace_back(c0[d0(rng)], c1[d1(rng)]);
        }

        std::map<std::string, std::size_t> cases;
        std::size_t special = 0, verified = 0, bucket_fail = 0;
        std::vector<json> failures;
        for (const auto& [a, b] : pairs) {
            try {
                const auto phi = finder.find(a, b);
                special += phi.special_case_count;
                for (const auto& r : phi.audit) {
                    ++cases[to_string(r.invariant)];
                    if (check_bucket_lengths(r) == BucketCheck::Fails) ++bucket_fail;
                }
                if (verify_isomorphism(ct, *k, a, b, phi)) {
                    ++verified;
                } else {
                    failures.push_back({{"v0", a}, {"v1", b}, {"error", "not an isomorphism"}});
                }
            } catch (const PairingFailure& e) {
                failures.push_back({{"v0", a}, {"v1", b}, {"error", e.what()}});
            }
        }
        const bool ok = verified == pairs.size() && bucket_fail == 0 && !cases.contains("neither") &&
                        !cases.contains("both");
        json report{{"success", ok},
                    {"pairs", pairs.size()},
                    {"verified", verified},
                    {"audit_cases", cases},
                    {"bucket_check_failures", bucket_fail},
                    {"special_case_count", special},
                    {"failures", failures}};
        if (report_path->empty()) {
            ctx.out << report.dump(2) << '\n';
        } else {
            write_json_file(*report_path, report);
            ctx.out << "success=" << (ok ? "true" : "false") << " pairs=" << pairs.size()
                    << " special_case_count=" << special << '\n';
        }
        status = ok ? kOk : kFailed;
    });
}

void add_verify_edges(CLI::App& app, Context& ctx, int& status) {
    auto* cmd = app.add_subcommand("verify-edges", "Edge indistinguishability on a doubled graph");
    auto path = std::make_shared<std::string>();
    auto k = std::make_shared<std::size_t>(1);
    auto samples = std::make_shared<std::size_t>(32);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto report_path = std::make_shared<std::string>();
    cmd->add_option("--graph", *path)->required();
    cmd->add_option("--k", *k)->required();
    cmd->add_option("--samples", *samples);
    cmd->add_option("--seed", *seed);
    cmd->add_option("--report", *report_path);
    cmd->callback([=, &ctx, &status] {
        const auto d = doubled_from_document(load_graph(*path));
        const auto report = edge_indistinguishability_check(d, *k, *samples, *seed);
        emit_json(ctx.out, *report_path, edge_report_to_json(report));
        if (!report_path->empty()) ctx.out << "all_pass=" << (report.all_pass() ? "true" : "false") << '\n';
        status = report.all_pass() ? kOk : kFailed;
    });
}

// ---- simulation -------------------------------------------------------------------------------

std::string environment_compiler() {
#if defined(__clang__)
    return "clang " __clang_version__;
#elif defined(__GNUC__)
    return "gcc " __VERSION__;
#else
    return "unknown";
#endif
}

void add_simulate(CLI::App& app, Context& ctx, int& status) {
    auto* cmd = app.add_subcommand("simulate", "Run a bundled k-round algorithm over random labelings");
    auto path = std::make_shared<std::string>();
    auto k = std::make_shared<std::size_t>(1);
    auto alg = std::make_shared<std::string>("always-select");
    auto kind = std::make_shared<std::string>("vc");
    auto trials = std::make_shared<std::size_t>(1);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto report_path = std::make_shared<std::string>();
    auto jobs = std::make_shared<unsigned>(1);
    cmd->add_option("--graph", *path)->required();
    cmd->add_option("--k", *k)->required();
    cmd->add_option("--alg", *alg)->check(CLI::IsMember(bundled_algorithm_names()));
    cmd->add_option("--kind", *kind)->check(CLI::IsMember({"vc", "ds", "mm", "maxm", "mis"}));
    cmd->add_option("--trials", *trials)->check(CLI::PositiveNumber);
    cmd->add_option("--seed", *seed);
    cmd->add_option("--report", *report_path);
    cmd->add_option("--jobs", *jobs)->check(CLI::PositiveNumber);
    cmd->callback([=, &ctx, &status] {
        const auto doc = load_graph(*path);
        const auto report = measure_expectation(doc.graph, *k, bundled_algorithm(*alg, *k),
                                                parse_problem_kind(*kind), *trials, *seed,
                                                SimulationOptions{*jobs, false, true});
        auto j = report_to_json(report);
        j["environment"] = {{"compiler", environment_compiler()},
                            {"jobs", *jobs},
                            {"graph", *path},
                            {"n", doc.graph.node_count()},
                            {"edges", doc.graph.edge_count()}};
        emit_json(ctx.out, *report_path, j);
        if (!report_path->empty()) {
            ctx.out << "mean=" << report.mean << " stddev=" << report.stddev
                    << " all_valid=" << (report.all_valid ? "true" : "false") << '\n';
        }
        status = kOk;
    });
}

// ---- export / stats ---------------------------------------------------------------------------

void add_export_dot(CLI::App& app, Context& ctx, int& status) {
    auto* cmd = app.add_subcommand("export-dot", "Graphviz rendering of a graph file");
    auto path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    cmd->add_option("--graph", *path)->required();
    cmd->add_option("--out", *out_path);
    cmd->callback([=, &ctx, &status] {
        const auto doc = load_graph(*path);
        std::vector<std::size_t> levels;
        if (doc.clusters && doc.meta.contains("k") && doc.meta.contains("beta")) {
            const auto s = build_skeleton(doc.meta.at("k").get<std::size_t>(),
                                          doc.meta.at("beta").get<std::uint64_t>());
            const auto stage = doc.meta.value("stage", std::string{});
            levels = cluster_levels(s, stage.rfind("double", 0) == 0);
        }
        std::span<const std::uint32_t> clusters;
        if (doc.clusters) clusters = *doc.clusters;
        if (out_path->empty()) {
            write_dot(ctx.out, doc.graph, clusters, levels);
        } else {
            std::ofstream f(*out_path);
            if (!f) throw Error("cannot open " + *out_path);
            write_dot(f, doc.graph, clusters, levels);
        }
        status = kOk;
    });
}

void add_stats(CLI::App& app, Context& ctx, int& status) {
    auto* cmd = app.add_subcommand("stats", "Basic statistics of a graph file");
    auto path = std::make_shared<std::string>();
    cmd->add_option("--graph", *path)->required();
    cmd->callback([=, &ctx, &status] {
        const auto doc = load_graph(*path);
        const auto& g = doc.graph;
        const auto components = connected_components(g);
        const auto count = components.empty() ? 0 : *std::max_element(components.begin(), components.end()) + 1;
        json j{{"n", g.node_count()},
               {"edges", g.edge_count()},
               {"max_degree", g.node_count() ? g.max_degree() : 0},
               {"min_degree", g.node_count() ? g.min_degree() : 0},
               {"girth", to_string(girth(g))},
               {"bipartite", is_bipartite(g)},
               {"components", count}};
        status = kOk;
        const auto stage = doc.meta.value("stage", std::string{});
        if (doc.clusters && doc.meta.contains("k") && stage.rfind("double", 0) != 0) {
            const auto report = validate_ct_graph(ct_graph_from_document(doc));
            j["ct_violations"] = report.violations.size();
            if (!report.ok()) status = kFailed;
        }
        ctx.out << j.dump(2) << '\n';
    });
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cluster-tree lower-bound graphs: construction, lifting, verification, simulation", "kmw"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Help for every subcommand");
    Context ctx{out, err};
    int status = kOk;
    add_skeleton(app, ctx, status);
    add_build(app, ctx, status);
    add_predict(app, ctx, status);
    add_lift(app, ctx, status);
    add_verify_iso(app, ctx, status);
    add_verify_edges(app, ctx, status);
    add_simulate(app, ctx, status);
    add_export_dot(app, ctx, status);
    add_stats(app, ctx, status);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        if (e.get_exit_code() != 0) {
            err << app.help() << std::flush;
        }
        return kUsage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n' << app.help();
        return kUsage;
    } catch (const InvalidParameter& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const SizeCapExceeded& e) {
        err << "error: " << e.what() << '\n' << "estimate=" << e.estimate << " cap=" << e.cap << '\n';
        return kFailed;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailed;
    }
    return status;
}

}  // namespace kmw
