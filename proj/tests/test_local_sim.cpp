#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "kmw/ct_builder.hpp"
#include "kmw/errors.hpp"
#include "kmw/lifts.hpp"
#include "kmw/local_sim.hpp"
#include "kmw/matching.hpp"
#include "support.hpp"

using namespace kmw;

namespace {

// Enough phases and radius to cover any graph of the corpus, so the run is a
// full (hence maximal) random-priority matching.
constexpr std::size_t kFullPhases = 40;

std::vector<Edge> maximal_matching(const Graph& g, std::uint64_t seed) {
    const auto labeling = random_labeling(g.node_count(), seed, true);
    const auto out = run_local(g, 2 * kFullPhases, random_priority_matching(kFullPhases), labeling);
    const auto decoded = decode_output(g, ProblemKind::MM, out, labeling);
    REQUIRE(decoded.consistent);
    return decoded.solution.edges;
}

std::vector<NodeId> endpoints(const std::vector<Edge>& m) {
    std::vector<NodeId> v;
    for (const auto& [a, b] : m) {
        v.push_back(a);
        v.push_back(b);
    }
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

TEST_CASE("problem kinds") {
    CHECK(parse_problem_kind("vc") == ProblemKind::VC);
    CHECK(parse_problem_kind("maxm") == ProblemKind::MaxM);
    CHECK(to_string(ProblemKind::MIS) == "mis");
    CHECK(is_matching_kind(ProblemKind::MM));
    CHECK_FALSE(is_matching_kind(ProblemKind::DS));
    CHECK_THROWS_AS(parse_problem_kind("tsp"), InvalidParameter);
    CHECK_THROWS_AS(bundled_algorithm("nope", 1), InvalidParameter);
}

TEST_CASE("labelings are distinct, in range and reproducible") {
    for (std::size_t n : {1u, 2u, 10u, 500u}) {
        const auto l = random_labeling(n, 42, true);
        const std::set<std::uint64_t> ids(l.ids.begin(), l.ids.end());
        CHECK(ids.size() == n);
        CHECK(*ids.begin() >= 1);
        CHECK(*ids.rbegin() <= n * n * n);
        CHECK(l.tapes.size() == n);
        CHECK(random_labeling(n, 42, true).ids == l.ids);
    }
    CHECK(random_labeling(100, 1).ids != random_labeling(100, 2).ids);
    CHECK(random_labeling(5, 1).tapes.empty());
}

TEST_CASE("always-select with zero rounds is the trivial cover") {
    const auto g = petersen_graph();
    const auto labeling = random_labeling(g.node_count(), 0);
    const auto out = run_local(g, 0, bundled_algorithm("always-select", 0).run, labeling);
    const auto d = decode_output(g, ProblemKind::VC, out, labeling);
    CHECK(d.solution.nodes.size() == g.node_count());
    CHECK(validate_solution(g, ProblemKind::VC, d.solution));
}

TEST_CASE("runs are deterministic in the seed") {
    const auto ct = build_low_girth(1, 4);
    for (const auto& name : bundled_algorithm_names()) {
        const auto alg = bundled_algorithm(name, 2);
        const auto l = random_labeling(ct.graph.node_count(), 9, alg.needs_tapes);
        CHECK(run_local(ct.graph, 2, alg.run, l) == run_local(ct.graph, 2, alg.run, l));
    }
    const auto alg = bundled_algorithm("not-local-min", 1);
    const auto a = measure_expectation(ct.graph, 1, alg, ProblemKind::VC, 1, 77);
    const auto b = measure_expectation(ct.graph, 1, alg, ProblemKind::VC, 1, 77);
    CHECK(report_to_json(a).dump() == report_to_json(b).dump());
}

TEST_CASE("parallel trials merge in seed order") {
    const auto ct = build_low_girth(1, 4);
    const auto alg = bundled_algorithm("not-local-min", 1);
    const auto serial = measure_expectation(ct.graph, 1, alg, ProblemKind::VC, 40, 5, {1, false, true});
    const auto parallel = measure_expectation(ct.graph, 1, alg, ProblemKind::VC, 40, 5, {3, false, true});
    CHECK(serial.sizes == parallel.sizes);
    CHECK(serial.mean == parallel.mean);
}

TEST_CASE("C_0 and C_1 nodes are selected at indistinguishable rates") {
    // G'_1(4) has girth 4 >= 2k+1 for k = 1, so both clusters see the same views.
    const auto ct = build_low_girth(1, 4);
    const LocalRunner runner(ct.graph, 1);
    const auto c0 = ct.nodes_in(0), c1 = ct.nodes_in(1);
    for (const auto& name : {"not-local-min", "local-max"}) {
        const auto alg = bundled_algorithm(name, 1);
        double s0 = 0, s1 = 0;
        const int trials = 400;
        for (int t = 0; t < trials; ++t) {
            const auto out = runner.run(alg.run, random_labeling(ct.graph.node_count(), 1000 + t));
            for (NodeId v : c0) s0 += out[v] != 0;
            for (NodeId v : c1) s1 += out[v] != 0;
        }
        // 2x2 contingency table, Pearson statistic with one degree of freedom.
        const double n0 = trials * static_cast<double>(c0.size()), n1 = trials * static_cast<double>(c1.size());
        const double p = (s0 + s1) / (n0 + n1);
        const double chi2 = std::pow(s0 - n0 * p, 2) / (n0 * p) + std::pow((n0 - s0) - n0 * (1 - p), 2) / (n0 * (1 - p)) +
                            std::pow(s1 - n1 * p, 2) / (n1 * p) + std::pow((n1 - s1) - n1 * (1 - p), 2) / (n1 * (1 - p));
        CHECK(chi2 < 10.83);
    }
}

TEST_CASE("solution validation") {
    const auto g = petersen_graph();
    Solution all;
    for (NodeId v = 0; v < 10; ++v) all.nodes.push_back(v);
    CHECK(validate_solution(g, ProblemKind::VC, all));
    CHECK(validate_solution(g, ProblemKind::DS, all));
    CHECK_FALSE(validate_solution(g, ProblemKind::MIS, all));
    CHECK_FALSE(validate_solution(g, ProblemKind::MM, Solution{}));
    CHECK(validate_solution(Graph(3), ProblemKind::MM, Solution{}));

    const auto m = maximal_matching(g, 3);
    Solution mm{{}, m};
    CHECK(validate_solution(g, ProblemKind::MM, mm));
    CHECK(validate_solution(g, ProblemKind::MaxM, mm));
    CHECK(validate_solution(g, ProblemKind::VC, Solution{endpoints(m), {}}));

    Solution overlapping{{}, {{0, 1}, {0, 4}}};
    CHECK_FALSE(validate_solution(g, ProblemKind::MaxM, overlapping));
    Solution non_edge{{}, {{0, 2}}};
    CHECK_FALSE(validate_solution(g, ProblemKind::MaxM, non_edge));
}

TEST_CASE("dangling matching claims are inconsistent") {
    const auto g = path_graph(3);
    const auto l = random_labeling(3, 0);
    const std::vector<std::uint64_t> out{l.ids[1], 0, 0};
    CHECK_FALSE(decode_output(g, ProblemKind::MM, out, l).consistent);
    const std::vector<std::uint64_t> good{l.ids[1], l.ids[0], 0};
    const auto d = decode_output(g, ProblemKind::MM, good, l);
    CHECK(d.consistent);
    CHECK(d.solution.edges == std::vector<Edge>{{0, 1}});
}

TEST_CASE("exact solvers") {
    CHECK(exact_mvc_bipartite(cycle_graph(4)).size == 2);
    CHECK(exact_mvc_bipartite(star_graph(5)).size == 1);
    CHECK_THROWS_AS(exact_mvc_bipartite(complete_graph(3)), NotBipartite);
    CHECK(exact_small(complete_graph(3), ProblemKind::VC) == 2);
    CHECK(exact_small(path_graph(4), ProblemKind::DS) == 2);
    CHECK(exact_small(petersen_graph(), ProblemKind::VC) == 6);
    CHECK(exact_small(petersen_graph(), ProblemKind::DS) == 3);
    CHECK(exact_small(petersen_graph(), ProblemKind::MaxM) == 5);
    CHECK(exact_small(build_matching_double(build_low_girth(1, 4)).graph, ProblemKind::MaxM) == 100);
    CHECK_THROWS_AS(exact_small(cycle_graph(41), ProblemKind::VC), TooLarge);
}

TEST_CASE("exact solvers agree with exhaustive search") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto g = testing::random_graph(4 + seed % 13, 0.15 + 0.01 * (seed % 15), seed);
        CHECK(exact_small(g, ProblemKind::VC) == testing::brute_force_min(g, testing::covers));
        CHECK(exact_small(g, ProblemKind::DS) == testing::brute_force_min(g, testing::dominates));
        CHECK(exact_small(g, ProblemKind::MaxM) == testing::brute_force_matching(g));
    }
}

TEST_CASE("Koenig cover equals branch and bound on bipartite graphs") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto g = testing::random_bipartite(5 + seed % 16, 5 + (seed * 7) % 16, 0.12, seed);
        const auto cover = exact_mvc_bipartite(g);
        CHECK(cover.size == exact_small(g, ProblemKind::VC));
        CHECK(validate_solution(g, ProblemKind::VC, Solution{cover.witness, {}}));
    }
}

TEST_CASE("G'_1 cover bound and witness") {
    const auto ct = build_low_girth(1, 16);
    const auto cover = exact_mvc_bipartite(ct.graph);
    CHECK(cover.size <= 528);
    Solution outside_c0;
    for (NodeId v = 0; v < ct.graph.node_count(); ++v) {
        if (ct.cluster_of[v] != 0) outside_c0.nodes.push_back(v);
    }
    CHECK(outside_c0.nodes.size() == 528);
    CHECK(validate_solution(ct.graph, ProblemKind::VC, outside_c0));
}

TEST_CASE("simulation report on G'_1(16)") {
    const auto ct = build_low_girth(1, 16);
    const auto r = measure_expectation(ct.graph, 1, bundled_algorithm("always-select", 1), ProblemKind::VC, 5, 0);
    CHECK(r.mean == 4624);
    CHECK(r.stddev == 0);
    CHECK(r.all_valid);
    REQUIRE(r.optimum);
    REQUIRE(r.ratio);
    CHECK(*r.ratio == doctest::Approx(4624.0 / static_cast<double>(*r.optimum)));

    const auto lm = measure_expectation(ct.graph, 1, bundled_algorithm("local-max", 1), ProblemKind::VC, 3, 0);
    CHECK_FALSE(lm.all_valid);

    const auto j = report_to_json(r);
    for (const char* key : {"algorithm", "kind", "k", "trials", "seed", "sizes", "mean", "stddev", "all_valid",
                            "optimum", "ratio", "standard_error"}) {
        CHECK(j.contains(key));
    }
}

TEST_CASE("maximization ratio is optimum over mean") {
    const auto g = petersen_graph();
    const auto r = measure_expectation(g, 2, bundled_algorithm("random-mm", 2), ProblemKind::MaxM, 20, 1);
    REQUIRE(r.ratio);
    CHECK(*r.optimum == 5);
    CHECK(*r.ratio == doctest::Approx(5.0 / r.mean));
}

TEST_CASE("matching endpoints cover within twice the optimum") {
    const auto corpus = testing::small_corpus(20);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& g = corpus[i];
        const auto m = maximal_matching(g, i);
        CHECK(validate_solution(g, ProblemKind::MM, Solution{{}, m}));
        const Solution cover{endpoints(m), {}};
        CHECK(validate_solution(g, ProblemKind::VC, cover));
        CHECK(cover.nodes.size() <= 2 * exact_small(g, ProblemKind::MaxM));
        CHECK(cover.nodes.size() <= 2 * exact_small(g, ProblemKind::VC));
    }
}

TEST_CASE("maximal matchings are independent sets of the line graph and back") {
    const auto corpus = testing::small_corpus(20);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& g = corpus[i];
        const auto lg = line_graph(g);
        const auto m = maximal_matching(g, 100 + i);
        const auto nodes = matching_to_line_nodes(lg, m);
        CHECK(validate_solution(lg.graph, ProblemKind::MIS, Solution{nodes, {}}));

        // A maximal independent set of L(g) found greedily maps back to a maximal matching.
        std::vector<bool> blocked(lg.graph.node_count(), false);
        std::vector<NodeId> mis;
        for (NodeId x = static_cast<NodeId>(lg.graph.node_count()); x-- > 0;) {
            if (blocked[x]) continue;
            mis.push_back(x);
            for (NodeId y : lg.graph.neighbors(x)) blocked[y] = true;
        }
        CHECK(validate_solution(g, ProblemKind::MM, Solution{{}, line_nodes_to_matching(lg, mis)}));
    }
}

TEST_CASE("vertex covers and line-graph dominating sets") {
    const auto corpus = testing::small_corpus(20);
    for (const auto& g : corpus) {
        if (g.edge_count() == 0 || g.edge_count() > 40) continue;
        const auto lg = line_graph(g);
        const auto mvc = exact_small(g, ProblemKind::VC);
        const auto mds = exact_small(lg.graph, ProblemKind::DS);
        // One incident edge per cover node: a dominating set of L(g) no larger than the cover.
        const auto cover = endpoints(maximal_matching(g, 7));
        REQUIRE(validate_solution(g, ProblemKind::VC, Solution{cover, {}}));
        const auto ds = vc_to_line_ds(g, lg, cover);
        CHECK(validate_solution(lg.graph, ProblemKind::DS, Solution{ds, {}}));
        CHECK(ds.size() <= cover.size());
        CHECK(mds <= mvc);
        // Endpoints of a dominating set of L(g) cover g with at most twice as many nodes.
        std::vector<NodeId> all(lg.graph.node_count());
        std::iota(all.begin(), all.end(), 0);
        const auto back = line_ds_to_vc(lg, all);
        CHECK(validate_solution(g, ProblemKind::VC, Solution{back, {}}));
        CHECK(mvc <= 2 * mds);
    }
}

TEST_CASE("mm_to_mvc") {
    const auto empty = mm_to_mvc(Graph(4), random_priority_matching(1), 2);
    CHECK(empty.cover.empty());

    const auto k2 = complete_graph(2);
    const auto r = mm_to_mvc(k2, random_priority_matching(1), 2);
    CHECK(r.cover.size() <= 2);
    CHECK(validate_solution(k2, ProblemKind::VC, Solution{r.cover, {}}));
    CHECK(r.runs == 1);

    CHECK(mm_to_mvc(petersen_graph(), random_priority_matching(2), 4).runs ==
          static_cast<std::size_t>(std::ceil(36 * std::log(3.0))));

    const auto corpus = testing::small_corpus(10);
    for (const auto& g : corpus) {
        if (g.edge_count() == 0) continue;
        const auto opt = exact_small(g, ProblemKind::VC);
        double total = 0;
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto out = mm_to_mvc(g, random_priority_matching(2), 4, 36, seed);
            CHECK(validate_solution(g, ProblemKind::VC, Solution{out.cover, {}}));
            total += static_cast<double>(out.cover.size());
        }
        CHECK(total / 5 <= 14.0 * static_cast<double>(opt));
    }
}

TEST_CASE("edge indistinguishability") {
    const auto base = build_matching_double(build_low_girth(1, 4));
    CHECK_THROWS_AS(edge_indistinguishability_check(base, 2), GirthTooLow);

    const auto trivial = edge_indistinguishability_check(base, 0, 8, 0);
    CHECK(trivial.all_pass());

    const auto lifted = lift_doubled(base, 3);
    const auto report = edge_indistinguishability_check(lifted.doubled, 1, 16, 4);
    CHECK(report.all_pass());
    std::set<std::string> families;
    for (const auto& p : report.pairs) families.insert(p.family);
    CHECK(families == std::set<std::string>{"C0C1-vs-C0C0bar", "C0barC1bar-vs-C1C1bar"});
    CHECK(edge_report_to_json(report).at("all_pass") == true);
}
