#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rst/errors.hpp"
#include "rst/gadget.hpp"
#include "rst/generators.hpp"
#include "rst/ledger.hpp"
#include "rst/resistance.hpp"
#include "rst/sampling.hpp"
#include "rst/verify.hpp"
#include "rst/walk.hpp"

using namespace rst;

namespace {

EmpiricalDistribution collect(const std::vector<SpanningTree>& trees) {
    EmpiricalDistribution emp;
    for (const auto& t : trees) emp.add(t);
    return emp;
}

double walk_tv(const WeightedGraph& g, std::size_t samples, std::uint64_t seed, const WalkConfig& cfg = {}) {
    return tv_distance(collect(draw_trees(g, Method::Walk, samples, seed, 1, cfg)).normalized(),
                       reference_distribution(g));
}

}  // namespace

TEST_CASE("iteration count formula") {
    for (std::size_t n : {2, 5, 30, 1000}) {
        for (double eps : {0.05, 0.2}) {
            const double l = std::log(static_cast<double>(n + 2));
            const double expect = std::ceil(2.0 * l * l * l * std::log(2.0 / eps));
            CHECK(default_iterations(n, eps, 2.0) == static_cast<std::size_t>(expect));
        }
    }
    CHECK(default_iterations(30, 0.05, 2.0) == 308);
}

TEST_CASE("config validation") {
    WalkConfig c;
    CHECK_NOTHROW(c.validate());
    c.epsilon = 0.0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = {};
    c.epsilon = 1.0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = {};
    c.k_fresh = 0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = {};
    c.iterations = 0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = {};
    c.oracle_epsilon = 0.4;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
}

TEST_CASE("qrst examples") {
    Rng rng = make_stream(61, 0);
    CHECK(qrst(oracle::graph(2, {{0, 1, 2.5}}), {}, rng) == SpanningTree{{0}});
    CHECK(walk_tv(oracle::unit_triangle(), 50000, 62) < 0.02);
    for (const auto& m : all_search_matrices(2, 3)) {
        CHECK(qrst(build_gadget(m, false), {}, rng) == planted_tree(m));
    }
    CHECK_THROWS_AS(qrst(oracle::graph(3, {{0, 1, 1}, {1, 2, 0}}), {}, rng), DisconnectedGraph);
    CHECK_THROWS_AS(qrst(WeightedGraph(1, {}), {}, rng), InvalidArgument);
}

TEST_CASE("a full up-step samples W_G' in one step") {
    const WeightedGraph g = oracle::unit_k4();
    const IsotropicView v = build_isotropic_view(g, build_exact_oracle(g), 1.5);
    REQUIRE(v.m_prime() == 12);
    Rng rng = make_stream(63, 0);
    WalkState start{label_tree(SpanningTree{{0, 1, 2}}), 0};
    EmpiricalDistribution emp;
    for (int i = 0; i < 50000; ++i) emp.add(strip_labels(walk_step(start, v, 9, rng).tree));
    CHECK(tv_distance(emp.normalized(), reference_distribution(g)) < 0.02);
}

TEST_CASE("triangle step with one fresh copy is uniform") {
    const WeightedGraph g = oracle::unit_triangle();
    const IsotropicView v = build_isotropic_view(g, build_exact_oracle(g), 3.0);
    Rng rng = make_stream(64, 0);
    WalkState start{label_tree(SpanningTree{{0, 1}}), 0};
    EmpiricalDistribution emp;
    for (int i = 0; i < 30000; ++i) {
        const WalkState next = walk_step(start, v, 1, rng);
        CHECK(next.iteration == 1);
        emp.add(strip_labels(next.tree));
    }
    CHECK(tv_distance(emp.normalized(), reference_distribution(g)) < 0.02);
}

TEST_CASE("long walks stay on valid labeled trees") {
    Rng rng = make_stream(65, 0);
    for (int trial = 0; trial < 5; ++trial) {
        const std::size_t n = 3 + uniform_index(rng, 10);
        const WeightedGraph g = random_connected_graph_p(n, 0.5, 0.1, 10.0, rng);
        const IsotropicView v = build_isotropic_view(g, build_exact_oracle(g), LambdaChoice::LeverageNorm);
        WalkState s{label_tree(max_product_spanning_tree(g)), 0};
        const std::size_t k = std::min<std::size_t>(2 * n, v.m_prime() - (n - 1));
        for (int step = 0; step < 2000; ++step) {
            s = walk_step(s, v, k, rng);
            REQUIRE(s.tree.size() == n - 1);
            for (const auto& l : s.tree) REQUIRE(v.domain().contains(l));
            REQUIRE(is_spanning_tree(g, strip_labels(s.tree).edge_ids));
        }
    }
}

TEST_CASE("sampler setup") {
    Rng rng = make_stream(66, 0);
    const WeightedGraph g = oracle::unit_k4();
    const WalkSampler s(g, {}, rng);
    CHECK(s.iterations() == default_iterations(4, 0.05, 2.0));
    CHECK(s.initial_tree() == SpanningTree{{0, 1, 2}});
    CHECK(s.initial_state().tree == label_tree(SpanningTree{{0, 1, 2}}));
    CHECK(s.k_fresh() == std::min<std::size_t>(8, s.view().m_prime() - 3));
    CHECK(s.down_step_tolerance() == doctest::Approx(0.05 / (2.0 * static_cast<double>(s.iterations()))));
    CHECK_FALSE(s.warnings().empty());

    WalkConfig fixed;
    fixed.iterations = 7;
    fixed.k_fresh = 2;
    const WalkSampler f(g, fixed, rng);
    CHECK(f.iterations() == 7);
    CHECK(f.k_fresh() == 2);
    std::size_t last = 0;
    f.run(rng, 7, [&](std::size_t t, const LabeledTree& tree) {
        CHECK(t == last + (t > 0));
        last = t;
        CHECK(is_spanning_tree(g, strip_labels(tree).edge_ids));
    });
    CHECK(last == 7);
}

TEST_CASE("weight scaling leaves the law unchanged") {
    const WeightedGraph g = oracle::graph(4, {{0, 1, 1}, {1, 2, 2}, {2, 3, 0.5}, {0, 3, 3}, {0, 2, 1.5}});
    const auto a = collect(draw_trees(g, Method::Walk, 50000, 67));
    const auto b = collect(draw_trees(g.scaled(1000.0), Method::Walk, 50000, 68));
    CHECK(tv_distance(a.normalized(), b.normalized()) < 0.02);
}

TEST_CASE("sampling is deterministic and independent of the job count") {
    const WeightedGraph g = oracle::graph(5, {{0, 1, 1}, {1, 2, 2}, {2, 3, 0.5}, {3, 4, 3}, {0, 4, 1.5}, {1, 3, 1}});
    for (Method m : {Method::Walk, Method::Wilson, Method::Aldous}) {
        const auto one = draw_trees(g, m, 3000, 99, 1);
        CHECK(one == draw_trees(g, m, 3000, 99, 1));
        CHECK(one == draw_trees(g, m, 3000, 99, 3));
        CHECK(one != draw_trees(g, m, 3000, 100, 1));
    }
}

TEST_CASE("walk ledger matches the closed form") {
    Rng graph_rng = make_stream(69, 0);
    const WeightedGraph g = random_connected_graph(12, 30, 0.1, 10.0, graph_rng);
    QueryLedger ledger;
    Rng setup = make_stream(69, kSetupStream);
    const WalkSampler s(g, {}, setup, &ledger);
    draw_walk_trees(s, 5, 70);
    const double mn = std::sqrt(30.0 * 12.0);
    const double expect = mn / 0.1 + mn + 5.0 * static_cast<double>(s.iterations()) *
                                              std::sqrt(static_cast<double>(s.view().m_prime() * s.k_fresh()));
    CHECK(std::abs(ledger.total_charged() - expect) <= 1e-9 * expect);
    CHECK(ledger.invocations(Phase::DownStep) == 5 * s.iterations());
    CHECK(ledger.invocations(Phase::IsoSample) == 5 * s.iterations());
}
