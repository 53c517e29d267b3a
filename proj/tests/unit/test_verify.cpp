#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "rst/errors.hpp"
#include "rst/exact_samplers.hpp"
#include "rst/generators.hpp"
#include "rst/resistance.hpp"
#include "rst/verify.hpp"

using namespace rst;

namespace {

std::vector<double> random_simplex(std::size_t n, Rng& rng, bool full_support = true) {
    std::vector<double> p(n);
    double s = 0.0;
    for (auto& x : p) {
        x = (full_support || uniform01(rng) < 0.7) ? uniform01(rng) + 1e-3 : 0.0;
        s += x;
    }
    if (s == 0.0) {
        p[0] = 1.0;
        s = 1.0;
    }
    for (auto& x : p) x /= s;
    return p;
}

}  // namespace

TEST_CASE("tv examples") {
    const std::vector<double> a{0.5, 0.5}, b{1.0, 0.0}, c{0.0, 1.0};
    CHECK(tv_distance(a, a) == 0.0);
    CHECK(tv_distance(b, c) == 1.0);
    CHECK(tv_distance(a, b) == 0.5);
    const std::vector<double> bad{0.5, 0.6};
    CHECK_THROWS_AS(tv_distance(bad, a), InvalidArgument);
    CHECK_THROWS_AS(tv_distance(a, std::vector<double>{1.0}), InvalidArgument);

    const Distribution mu{{{0, 1}, 0.5}, {{1, 2}, 0.5}};
    const Distribution nu{{{0, 2}, 1.0}};
    CHECK(tv_distance(mu, nu) == 1.0);
    CHECK(tv_distance(mu, mu) == 0.0);
}

TEST_CASE("kl examples") {
    const std::vector<double> a{1.0, 0.0}, b{0.5, 0.5};
    CHECK(kl_divergence(b, b) == 0.0);
    CHECK(kl_divergence(a, b) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK_THROWS_AS(kl_divergence(b, a), InvalidArgument);
    const Distribution mu{{{0}, 1.0}};
    const Distribution nu{{{0}, 0.5}, {{1}, 0.5}};
    CHECK(kl_divergence(mu, nu) == doctest::Approx(std::log(2.0)));
    CHECK_THROWS_AS(kl_divergence(nu, mu), InvalidArgument);
}

TEST_CASE("metric properties, Pinsker and data processing") {
    Rng rng = make_stream(81, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + uniform_index(rng, 8);
        const auto p = random_simplex(n, rng, false), q = random_simplex(n, rng), r = random_simplex(n, rng);
        CHECK(tv_distance(p, q) == tv_distance(q, p));
        CHECK(tv_distance(p, r) <= tv_distance(p, q) + tv_distance(q, r) + 1e-12);
        const double kl = kl_divergence(p, q);
        CHECK(kl >= 0.0);
        CHECK(tv_distance(p, q) <= std::sqrt(kl / 2.0) + 1e-12);

        // Random row-stochastic matrix.
        std::vector<std::vector<double>> P(n);
        for (auto& row : P) row = random_simplex(n, rng);
        std::vector<double> pp(n, 0.0), qp(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                pp[j] += p[i] * P[i][j];
                qp[j] += q[i] * P[i][j];
            }
        }
        CHECK(kl_divergence(pp, qp) <= kl + 1e-12);
    }
}

TEST_CASE("chi-square against closed forms") {
    // Two degrees of freedom: the survival function is exp(-x/2).
    const std::vector<std::uint64_t> counts{10, 20, 30};
    const ChiSquareResult r = chi_square_uniform(counts);
    CHECK(r.statistic == doctest::Approx(10.0));
    CHECK(r.dof == 2);
    CHECK(r.p_value == doctest::Approx(std::exp(-5.0)).epsilon(1e-12));
    // One degree of freedom: P(chi2 > x) = erfc(sqrt(x/2)).
    const std::vector<std::uint64_t> two{40, 60};
    const ChiSquareResult s = chi_square_test(two, std::vector<double>{0.5, 0.5});
    CHECK(s.statistic == doctest::Approx(4.0));
    CHECK(s.p_value == doctest::Approx(std::erfc(std::sqrt(2.0))).epsilon(1e-12));
    CHECK_THROWS_AS(chi_square_uniform(std::vector<std::uint64_t>{5}), InvalidArgument);
}

TEST_CASE("empirical distributions") {
    EmpiricalDistribution a, b;
    a.add(SpanningTree{{0, 1}}, 3);
    b.add(SpanningTree{{0, 1}});
    b.add(SpanningTree{{1, 2}});
    a.merge(b);
    CHECK(a.total() == 5);
    CHECK(a.count({0, 1}) == 4);
    CHECK(a.count({0, 2}) == 0);
    const Distribution d = a.normalized();
    CHECK(d.at({1, 2}) == doctest::Approx(0.2));
}

TEST_CASE("marginal check") {
    const WeightedGraph tri = oracle::unit_triangle();
    Rng rng = make_stream(82, 0);
    EmpiricalDistribution emp;
    for (int i = 0; i < 50000; ++i) emp.add(wilson_sample(tri, rng));
    const MarginalReport r = marginal_check(emp, tri, build_exact_oracle(tri));
    for (const auto& e : r.edges) {
        CHECK(e.expected == doctest::Approx(2.0 / 3.0));
        CHECK(std::abs(e.frequency - 2.0 / 3.0) < 0.01);
        CHECK_FALSE(e.flagged);
    }
    CHECK(r.frequency_sum == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.fraction_within_3sigma == 1.0);

    const WeightedGraph tree = oracle::graph(4, {{0, 1, 1}, {1, 2, 2}, {1, 3, 3}});
    EmpiricalDistribution t;
    t.add(SpanningTree{{0, 1, 2}}, 100);
    const MarginalReport rt = marginal_check(t, tree, build_exact_oracle(tree));
    for (const auto& e : rt.edges) {
        CHECK(e.frequency == 1.0);
        CHECK(e.sigma < 1e-6);
        CHECK_FALSE(e.flagged);
    }
    CHECK(rt.l1_error < 1e-12);
}

TEST_CASE("marginal noise floor matches simulation of exact frequencies") {
    // E|N(0, s^2)| = s sqrt(2/pi), checked against a binomial simulation.
    const WeightedGraph g = oracle::unit_k4();
    const ResistanceOracle o = build_exact_oracle(g);
    Rng rng = make_stream(83, 0);
    double mean_l1 = 0.0;
    const int reps = 200;
    MarginalReport last;
    for (int r = 0; r < reps; ++r) {
        std::vector<std::uint64_t> counts(6, 0);
        for (auto& c : counts) {
            for (int i = 0; i < 1000; ++i) c += uniform01(rng) < 0.5;
        }
        last = marginal_check_counts(counts, 1000, g, o);
        mean_l1 += last.l1_error / reps;
    }
    CHECK(last.l1_noise_mean == doctest::Approx(6.0 * std::sqrt(0.25 / 1000.0) * std::sqrt(2.0 / std::numbers::pi)));
    CHECK(std::abs(mean_l1 - last.l1_noise_mean) < 0.1 * last.l1_noise_mean);
}

TEST_CASE("mixing curve on the triangle") {
    const std::vector<std::size_t> grid{0, 1, 2};
    WalkConfig cfg;
    cfg.oracle = OracleMode::Exact;
    const MixingCurve c = mixing_curve(oracle::unit_triangle(), cfg, grid, 30000, 84);
    REQUIRE(c.points.size() == 3);
    REQUIRE(c.points[0].tv);
    CHECK(*c.points[0].tv == doctest::Approx(2.0 / 3.0));
    CHECK(*c.points[1].tv < 0.02);
    CHECK(*c.points[2].tv < 0.02);
    CHECK(c.points[2].marginal_l1 <= c.points[2].l1_noise_mean + 4.0 * c.points[2].l1_noise_sd);
}

TEST_CASE("plateau depth") {
    MixingCurve c;
    for (std::size_t i = 0; i < 5; ++i) {
        MixingPoint p;
        p.iterations = i * 10;
        p.marginal_l1 = i < 2 ? 1.0 : 0.01;
        p.l1_noise_mean = 0.01;
        p.l1_noise_sd = 0.001;
        c.points.push_back(p);
    }
    CHECK(plateau_depth(c) == std::optional<std::size_t>(20));
    c.points.back().marginal_l1 = 1.0;
    CHECK_FALSE(plateau_depth(c).has_value());
}
