#include <doctest.h>

#include <bit>
#include <cmath>

#include "oracles.hpp"
#include "rst/chain.hpp"
#include "rst/errors.hpp"
#include "rst/random.hpp"

using namespace rst;

namespace {

std::uint32_t mask_of(std::initializer_list<int> elems) {
    std::uint32_t m = 0;
    for (int e : elems) m |= 1u << e;
    return m;
}

std::size_t index_of(const std::vector<std::uint32_t>& sets, std::uint32_t mask) {
    for (std::size_t i = 0; i < sets.size(); ++i) {
        if (sets[i] == mask) return i;
    }
    FAIL("set not found");
    return 0;
}

std::vector<double> random_distribution(std::size_t size, Rng& rng, double zero_prob = 0.0) {
    std::vector<double> mu(size);
    double s = 0.0;
    for (auto& x : mu) {
        x = uniform01(rng) < zero_prob ? 0.0 : uniform01(rng) + 0.01;
        s += x;
    }
    if (s == 0.0) {
        mu[0] = 1.0;
        s = 1.0;
    }
    for (auto& x : mu) x /= s;
    return mu;
}

// Large-step chain by its definition: average over all t-sets U containing
// S of the law mu restricted to the k-subsets of U.
Eigen::MatrixXd large_step_reference(std::size_t m, std::size_t k, std::size_t t, const std::vector<double>& mu) {
    const auto ks = k_subsets(m, k);
    const auto ts = k_subsets(m, t);
    const double extensions = oracle::binomial(m - k, t - k);
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(ks.size()), static_cast<Eigen::Index>(ks.size()));
    for (std::size_t a = 0; a < ks.size(); ++a) {
        for (std::uint32_t u : ts) {
            if ((u & ks[a]) != ks[a]) continue;
            double z = 0.0;
            for (std::size_t b = 0; b < ks.size(); ++b) {
                if ((u & ks[b]) == ks[b]) z += mu[b];
            }
            for (std::size_t b = 0; b < ks.size(); ++b) {
                if ((u & ks[b]) == ks[b]) p(a, b) += mu[b] / z / extensions;
            }
        }
    }
    return p;
}

}  // namespace

TEST_CASE("k-subsets are lexicographic") {
    const auto s = k_subsets(4, 2);
    const std::vector<std::uint32_t> expect{mask_of({0, 1}), mask_of({0, 2}), mask_of({0, 3}),
                                            mask_of({1, 2}), mask_of({1, 3}), mask_of({2, 3})};
    CHECK(s == expect);
    CHECK(k_subsets(3, 0) == std::vector<std::uint32_t>{0});
    CHECK_THROWS_AS(k_subsets(13, 2), GuardExceeded);
}

TEST_CASE("down operator") {
    const Eigen::MatrixXd d = down_operator(3, 2, 1);
    const auto rows = k_subsets(3, 2), cols = k_subsets(3, 1);
    const std::size_t r01 = index_of(rows, mask_of({0, 1}));
    CHECK(d(r01, index_of(cols, mask_of({0}))) == 0.5);
    CHECK(d(r01, index_of(cols, mask_of({1}))) == 0.5);
    CHECK(d(r01, index_of(cols, mask_of({2}))) == 0.0);
    CHECK((down_operator(5, 3, 3) - Eigen::MatrixXd::Identity(10, 10)).norm() == 0.0);
    const Eigen::MatrixXd big = down_operator(7, 4, 2);
    for (Eigen::Index i = 0; i < big.rows(); ++i) CHECK(big.row(i).sum() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(down_operator(13, 2, 1), GuardExceeded);
    CHECK_THROWS_AS(down_operator(4, 2, 3), InvalidArgument);
}

TEST_CASE("up operator") {
    const std::vector<double> uniform(3, 1.0 / 3.0);
    const UpOperator u = up_operator(uniform, 3, 2, 1);
    const auto big = k_subsets(3, 2), small = k_subsets(3, 1);
    const std::size_t r0 = index_of(small, mask_of({0}));
    CHECK(u.matrix(r0, index_of(big, mask_of({0, 1}))) == doctest::Approx(0.5));
    CHECK(u.matrix(r0, index_of(big, mask_of({0, 2}))) == doctest::Approx(0.5));
    CHECK(u.matrix(r0, index_of(big, mask_of({1, 2}))) == 0.0);
    CHECK(u.unextendable_rows.empty());

    std::vector<double> point(6, 0.0);
    const auto s4 = k_subsets(4, 2);
    const std::size_t s0 = index_of(s4, mask_of({1, 3}));
    point[s0] = 1.0;
    const UpOperator pu = up_operator(point, 4, 2, 1);
    const auto singles = k_subsets(4, 1);
    for (std::size_t r = 0; r < singles.size(); ++r) {
        const bool extendable = (singles[r] & mask_of({1, 3})) != 0;
        if (extendable) {
            CHECK(pu.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s0)) == 1.0);
        } else {
            CHECK(pu.matrix.row(static_cast<Eigen::Index>(r)).sum() == 0.0);
            CHECK(std::find(pu.unextendable_rows.begin(), pu.unextendable_rows.end(), r) != pu.unextendable_rows.end());
        }
    }
}

TEST_CASE("down-up composition fixes mu") {
    Rng rng = make_stream(71, 0);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t m = 3 + uniform_index(rng, 5);
        const std::size_t k = 1 + uniform_index(rng, m - 1);
        const std::size_t l = uniform_index(rng, k + 1);
        const auto mu = random_distribution(static_cast<std::size_t>(oracle::binomial(m, k)), rng, 0.3);
        const Eigen::MatrixXd p = down_operator(m, k, l) * up_operator(mu, m, k, l).matrix;
        const Eigen::Map<const Eigen::RowVectorXd> mv(mu.data(), static_cast<Eigen::Index>(mu.size()));
        CHECK((mv * p - mv).cwiseAbs().maxCoeff() < 1e-12);
        for (std::size_t i = 0; i < mu.size(); ++i) {
            if (mu[i] > 0.0) CHECK(p.row(static_cast<Eigen::Index>(i)).sum() == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("large-step transition agrees with its definition") {
    Rng rng = make_stream(72, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t m = 4 + uniform_index(rng, 4);
        const std::size_t k = 1 + uniform_index(rng, m - 2);
        const std::size_t t = k + 1 + uniform_index(rng, m - k);
        const auto states = k_subsets(m, k);
        const auto mu = random_distribution(states.size(), rng);
        const Eigen::MatrixXd got = down_up_transition(states, mu, m, t - k);
        const Eigen::MatrixXd ref = large_step_reference(m, k, t, mu);
        CHECK((got - ref).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("chain stationarity on the triangle") {
    const ChainReport r = chain_stationarity_check(oracle::unit_triangle(), 3);
    CHECK(r.ground_size == 3);
    CHECK(r.states.size() == 3);
    CHECK(r.fresh == 1);
    for (double p : r.stationary) CHECK(p == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(r.stationarity_error < 1e-10);
    REQUIRE(r.tv_from_start.size() > 1);
    CHECK(r.tv_from_start[0] == doctest::Approx(2.0 / 3.0));
    CHECK(r.tv_from_start[1] < 1e-12);
    CHECK(r.monotone);
}

TEST_CASE("chain stationarity on K4") {
    // Leverage 1/2 per edge and lambda 3 give one copy each.
    const ChainReport r = chain_stationarity_check(oracle::unit_k4(), 5, 40);
    CHECK(r.ground_size == 6);
    CHECK(r.states.size() == 16);
    CHECK(r.stationarity_error < 1e-10);
    CHECK(r.monotone);
    CHECK(r.power_deviation < 1e-8);
    for (std::size_t s = 1; s < r.tv_worst.size(); ++s) CHECK(r.tv_worst[s] <= r.tv_worst[s - 1] + 1e-12);
    CHECK_THROWS_AS(chain_stationarity_check(oracle::unit_k4(), 3), InvalidArgument);
    CHECK_THROWS_AS(chain_stationarity_check(oracle::unit_k4(), 13, 5), InvalidArgument);
}

TEST_CASE("chain on a weighted graph with several copies") {
    const auto g = oracle::graph(4, {{0, 1, 1}, {1, 2, 2}, {2, 3, 0.5}, {0, 3, 3}});
    const ChainReport r = chain_stationarity_check(g, 5);
    CHECK(r.stationarity_error < 1e-10);
    CHECK(r.monotone);
}
