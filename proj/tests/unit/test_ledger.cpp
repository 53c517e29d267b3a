#include <doctest.h>

#include <cmath>
#include <thread>
#include <vector>

#include "rst/ledger.hpp"

using namespace rst;

TEST_CASE("cost formulas") {
    CHECK(cost::oracle_init(200, 30, 0.1) == doctest::Approx(std::sqrt(6000.0) / 0.1).epsilon(1e-15));
    CHECK(cost::tree_init(200, 30) == doctest::Approx(std::sqrt(6000.0)).epsilon(1e-15));
    CHECK(cost::iso_sample(400, 60) == doctest::Approx(std::sqrt(24000.0)).epsilon(1e-15));
    CHECK(cost::with_replacement(100, 593) == doctest::Approx(std::sqrt(59300.0)).epsilon(1e-15));
}

TEST_CASE("recording accumulates per phase") {
    QueryLedger l;
    l.record(Phase::IsoSample, 3, 1.5);
    l.record(Phase::IsoSample, 2, 2.0);
    l.record(Phase::DownStep, 1, 0.0);
    CHECK(l.invocations(Phase::IsoSample) == 2);
    CHECK(l.classical_calls(Phase::IsoSample) == 5);
    CHECK(l.charged(Phase::IsoSample) == 3.5);
    CHECK(l.total_classical_calls() == 6);
    CHECK(l.total_charged() == 3.5);
    CHECK(l.invocations(Phase::KSubset) == 0);
}

TEST_CASE("summary lists used phases and omits timing by default") {
    QueryLedger l;
    l.record(Phase::MaxProductTree, 10, 4.0);
    const std::string s = l.summary(false);
    CHECK(s.find("ledger.max_product_tree.invocations: 1\n") != std::string::npos);
    CHECK(s.find("ledger.max_product_tree.classical_calls: 10\n") != std::string::npos);
    CHECK(s.find("ledger.iso_sample") == std::string::npos);
    CHECK(s.find("wall_ms") == std::string::npos);
    l.add_time(Phase::MaxProductTree, std::chrono::milliseconds(3));
    CHECK(l.summary(true).find("ledger.max_product_tree.wall_ms: ") != std::string::npos);
}

TEST_CASE("concurrent recording is lossless") {
    QueryLedger l;
    std::vector<std::thread> pool;
    for (int t = 0; t < 4; ++t) {
        pool.emplace_back([&] {
            for (int i = 0; i < 10000; ++i) l.record(Phase::WithReplacement, 1, 0.5);
        });
    }
    for (auto& t : pool) t.join();
    CHECK(l.invocations(Phase::WithReplacement) == 40000);
    CHECK(l.classical_calls(Phase::WithReplacement) == 40000);
    CHECK(l.charged(Phase::WithReplacement) == 20000.0);
}

TEST_CASE("phase timer adds elapsed time") {
    QueryLedger l;
    {
        PhaseTimer timer(&l, Phase::DownStep);
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
    CHECK(l.elapsed(Phase::DownStep) >= std::chrono::milliseconds(2));
    PhaseTimer noop(nullptr, Phase::DownStep);
}
