#pragma once

#include <cstdint>
#include <string>

#include "report.hpp"
#include "rst/walk.hpp"

namespace rst::cli {

/// Union of the knobs of every verify suite; 0 and empty mean "suite default".
struct SuiteOptions {
    std::string command;
    std::string graph;
    std::string method;
    std::size_t samples = 0;
    double threshold = 0.0;
    double min_fraction = 0.95;
    std::size_t max_n = 6;
    std::size_t big_n = 100;
    std::size_t big_k = 50;
    std::size_t trials = 10000;
    std::string grid;
    std::size_t t = 0;
    std::size_t steps = 30;
    std::string lambda = "norm";
    std::size_t rows = 0;
    std::size_t cols = 0;
    bool refined = false;
    double tolerance = 0.03;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    WalkConfig walk;
};

/// Runs suite `name` and fills `r`; returns whether every check passed.
/// Throws InvalidArgument for unknown suites or bad inputs.
bool run_suite(const std::string& name, const SuiteOptions& o, Report& r);

}  // namespace rst::cli
