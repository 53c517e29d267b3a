#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "rst/random.hpp"

namespace rst {

/// Samples handled by one random stream. Splitting work at block granularity
/// keeps results independent of the job count.
inline constexpr std::size_t kSampleBlock = 1024;

/// Calls fn(block, begin, end, rng) for consecutive blocks of [0, count),
/// block b seeded with make_stream(seed, b), spread over `jobs` threads.
/// The first exception thrown by any block is rethrown.
template <class Fn>
void for_each_sample_block(std::size_t count, std::uint64_t seed, std::size_t jobs, Fn&& fn) {
    const std::size_t blocks = (count + kSampleBlock - 1) / kSampleBlock;
    auto run_block = [&](std::size_t b) {
        Rng rng = make_stream(seed, b);
        fn(b, b * kSampleBlock, std::min(count, (b + 1) * kSampleBlock), rng);
    };
    jobs = std::max<std::size_t>(1, std::min(jobs, blocks));
    if (jobs == 1) {
        for (std::size_t b = 0; b < blocks; ++b) run_block(b);
        return;
    }
    std::exception_ptr failure;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < jobs; ++j) {
        pool.emplace_back([&, j] {
            for (std::size_t b = j; b < blocks; b += jobs) {
                try {
                    run_block(b);
                } catch (...) {
                    std::lock_guard lock(mu);
                    if (!failure) failure = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace rst
