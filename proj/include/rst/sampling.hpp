#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "rst/graph.hpp"
#include "rst/ledger.hpp"
#include "rst/walk.hpp"

namespace rst {

enum class Method { Walk, Wilson, Aldous };

std::optional<Method> parse_method(std::string_view name);
std::string_view method_name(Method m);

/// `count` independent trees, deterministic in (seed, count) regardless of
/// `jobs`. For the walk, the sampler (oracle, view, start tree) is built once
/// from stream 2^64 - 1 of the seed and shared by all samples.
std::vector<SpanningTree> draw_trees(const WeightedGraph& g, Method method, std::size_t count, std::uint64_t seed,
                                     std::size_t jobs = 1, const WalkConfig& cfg = {}, QueryLedger* ledger = nullptr);

/// Same as draw_trees(Walk, ...) with a prebuilt sampler.
std::vector<SpanningTree> draw_walk_trees(const WalkSampler& sampler, std::size_t count, std::uint64_t seed,
                                          std::size_t jobs = 1);

inline constexpr std::uint64_t kSetupStream = ~std::uint64_t{0};

}  // namespace rst
