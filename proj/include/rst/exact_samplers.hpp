#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rst/graph.hpp"
#include "rst/multigraph.hpp"
#include "rst/random.hpp"

namespace rst {

/// Scratch buffers for repeated Wilson runs; reusing one avoids allocation in
/// the walk's inner loop.
struct WilsonWorkspace {
    std::vector<std::size_t> offsets;
    std::vector<std::size_t> incident;  // copy indices, grouped by vertex
    std::vector<double> alias_prob;
    std::vector<std::uint32_t> alias_slot;
    std::vector<std::size_t> next_copy;
    std::vector<char> in_tree;
    std::vector<std::size_t> small, large;
    std::vector<double> scaled;
    DisjointSets sets;
};

/// Exact sample from W_H via loop-erased random walks rooted at vertex 0.
/// Each walk step picks an incident copy with probability proportional to
/// its weight, which is the same as picking a neighbor by total parallel
/// weight and then a copy by copy weight. Returns indices into h.copies(),
/// sorted. Throws DisconnectedGraph when positive copies do not span.
std::vector<std::size_t> wilson_sample_copies(std::size_t num_vertices, std::span<const EdgeCopy> copies, Rng& rng,
                                              WilsonWorkspace& ws);
std::vector<std::size_t> wilson_sample_copies(const MultigraphView& h, Rng& rng, WilsonWorkspace& ws);

LabeledTree wilson_sample(const MultigraphView& h, Rng& rng);
SpanningTree wilson_sample(const WeightedGraph& g, Rng& rng);

/// First-entrance tree of a weighted random walk started at vertex 0.
SpanningTree aldous_broder_sample(const WeightedGraph& g, Rng& rng);

/// Weighted spanning-tree count (any cofactor of L); 0 when disconnected.
double count_weighted_trees(const WeightedGraph& g);
double count_weighted_trees(const MultigraphView& h);

/// Number of spanning trees of the positive-weight support, ignoring weights.
double count_support_trees(const WeightedGraph& g);

struct TreeProbability {
    SpanningTree tree;
    double weight = 0.0;
    double probability = 0.0;
};

struct CopyTreeProbability {
    std::vector<std::size_t> copies;  // sorted indices into h.copies()
    double weight = 0.0;
    double probability = 0.0;
};

inline constexpr double kEnumerationLimit = 1e6;

/// Every spanning tree of positive weight with its W_G probability, in
/// lexicographic order of sorted edge ids. Trees through a zero-weight edge
/// have probability 0 and are not listed. Throws GuardExceeded when the
/// support has more than `limit` trees, DisconnectedGraph when it has none.
std::vector<TreeProbability> enumerate_trees(const WeightedGraph& g, double limit = kEnumerationLimit);
std::vector<CopyTreeProbability> enumerate_trees(const MultigraphView& h, double limit = kEnumerationLimit);

}  // namespace rst
