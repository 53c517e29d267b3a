#pragma once

#include <cstddef>

#include "rst/graph.hpp"
#include "rst/random.hpp"

namespace rst {

/// Connected simple graph with exactly m edges: a random recursive tree on a
/// shuffled vertex order plus m - (n-1) distinct extra pairs. Weights are
/// uniform in [wmin, wmax]. Requires n-1 <= m <= n(n-1)/2.
WeightedGraph random_connected_graph(std::size_t n, std::size_t m, double wmin, double wmax, Rng& rng);

/// Connected graph with n vertices where each non-tree pair is kept with
/// probability p.
WeightedGraph random_connected_graph_p(std::size_t n, double p, double wmin, double wmax, Rng& rng);

/// Small family for distribution tests: n uniform in [2, max_n], p = 1/2.
WeightedGraph random_small_graph(std::size_t max_n, double wmin, double wmax, Rng& rng);

/// Complete graph with unit weights.
WeightedGraph complete_graph(std::size_t n);

}  // namespace rst
