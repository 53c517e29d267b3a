#include "rst/generators.hpp"

#include <algorithm>
#include <numeric>

#include "rst/errors.hpp"

namespace rst {

namespace {

double draw_weight(double wmin, double wmax, Rng& rng) {
    return wmin + (wmax - wmin) * uniform01(rng);
}

void check_weights(double wmin, double wmax) {
    if (!(wmin >= 0.0) || !(wmax >= wmin)) throw InvalidArgument("weight range must satisfy 0 <= wmin <= wmax");
}

// Random recursive tree on a shuffled vertex order, as adjacency flags.
std::vector<char> random_tree(std::size_t n, Rng& rng) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[uniform_index(rng, i)]);
    std::vector<char> adj(n * n, 0);
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t a = order[i];
        const std::size_t b = order[uniform_index(rng, i)];
        adj[a * n + b] = adj[b * n + a] = 1;
    }
    return adj;
}

WeightedGraph from_flags(std::size_t n, const std::vector<char>& adj, double wmin, double wmax, Rng& rng) {
    std::vector<Edge> edges;
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
            if (adj[u * n + v]) edges.push_back({u, v, 0.0});
        }
    }
    for (auto& e : edges) e.w = draw_weight(wmin, wmax, rng);
    return WeightedGraph(n, std::move(edges));
}

}  // namespace

WeightedGraph random_connected_graph(std::size_t n, std::size_t m, double wmin, double wmax, Rng& rng) {
    if (n == 0) throw InvalidArgument("graph needs at least one vertex");
    check_weights(wmin, wmax);
    const std::size_t max_m = n * (n - 1) / 2;
    if (m + 1 < n || m > max_m) throw InvalidArgument("edge count incompatible with a connected simple graph");
    std::vector<char> adj = random_tree(n, rng);
    std::vector<std::size_t> free_pairs;
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
            if (!adj[u * n + v]) free_pairs.push_back(u * n + v);
        }
    }
    const std::size_t extra = m - (n - 1);
    // Partial Fisher-Yates picks `extra` distinct pairs.
    for (std::size_t i = 0; i < extra; ++i) {
        const std::size_t j = i + uniform_index(rng, free_pairs.size() - i);
        std::swap(free_pairs[i], free_pairs[j]);
        const std::size_t u = free_pairs[i] / n, v = free_pairs[i] % n;
        adj[u * n + v] = adj[v * n + u] = 1;
    }
    return from_flags(n, adj, wmin, wmax, rng);
}

WeightedGraph random_connected_graph_p(std::size_t n, double p, double wmin, double wmax, Rng& rng) {
    if (n == 0) throw InvalidArgument("graph needs at least one vertex");
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("edge probability must lie in [0, 1]");
    check_weights(wmin, wmax);
    std::vector<char> adj = random_tree(n, rng);
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
            if (!adj[u * n + v] && uniform01(rng) < p) adj[u * n + v] = adj[v * n + u] = 1;
        }
    }
    return from_flags(n, adj, wmin, wmax, rng);
}

WeightedGraph random_small_graph(std::size_t max_n, double wmin, double wmax, Rng& rng) {
    if (max_n < 2) throw InvalidArgument("small graph family needs max_n >= 2");
    const std::size_t n = 2 + uniform_index(rng, max_n - 1);
    return random_connected_graph_p(n, 0.5, wmin, wmax, rng);
}

WeightedGraph complete_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) edges.push_back({u, v, 1.0});
    }
    return WeightedGraph(n, std::move(edges));
}

}  // namespace rst
