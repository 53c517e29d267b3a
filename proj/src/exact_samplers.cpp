#include "rst/exact_samplers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "rst/errors.hpp"

namespace rst {

namespace {

// Vose alias table over ws.scaled[begin, end); writes alias_prob/alias_slot
// at the same positions.
void build_alias(WilsonWorkspace& ws, std::size_t begin, std::size_t end) {
    const std::size_t deg = end - begin;
    double total = 0.0;
    for (std::size_t i = begin; i < end; ++i) total += ws.scaled[i];
    ws.small.clear();
    ws.large.clear();
    for (std::size_t i = begin; i < end; ++i) {
        ws.scaled[i] = ws.scaled[i] * static_cast<double>(deg) / total;
        (ws.scaled[i] < 1.0 ? ws.small : ws.large).push_back(i);
    }
    while (!ws.small.empty() && !ws.large.empty()) {
        const std::size_t s = ws.small.back();
        ws.small.pop_back();
        const std::size_t l = ws.large.back();
        ws.alias_prob[s] = ws.scaled[s];
        ws.alias_slot[s] = static_cast<std::uint32_t>(l - begin);
        ws.scaled[l] = (ws.scaled[l] + ws.scaled[s]) - 1.0;
        if (ws.scaled[l] < 1.0) {
            ws.large.pop_back();
            ws.small.push_back(l);
        }
    }
    for (std::size_t i : ws.large) {
        ws.alias_prob[i] = 1.0;
        ws.alias_slot[i] = static_cast<std::uint32_t>(i - begin);
    }
    for (std::size_t i : ws.small) {
        ws.alias_prob[i] = 1.0;
        ws.alias_slot[i] = static_cast<std::uint32_t>(i - begin);
    }
}

std::size_t draw_incident(const WilsonWorkspace& ws, std::size_t v, Rng& rng) {
    const std::size_t begin = ws.offsets[v];
    const std::size_t deg = ws.offsets[v + 1] - begin;
    const std::size_t slot = begin + uniform_index(rng, deg);
    const std::size_t pick = uniform01(rng) < ws.alias_prob[slot] ? slot : begin + ws.alias_slot[slot];
    return ws.incident[pick];
}

struct Adjacency {
    std::vector<std::size_t> offsets;
    std::vector<std::size_t> edge;   // edge id
    std::vector<Vertex> other;
    std::vector<double> cumulative;  // running weight within a vertex
};

Adjacency positive_adjacency(const WeightedGraph& g) {
    Adjacency adj;
    const std::size_t n = g.num_vertices();
    adj.offsets.assign(n + 1, 0);
    for (const Edge& e : g.edges()) {
        if (e.w > 0.0) {
            ++adj.offsets[e.u + 1];
            ++adj.offsets[e.v + 1];
        }
    }
    for (std::size_t v = 0; v < n; ++v) adj.offsets[v + 1] += adj.offsets[v];
    adj.edge.resize(adj.offsets[n]);
    adj.other.resize(adj.offsets[n]);
    adj.cumulative.resize(adj.offsets[n]);
    std::vector<std::size_t> fill(adj.offsets.begin(), adj.offsets.end() - 1);
    for (EdgeId id = 0; id < g.num_edges(); ++id) {
        const Edge& e = g.edge(id);
        if (!(e.w > 0.0)) continue;
        adj.edge[fill[e.u]] = id;
        adj.other[fill[e.u]] = e.v;
        adj.cumulative[fill[e.u]++] = e.w;
        adj.edge[fill[e.v]] = id;
        adj.other[fill[e.v]] = e.u;
        adj.cumulative[fill[e.v]++] = e.w;
    }
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t i = adj.offsets[v] + 1; i < adj.offsets[v + 1]; ++i) adj.cumulative[i] += adj.cumulative[i - 1];
    }
    return adj;
}

double cofactor_determinant(const Eigen::MatrixXd& L) {
    const auto n = L.rows();
    if (n <= 1) return 1.0;
    const Eigen::MatrixXd minor = L.bottomRightCorner(n - 1, n - 1);
    return minor.fullPivLu().determinant();
}

struct SupportEdge {
    Vertex u, v;
    double w;
};

// Depth-first deletion/contraction over the support edges, including an edge
// before excluding it so trees come out in lexicographic order.
void enumerate_support(std::size_t n, const std::vector<SupportEdge>& edges,
                       const std::function<void(const std::vector<std::size_t>&, double)>& emit) {
    std::vector<std::size_t> chosen;
    chosen.reserve(n);
    std::function<void(std::size_t, DisjointSets&, double)> recurse = [&](std::size_t i, DisjointSets& sets,
                                                                          double weight) {
        if (sets.components() == 1) {
            emit(chosen, weight);
            return;
        }
        if (i == edges.size()) return;
        // Prune when the remaining edges cannot finish a spanning tree.
        DisjointSets probe = sets;
        for (std::size_t r = i; r < edges.size() && probe.components() > 1; ++r) probe.unite(edges[r].u, edges[r].v);
        if (probe.components() != 1) return;

        const SupportEdge& e = edges[i];
        if (sets.find(e.u) != sets.find(e.v)) {
            DisjointSets with = sets;
            with.unite(e.u, e.v);
            chosen.push_back(i);
            recurse(i + 1, with, weight * e.w);
            chosen.pop_back();
        }
        recurse(i + 1, sets, weight);
    };
    DisjointSets sets(n);
    recurse(0, sets, 1.0);
}

}  // namespace

std::vector<std::size_t> wilson_sample_copies(const MultigraphView& h, Rng& rng, WilsonWorkspace& ws) {
    return wilson_sample_copies(h.num_vertices(), h.copies(), rng, ws);
}

std::vector<std::size_t> wilson_sample_copies(std::size_t n, std::span<const EdgeCopy> copies, Rng& rng,
                                              WilsonWorkspace& ws) {
    if (n == 0) throw DisconnectedGraph("empty graph has no spanning tree");

    ws.sets.reset(n);
    ws.offsets.assign(n + 1, 0);
    for (const EdgeCopy& c : copies) {
        if (c.w > 0.0) {
            ++ws.offsets[c.u + 1];
            ++ws.offsets[c.v + 1];
            ws.sets.unite(c.u, c.v);
        }
    }
    if (ws.sets.components() != 1) throw DisconnectedGraph("multigraph is not connected on positive copies");
    for (std::size_t v = 0; v < n; ++v) ws.offsets[v + 1] += ws.offsets[v];
    const std::size_t slots = ws.offsets[n];
    ws.incident.resize(slots);
    ws.scaled.resize(slots);
    ws.alias_prob.resize(slots);
    ws.alias_slot.resize(slots);
    ws.next_copy.assign(n, 0);
    // next_copy doubles as the fill cursor while grouping copies by vertex.
    for (std::size_t v = 0; v < n; ++v) ws.next_copy[v] = ws.offsets[v];
    for (std::size_t i = 0; i < copies.size(); ++i) {
        const EdgeCopy& c = copies[i];
        if (!(c.w > 0.0)) continue;
        ws.incident[ws.next_copy[c.u]] = i;
        ws.scaled[ws.next_copy[c.u]++] = c.w;
        ws.incident[ws.next_copy[c.v]] = i;
        ws.scaled[ws.next_copy[c.v]++] = c.w;
    }
    for (std::size_t v = 0; v < n; ++v) build_alias(ws, ws.offsets[v], ws.offsets[v + 1]);

    ws.in_tree.assign(n, 0);
    ws.in_tree[0] = 1;
    std::vector<std::size_t> tree;
    tree.reserve(n - 1);
    for (std::size_t start = 1; start < n; ++start) {
        Vertex u = start;
        while (!ws.in_tree[u]) {
            const std::size_t c = draw_incident(ws, u, rng);
            ws.next_copy[u] = c;
            u = copies[c].u == u ? copies[c].v : copies[c].u;
        }
        u = start;
        while (!ws.in_tree[u]) {
            ws.in_tree[u] = 1;
            const std::size_t c = ws.next_copy[u];
            tree.push_back(c);
            u = copies[c].u == u ? copies[c].v : copies[c].u;
        }
    }
    std::sort(tree.begin(), tree.end());
    return tree;
}

LabeledTree wilson_sample(const MultigraphView& h, Rng& rng) {
    WilsonWorkspace ws;
    const auto copies = wilson_sample_copies(h, rng, ws);
    LabeledTree out;
    out.reserve(copies.size());
    for (std::size_t c : copies) out.push_back(h.copy(c).label);
    std::sort(out.begin(), out.end());
    return out;
}

SpanningTree wilson_sample(const WeightedGraph& g, Rng& rng) {
    return strip_labels(wilson_sample(as_multigraph(g), rng));
}

SpanningTree aldous_broder_sample(const WeightedGraph& g, Rng& rng) {
    const std::size_t n = g.num_vertices();
    if (!is_connected(g, true)) throw DisconnectedGraph("graph is not connected on positive-weight edges");
    const Adjacency adj = positive_adjacency(g);
    std::vector<char> visited(n, 0);
    SpanningTree t;
    t.edge_ids.reserve(n - 1);
    Vertex u = 0;
    visited[0] = 1;
    std::size_t seen = 1;
    while (seen < n) {
        const std::size_t begin = adj.offsets[u];
        const std::size_t end = adj.offsets[u + 1];
        const double target = uniform01(rng) * adj.cumulative[end - 1];
        std::size_t pick = static_cast<std::size_t>(
            std::upper_bound(adj.cumulative.begin() + static_cast<std::ptrdiff_t>(begin),
                             adj.cumulative.begin() + static_cast<std::ptrdiff_t>(end), target) -
            adj.cumulative.begin());
        if (pick >= end) pick = end - 1;
        const Vertex next = adj.other[pick];
        if (!visited[next]) {
            visited[next] = 1;
            ++seen;
            t.edge_ids.push_back(adj.edge[pick]);
        }
        u = next;
    }
    std::sort(t.edge_ids.begin(), t.edge_ids.end());
    return t;
}

double count_weighted_trees(const WeightedGraph& g) {
    if (!is_connected(g, true)) return 0.0;
    return cofactor_determinant(laplacian(g));
}

double count_weighted_trees(const MultigraphView& h) {
    if (!is_connected(h, true)) return 0.0;
    return cofactor_determinant(laplacian(h));
}

double count_support_trees(const WeightedGraph& g) {
    if (!is_connected(g, true)) return 0.0;
    std::vector<Edge> unit;
    for (const Edge& e : g.edges())
        if (e.w > 0.0) unit.push_back({e.u, e.v, 1.0});
    return std::round(cofactor_determinant(laplacian(WeightedGraph(g.num_vertices(), std::move(unit)))));
}

std::vector<CopyTreeProbability> enumerate_trees(const MultigraphView& h, double limit) {
    if (!is_connected(h, true)) throw DisconnectedGraph("multigraph is not connected on positive copies");
    std::vector<SupportEdge> support;
    std::vector<std::size_t> index;
    std::vector<EdgeCopy> unit;
    for (std::size_t i = 0; i < h.num_copies(); ++i) {
        const EdgeCopy& c = h.copy(i);
        if (!(c.w > 0.0)) continue;
        support.push_back({c.u, c.v, c.w});
        index.push_back(i);
        unit.push_back({c.u, c.v, 1.0, c.label});
    }
    const double count = std::round(count_weighted_trees(MultigraphView(h.num_vertices(), std::move(unit))));
    if (count > limit) {
        throw GuardExceeded("graph has " + std::to_string(count) + " spanning trees, above the enumeration limit");
    }
    std::vector<CopyTreeProbability> out;
    out.reserve(static_cast<std::size_t>(count));
    enumerate_support(h.num_vertices(), support, [&](const std::vector<std::size_t>& chosen, double weight) {
        CopyTreeProbability t;
        t.copies.reserve(chosen.size());
        for (std::size_t c : chosen) t.copies.push_back(index[c]);
        t.weight = weight;
        out.push_back(std::move(t));
    });
    double total = 0.0;
    for (const auto& t : out) total += t.weight;
    for (auto& t : out) t.probability = t.weight / total;
    return out;
}

std::vector<TreeProbability> enumerate_trees(const WeightedGraph& g, double limit) {
    const MultigraphView h = as_multigraph(g);
    std::vector<TreeProbability> out;
    for (auto& t : enumerate_trees(h, limit)) {
        TreeProbability p;
        p.tree.edge_ids = std::move(t.copies);  // copy index == edge id here
        p.weight = t.weight;
        p.probability = t.probability;
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace rst
