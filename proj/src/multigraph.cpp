#include "rst/multigraph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rst/errors.hpp"

namespace rst {

MultigraphView::MultigraphView(std::size_t num_vertices, std::vector<EdgeCopy> copies)
    : n_(num_vertices), copies_(std::move(copies)) {
    for (const EdgeCopy& c : copies_) {
        if (c.u >= n_ || c.v >= n_) throw InvalidArgument("copy endpoint out of range");
        if (c.u == c.v) throw InvalidArgument("copy is a self-loop");
        if (!(c.w >= 0.0) || !std::isfinite(c.w)) throw InvalidArgument("copy weight must be finite and nonnegative");
        if (c.label.j == 0) throw InvalidArgument("copy index is 1-based");
    }
}

MultigraphView as_multigraph(const WeightedGraph& g) {
    std::vector<EdgeCopy> copies;
    copies.reserve(g.num_edges());
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
        const Edge& edge = g.edge(e);
        copies.push_back({edge.u, edge.v, edge.w, {e, 1}});
    }
    return MultigraphView(g.num_vertices(), std::move(copies));
}

Eigen::MatrixXd laplacian(const MultigraphView& h) {
    const auto n = static_cast<Eigen::Index>(h.num_vertices());
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for (const EdgeCopy& c : h.copies()) {
        const auto u = static_cast<Eigen::Index>(c.u);
        const auto v = static_cast<Eigen::Index>(c.v);
        L(u, u) += c.w;
        L(v, v) += c.w;
        L(u, v) -= c.w;
        L(v, u) -= c.w;
    }
    return L;
}

bool is_connected(const MultigraphView& h, bool positive_only) {
    if (h.num_vertices() == 0) return false;
    DisjointSets sets(h.num_vertices());
    for (const EdgeCopy& c : h.copies()) {
        if (positive_only && !(c.w > 0.0)) continue;
        sets.unite(c.u, c.v);
    }
    return sets.components() == 1;
}

SpanningTree strip_labels(const LabeledTree& t) {
    SpanningTree out;
    out.edge_ids.reserve(t.size());
    for (const LabeledEdge& l : t) out.edge_ids.push_back(l.e);
    std::sort(out.edge_ids.begin(), out.edge_ids.end());
    if (std::adjacent_find(out.edge_ids.begin(), out.edge_ids.end()) != out.edge_ids.end()) {
        throw InvalidArgument("labeled tree holds two copies of one edge");
    }
    return out;
}

}  // namespace rst
