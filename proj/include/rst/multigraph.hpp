#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "rst/graph.hpp"

namespace rst {

/// One parallel copy (e, j) of base edge e; j is 1-based.
struct LabeledEdge {
    EdgeId e = 0;
    std::uint32_t j = 1;

    friend bool operator==(const LabeledEdge&, const LabeledEdge&) = default;
    friend auto operator<=>(const LabeledEdge&, const LabeledEdge&) = default;
};

using LabeledTree = std::vector<LabeledEdge>;

struct EdgeCopy {
    Vertex u = 0;
    Vertex v = 0;
    double w = 0.0;
    LabeledEdge label;
};

/// Multigraph on the base vertex set whose edges are labeled copies of base
/// edges. Copy weights of one base edge are expected to sum to at most w_e.
class MultigraphView {
public:
    MultigraphView() = default;
    MultigraphView(std::size_t num_vertices, std::vector<EdgeCopy> copies);

    std::size_t num_vertices() const noexcept { return n_; }
    std::size_t num_copies() const noexcept { return copies_.size(); }
    const std::vector<EdgeCopy>& copies() const noexcept { return copies_; }
    const EdgeCopy& copy(std::size_t i) const { return copies_.at(i); }

private:
    std::size_t n_ = 0;
    std::vector<EdgeCopy> copies_;
};

/// Every edge of `g` as the single copy (e, 1) with weight w_e.
MultigraphView as_multigraph(const WeightedGraph& g);

Eigen::MatrixXd laplacian(const MultigraphView& h);
bool is_connected(const MultigraphView& h, bool positive_only);

/// Drops copy labels. Throws InvalidArgument if two copies of one base edge
/// appear (they would close a 2-cycle, so the input was not a tree).
SpanningTree strip_labels(const LabeledTree& t);

}  // namespace rst
