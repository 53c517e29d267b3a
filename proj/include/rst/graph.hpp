#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace rst {

using Vertex = std::size_t;
using EdgeId = std::size_t;

struct Edge {
    Vertex u = 0;
    Vertex v = 0;
    double w = 0.0;
};

/// Simple undirected graph with nonnegative weights. Edge ids are positions in
/// the edge list; zero weights are allowed and keep their ids.
class WeightedGraph {
public:
    WeightedGraph() = default;

    /// Validates the invariants (no self-loops, no duplicate pairs, w >= 0,
    /// endpoints in range) and throws InvalidArgument otherwise.
    WeightedGraph(std::size_t num_vertices, std::vector<Edge> edges);

    std::size_t num_vertices() const noexcept { return n_; }
    std::size_t num_edges() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const Edge& edge(EdgeId e) const { return edges_.at(e); }

    /// Copy with every weight multiplied by `factor`.
    WeightedGraph scaled(double factor) const;

private:
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
};

/// Unlabeled spanning tree as a sorted list of edge ids.
struct SpanningTree {
    std::vector<EdgeId> edge_ids;

    friend bool operator==(const SpanningTree&, const SpanningTree&) = default;
    friend auto operator<=>(const SpanningTree&, const SpanningTree&) = default;
};

/// Parses the "n m" header followed by m lines "u v w". Blank lines are
/// skipped but still counted for error line numbers.
WeightedGraph parse_graph(std::string_view text);
WeightedGraph read_graph_file(const std::string& path);

/// Inverse of parse_graph; weights use 17 significant digits.
std::string serialize_graph(const WeightedGraph& g);

Eigen::MatrixXd laplacian(const WeightedGraph& g);

/// x^T L x evaluated edge by edge, without forming L.
double quadratic_form(const WeightedGraph& g, std::span<const double> x);

bool is_connected(const WeightedGraph& g, bool positive_only);

/// True iff `edge_ids` names n-1 distinct edges forming a spanning tree.
bool is_spanning_tree(const WeightedGraph& g, std::span<const EdgeId> edge_ids);

/// Product of the tree's edge weights. Throws InvalidArgument when `t` is not
/// a spanning tree of `g`.
double weight_product(const WeightedGraph& g, const SpanningTree& t);

/// Writes sorted edge ids separated by single spaces.
std::string format_tree(const SpanningTree& t);
SpanningTree parse_tree(std::string_view line);

/// Plain union-find over 0..n-1 with path halving.
class DisjointSets {
public:
    explicit DisjointSets(std::size_t n = 0) { reset(n); }

    void reset(std::size_t n);
    std::size_t find(std::size_t x);
    /// Returns false when already joined.
    bool unite(std::size_t a, std::size_t b);
    std::size_t components() const noexcept { return components_; }

private:
    std::vector<std::size_t> parent_;
    std::size_t components_ = 0;
};

}  // namespace rst
