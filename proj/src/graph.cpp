#include "rst/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "rst/errors.hpp"

namespace rst {

namespace {

std::pair<Vertex, Vertex> ordered(Vertex a, Vertex b) {
    return a < b ? std::pair{a, b} : std::pair{b, a};
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

bool parse_size(std::string_view s, std::size_t& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

bool parse_real(std::string_view s, double& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace

WeightedGraph::WeightedGraph(std::size_t num_vertices, std::vector<Edge> edges)
    : n_(num_vertices), edges_(std::move(edges)) {
    std::set<std::pair<Vertex, Vertex>> seen;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const Edge& e = edges_[i];
        const std::string where = "edge " + std::to_string(i) + ": ";
        if (e.u >= n_ || e.v >= n_) throw InvalidArgument(where + "vertex index out of range");
        if (e.u == e.v) throw InvalidArgument(where + "self-loop");
        if (!(e.w >= 0.0) || !std::isfinite(e.w)) throw InvalidArgument(where + "weight must be finite and nonnegative");
        if (!seen.insert(ordered(e.u, e.v)).second) throw InvalidArgument(where + "duplicate vertex pair");
    }
}

WeightedGraph WeightedGraph::scaled(double factor) const {
    if (!(factor > 0.0)) throw InvalidArgument("scale factor must be positive");
    std::vector<Edge> out = edges_;
    for (Edge& e : out) e.w *= factor;
    return WeightedGraph(n_, std::move(out));
}

WeightedGraph parse_graph(std::string_view text) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool have_header = false;
    std::size_t n = 0, m = 0;
    std::vector<Edge> edges;
    std::set<std::pair<Vertex, Vertex>> seen;

    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;

        auto fields = split_fields(line);
        if (fields.empty()) {
            if (end == text.size()) break;
            continue;
        }
        if (!have_header) {
            if (fields.size() != 2 || !parse_size(fields[0], n) || !parse_size(fields[1], m)) {
                throw ParseError(ParseErrorKind::Malformed, line_no, "expected header \"n m\"");
            }
            have_header = true;
            edges.reserve(m);
        } else {
            if (edges.size() == m) {
                throw ParseError(ParseErrorKind::EdgeCountMismatch, line_no,
                                 "more edge lines than the declared " + std::to_string(m));
            }
            Edge e;
            if (fields.size() != 3 || !parse_size(fields[0], e.u) || !parse_size(fields[1], e.v) ||
                !parse_real(fields[2], e.w)) {
                throw ParseError(ParseErrorKind::Malformed, line_no, "expected \"u v w\"");
            }
            if (e.u >= n || e.v >= n) {
                throw ParseError(ParseErrorKind::VertexOutOfRange, line_no,
                                 "vertex index out of range for n = " + std::to_string(n));
            }
            if (e.u == e.v) throw ParseError(ParseErrorKind::SelfLoop, line_no, "self-loop");
            if (e.w < 0.0) throw ParseError(ParseErrorKind::NegativeWeight, line_no, "negative weight");
            if (!seen.insert(ordered(e.u, e.v)).second) {
                throw ParseError(ParseErrorKind::DuplicateEdge, line_no, "duplicate vertex pair");
            }
            edges.push_back(e);
        }
        if (end == text.size()) break;
    }
    if (!have_header) throw ParseError(ParseErrorKind::Malformed, line_no, "missing header");
    if (edges.size() != m) {
        throw ParseError(ParseErrorKind::EdgeCountMismatch, line_no,
                         "declared " + std::to_string(m) + " edges, found " + std::to_string(edges.size()));
    }
    return WeightedGraph(n, std::move(edges));
}

WeightedGraph read_graph_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open graph file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_graph(buf.str());
}

std::string serialize_graph(const WeightedGraph& g) {
    std::string out = std::to_string(g.num_vertices()) + " " + std::to_string(g.num_edges()) + "\n";
    char buf[64];
    for (const Edge& e : g.edges()) {
        std::snprintf(buf, sizeof buf, "%.17g", e.w);
        out += std::to_string(e.u) + " " + std::to_string(e.v) + " " + buf + "\n";
    }
    return out;
}

Eigen::MatrixXd laplacian(const WeightedGraph& g) {
    const auto n = static_cast<Eigen::Index>(g.num_vertices());
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for (const Edge& e : g.edges()) {
        const auto u = static_cast<Eigen::Index>(e.u);
        const auto v = static_cast<Eigen::Index>(e.v);
        L(u, u) += e.w;
        L(v, v) += e.w;
        L(u, v) -= e.w;
        L(v, u) -= e.w;
    }
    return L;
}

double quadratic_form(const WeightedGraph& g, std::span<const double> x) {
    if (x.size() != g.num_vertices()) throw InvalidArgument("vector length must equal vertex count");
    double sum = 0.0;
    for (const Edge& e : g.edges()) {
        const double d = x[e.u] - x[e.v];
        sum += e.w * d * d;
    }
    return sum;
}

bool is_connected(const WeightedGraph& g, bool positive_only) {
    if (g.num_vertices() == 0) return false;
    DisjointSets sets(g.num_vertices());
    for (const Edge& e : g.edges()) {
        if (positive_only && !(e.w > 0.0)) continue;
        sets.unite(e.u, e.v);
    }
    return sets.components() == 1;
}

bool is_spanning_tree(const WeightedGraph& g, std::span<const EdgeId> edge_ids) {
    const std::size_t n = g.num_vertices();
    if (n == 0 || edge_ids.size() != n - 1) return false;
    DisjointSets sets(n);
    for (EdgeId e : edge_ids) {
        if (e >= g.num_edges()) return false;
        if (!sets.unite(g.edge(e).u, g.edge(e).v)) return false;
    }
    return sets.components() == 1;
}

double weight_product(const WeightedGraph& g, const SpanningTree& t) {
    if (!is_spanning_tree(g, t.edge_ids)) throw InvalidArgument("not a spanning tree of the graph");
    double product = 1.0;
    for (EdgeId e : t.edge_ids) product *= g.edge(e).w;
    return product;
}

std::string format_tree(const SpanningTree& t) {
    std::string out;
    for (std::size_t i = 0; i < t.edge_ids.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(t.edge_ids[i]);
    }
    return out;
}

SpanningTree parse_tree(std::string_view line) {
    SpanningTree t;
    for (std::string_view field : split_fields(line)) {
        std::size_t id = 0;
        if (!parse_size(field, id)) throw InvalidArgument("malformed edge id in tree: " + std::string(field));
        t.edge_ids.push_back(id);
    }
    std::sort(t.edge_ids.begin(), t.edge_ids.end());
    return t;
}

void DisjointSets::reset(std::size_t n) {
    parent_.resize(n);
    for (std::size_t i = 0; i < n; ++i) parent_[i] = i;
    components_ = n;
}

std::size_t DisjointSets::find(std::size_t x) {
    while (parent_[x] != x) {
        parent_[x] = parent_[parent_[x]];
        x = parent_[x];
    }
    return x;
}

bool DisjointSets::unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[a] = b;
    --components_;
    return true;
}

}  // namespace rst
