#include "rst/gadget.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "rst/errors.hpp"
#include "rst/exact_samplers.hpp"

namespace rst {

SearchMatrix::SearchMatrix(std::size_t cols, std::vector<std::size_t> one_column)
    : cols_(cols), one_(std::move(one_column)) {
    if (cols_ == 0 || one_.empty()) throw InvalidArgument("search matrix needs at least one row and one column");
    for (std::size_t c : one_) {
        if (c >= cols_) throw InvalidArgument("search matrix column out of range");
    }
}

SearchMatrix SearchMatrix::identity(std::size_t n) {
    std::vector<std::size_t> one(n);
    for (std::size_t i = 0; i < n; ++i) one[i] = i;
    return SearchMatrix(n, std::move(one));
}

SearchMatrix SearchMatrix::from_dense(const std::vector<std::vector<int>>& entries) {
    if (entries.empty() || entries.front().empty()) throw InvalidArgument("empty search matrix");
    const std::size_t cols = entries.front().size();
    std::vector<std::size_t> one;
    for (std::size_t r = 0; r < entries.size(); ++r) {
        if (entries[r].size() != cols) throw InvalidArgument("ragged search matrix");
        std::size_t ones = 0, where = 0;
        for (std::size_t c = 0; c < cols; ++c) {
            const int x = entries[r][c];
            if (x != 0 && x != 1) throw InvalidArgument("search matrix entries must be 0 or 1");
            if (x == 1) {
                ++ones;
                where = c;
            }
        }
        if (ones != 1) {
            throw InvalidArgument("row " + std::to_string(r) + " of the search matrix must contain exactly one 1");
        }
        one.push_back(where);
    }
    return SearchMatrix(cols, std::move(one));
}

int SearchMatrix::entry(std::size_t row, std::size_t col) const {
    if (col >= cols_) throw InvalidArgument("search matrix column out of range");
    return one_.at(row) == col ? 1 : 0;
}

SearchMatrix parse_search_matrix(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::size_t rows = 0, cols = 0;
    if (!(in >> rows >> cols)) throw InvalidArgument("search matrix header must be \"rows cols\"");
    std::vector<std::vector<int>> dense(rows, std::vector<int>(cols));
    for (auto& row : dense) {
        for (int& x : row) {
            if (!(in >> x)) throw InvalidArgument("search matrix has too few entries");
        }
    }
    std::string extra;
    if (in >> extra) throw InvalidArgument("search matrix has trailing content");
    return SearchMatrix::from_dense(dense);
}

std::string format_search_matrix(const SearchMatrix& m) {
    std::string out = std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c) out += ' ';
            out += m.entry(r, c) ? '1' : '0';
        }
        out += '\n';
    }
    return out;
}

WeightedGraph build_gadget(const SearchMatrix& m, bool refined) {
    const std::size_t n = m.rows();
    const std::size_t k = m.cols();
    if (n == 0 || k == 0) throw InvalidArgument("gadget needs a nonempty search matrix");
    const double low = refined ? 1.0 / std::pow(static_cast<double>(n), 4) : 0.0;
    std::vector<Edge> edges;
    edges.reserve(k + n * k);
    for (std::size_t i = 0; i < k; ++i) edges.push_back({0, 1 + i, 1.0});
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < k; ++i) edges.push_back({1 + i, 1 + k + j, m.entry(j, i) ? 1.0 : low});
    }
    return WeightedGraph(1 + k + n, std::move(edges));
}

EdgeId gadget_matrix_edge(const SearchMatrix& m, std::size_t row, std::size_t col) {
    return m.cols() + row * m.cols() + col;
}

SpanningTree planted_tree(const SearchMatrix& m) {
    SpanningTree t;
    for (std::size_t i = 0; i < m.cols(); ++i) t.edge_ids.push_back(i);
    for (std::size_t j = 0; j < m.rows(); ++j) t.edge_ids.push_back(gadget_matrix_edge(m, j, m.one_in_row(j)));
    return t;
}

SearchMatrix recover_matrix(const SpanningTree& t, std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) throw InvalidArgument("gadget needs a nonempty search matrix");
    if (t.edge_ids.size() != rows + cols) throw RecoveryError("tree has the wrong number of edges for this gadget");
    std::vector<std::size_t> degree(rows, 0), neighbour(rows, 0);
    const std::size_t m = cols + rows * cols;
    for (EdgeId e : t.edge_ids) {
        if (e >= m) throw RecoveryError("tree edge " + std::to_string(e) + " is not a gadget edge");
        if (e < cols) continue;
        const std::size_t j = (e - cols) / cols;
        const std::size_t i = (e - cols) % cols;
        ++degree[j];
        neighbour[j] = i;
    }
    for (std::size_t j = 0; j < rows; ++j) {
        if (degree[j] != 1) {
            throw RecoveryError("vertex r_" + std::to_string(j + 1) + " has tree degree " + std::to_string(degree[j]));
        }
    }
    return SearchMatrix(cols, std::move(neighbour));
}

std::vector<SearchMatrix> all_search_matrices(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) throw InvalidArgument("gadget needs a nonempty search matrix");
    std::vector<SearchMatrix> out;
    std::vector<std::size_t> digits(rows, 0);
    while (true) {
        out.emplace_back(cols, digits);
        std::size_t pos = rows;
        while (pos > 0 && ++digits[pos - 1] == cols) digits[--pos] = 0;
        if (pos == 0) break;
    }
    return out;
}

SearchMatrix random_search_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
    if (rows == 0 || cols == 0) throw InvalidArgument("gadget needs a nonempty search matrix");
    std::vector<std::size_t> one(rows);
    for (auto& c : one) c = uniform_index(rng, cols);
    return SearchMatrix(cols, std::move(one));
}

double refined_recovery_probability(const SearchMatrix& m) {
    return 1.0 / count_weighted_trees(build_gadget(m, true));
}

}  // namespace rst
