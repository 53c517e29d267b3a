#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "rst/graph.hpp"
#include "rst/random.hpp"

namespace rst {

/// n x k 0/1 matrix with exactly one 1 per row, stored as the column of
/// that 1 for each row.
class SearchMatrix {
public:
    SearchMatrix() = default;
    /// Throws InvalidArgument unless rows, cols >= 1 and every column index is
    /// below cols.
    SearchMatrix(std::size_t cols, std::vector<std::size_t> one_column);

    static SearchMatrix identity(std::size_t n);
    /// Validates a dense 0/1 matrix.
    static SearchMatrix from_dense(const std::vector<std::vector<int>>& entries);

    std::size_t rows() const noexcept { return one_.size(); }
    std::size_t cols() const noexcept { return cols_; }
    int entry(std::size_t row, std::size_t col) const;
    std::size_t one_in_row(std::size_t row) const { return one_.at(row); }

    friend bool operator==(const SearchMatrix&, const SearchMatrix&) = default;

private:
    std::size_t cols_ = 0;
    std::vector<std::size_t> one_;
};

/// Text form: header "n k", then n lines of k space-separated 0/1 entries.
SearchMatrix parse_search_matrix(std::string_view text);
std::string format_search_matrix(const SearchMatrix& m);

/// Vertices s = 0, l_i = 1 + i, r_j = 1 + k + j. Star edges (s, l_i) come
/// first with weight 1, then (l_i, r_j) for j-major, i-minor order with
/// weight M_ji. When `refined`, zero entries become 1/n^4.
WeightedGraph build_gadget(const SearchMatrix& m, bool refined);

/// Edge id of (l_col, r_row) in build_gadget's ordering.
EdgeId gadget_matrix_edge(const SearchMatrix& m, std::size_t row, std::size_t col);

/// The star edges plus every weight-1 matrix edge.
SpanningTree planted_tree(const SearchMatrix& m);

/// Reads off the l-neighbour of each r_j. Throws RecoveryError when some r_j
/// does not have exactly one tree edge, or `t` is not a gadget tree.
SearchMatrix recover_matrix(const SpanningTree& t, std::size_t rows, std::size_t cols);

/// All k^n matrices in lexicographic order of the column vector.
std::vector<SearchMatrix> all_search_matrices(std::size_t rows, std::size_t cols);
SearchMatrix random_search_matrix(std::size_t rows, std::size_t cols, Rng& rng);

/// Exact probability that a W_G sample of the refined gadget recovers M:
/// only the planted tree does, and it has weight 1.
double refined_recovery_probability(const SearchMatrix& m);

}  // namespace rst
