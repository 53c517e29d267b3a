#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "rst/graph.hpp"
#include "rst/ledger.hpp"
#include "rst/multigraph.hpp"
#include "rst/random.hpp"

namespace rst {

struct OracleOptions {
    /// Graphs with more vertices than this use iterative solves instead of a
    /// dense pseudoinverse.
    std::size_t dense_limit = 2000;
    /// Relative residual target of the preconditioned CG solves.
    double cg_tolerance = 1e-10;
    /// 0 selects 10 n.
    std::size_t cg_max_iterations = 0;
    QueryLedger* ledger = nullptr;
};

/// Effective-resistance oracle over a fixed graph.
///
/// Exact mode answers (d_a - d_b)^T L^+ (d_a - d_b). Sketch(eps) mode holds
/// Z = Q W^{1/2} B L^+ with p = ceil(24 ln n / eps'^2) rows of +-1/sqrt(p)
/// entries, eps' = eps / 3, and answers ||Z (d_a - d_b)||^2 / (1 - eps'), so
/// that R <= answer <= (1 + eps) R whenever the sketch is eps'-accurate.
/// Immutable after construction; concurrent queries are safe.
class ResistanceOracle {
public:
    enum class Mode { Exact, Sketch };

    Mode mode() const noexcept { return mode_; }
    /// 0 for exact oracles.
    double epsilon() const noexcept { return epsilon_; }
    std::size_t num_vertices() const noexcept { return n_; }
    /// Sketch height p; 0 for exact oracles.
    std::size_t sketch_rows() const noexcept { return static_cast<std::size_t>(sketch_.rows()); }

    double query(Vertex a, Vertex b) const;

private:
    friend ResistanceOracle build_exact_from_laplacian(const Eigen::MatrixXd&, const OracleOptions&);
    friend ResistanceOracle build_sketch_oracle(const WeightedGraph&, double, Rng&, const OracleOptions&);

    double solve_difference(Vertex a, Vertex b) const;

    Mode mode_ = Mode::Exact;
    double epsilon_ = 0.0;
    std::size_t n_ = 0;
    Eigen::MatrixXd pinv_;                          // dense exact
    std::shared_ptr<const Eigen::SparseMatrix<double>> sparse_laplacian_;  // iterative exact
    double cg_tolerance_ = 1e-10;
    std::size_t cg_max_iterations_ = 0;
    Eigen::MatrixXd sketch_;                        // p x n, columns contiguous
    double sketch_scale_ = 1.0;
    QueryLedger* ledger_ = nullptr;
};

/// Sketch height for accuracy eps' (natural log).
std::size_t sketch_rows_for(std::size_t n, double eps_prime);

ResistanceOracle build_exact_oracle(const WeightedGraph& g, const OracleOptions& opts = {});
ResistanceOracle build_exact_oracle(const MultigraphView& h, const OracleOptions& opts = {});
ResistanceOracle build_exact_from_laplacian(const Eigen::MatrixXd& laplacian, const OracleOptions& opts);

/// eps must lie in (0, 1/3). Charges sqrt(mn)/eps to Phase::ResistanceInit.
ResistanceOracle build_sketch_oracle(const WeightedGraph& g, double eps, Rng& rng,
                                     const OracleOptions& opts = {});

/// Dense Moore-Penrose pseudoinverse of a connected graph's Laplacian.
Eigen::MatrixXd laplacian_pseudoinverse(const Eigen::MatrixXd& laplacian);

/// Leverage-score overestimates w_e * R~_e; zero-weight edges get 0.
struct LeverageVector {
    std::vector<double> values;
    double lambda = 0.0;  // sum of values
};

LeverageVector leverage_scores(const WeightedGraph& g, const ResistanceOracle& oracle);

/// Spanning tree maximizing the weight product: Kruskal on descending
/// log-weight keys over positive edges, ties by smallest edge id. Charges
/// sqrt(mn) to Phase::MaxProductTree.
SpanningTree max_product_spanning_tree(const WeightedGraph& g, QueryLedger* ledger = nullptr);

}  // namespace rst
