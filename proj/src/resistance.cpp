#include "rst/resistance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/IterativeLinearSolvers>

#include "rst/errors.hpp"

namespace rst {

namespace {

bool laplacian_connected(const Eigen::MatrixXd& L) {
    const auto n = static_cast<std::size_t>(L.rows());
    if (n == 0) return false;
    DisjointSets sets(n);
    for (Eigen::Index i = 0; i < L.rows(); ++i)
        for (Eigen::Index j = i + 1; j < L.cols(); ++j)
            if (L(i, j) < 0.0) sets.unite(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    return sets.components() == 1;
}

Eigen::SparseMatrix<double> sparse_laplacian(const Eigen::MatrixXd& L) {
    std::vector<Eigen::Triplet<double>> trips;
    for (Eigen::Index j = 0; j < L.cols(); ++j)
        for (Eigen::Index i = 0; i < L.rows(); ++i)
            if (L(i, j) != 0.0) trips.emplace_back(i, j, L(i, j));
    Eigen::SparseMatrix<double> S(L.rows(), L.cols());
    S.setFromTriplets(trips.begin(), trips.end());
    return S;
}

Eigen::VectorXd cg_solve(const Eigen::SparseMatrix<double>& L, const Eigen::VectorXd& rhs, double tol,
                         std::size_t max_iter) {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg;
    cg.setTolerance(tol);
    cg.setMaxIterations(static_cast<Eigen::Index>(max_iter));
    cg.compute(L);
    Eigen::VectorXd x = cg.solve(rhs);
    if (cg.info() != Eigen::Success) {
        throw SolverError("Laplacian solve did not converge within " + std::to_string(max_iter) + " iterations");
    }
    x.array() -= x.mean();
    return x;
}

}  // namespace

std::size_t sketch_rows_for(std::size_t n, double eps_prime) {
    const double rows = std::ceil(24.0 * std::log(static_cast<double>(std::max<std::size_t>(n, 2))) /
                                  (eps_prime * eps_prime));
    return static_cast<std::size_t>(rows);
}

Eigen::MatrixXd laplacian_pseudoinverse(const Eigen::MatrixXd& L) {
    const auto n = L.rows();
    const double inv_n = 1.0 / static_cast<double>(n);
    // L + J/n is positive definite on a connected graph and shares L's
    // eigenvectors; inverting it and removing J/n yields L^+.
    Eigen::MatrixXd shifted = L.array() + inv_n;
    Eigen::LLT<Eigen::MatrixXd> llt(shifted);
    if (llt.info() != Eigen::Success) throw DisconnectedGraph("Laplacian is not of rank n-1");
    Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(n, n));
    inv.array() -= inv_n;
    return 0.5 * (inv + inv.transpose());
}

ResistanceOracle build_exact_from_laplacian(const Eigen::MatrixXd& L, const OracleOptions& opts) {
    if (!laplacian_connected(L)) throw DisconnectedGraph("graph is not connected on positive-weight edges");
    ResistanceOracle o;
    o.mode_ = ResistanceOracle::Mode::Exact;
    o.n_ = static_cast<std::size_t>(L.rows());
    o.ledger_ = opts.ledger;
    o.cg_tolerance_ = opts.cg_tolerance;
    o.cg_max_iterations_ = opts.cg_max_iterations ? opts.cg_max_iterations : 10 * o.n_ + 10;
    PhaseTimer timer(opts.ledger, Phase::ResistanceInit);
    if (o.n_ <= opts.dense_limit) {
        o.pinv_ = laplacian_pseudoinverse(L);
    } else {
        o.sparse_laplacian_ = std::make_shared<const Eigen::SparseMatrix<double>>(sparse_laplacian(L));
    }
    if (opts.ledger) opts.ledger->record(Phase::ResistanceInit, 0, 0.0);
    return o;
}

ResistanceOracle build_exact_oracle(const WeightedGraph& g, const OracleOptions& opts) {
    return build_exact_from_laplacian(laplacian(g), opts);
}

ResistanceOracle build_exact_oracle(const MultigraphView& h, const OracleOptions& opts) {
    return build_exact_from_laplacian(laplacian(h), opts);
}

ResistanceOracle build_sketch_oracle(const WeightedGraph& g, double eps, Rng& rng, const OracleOptions& opts) {
    if (!(eps > 0.0 && eps < 1.0 / 3.0)) throw InvalidArgument("sketch accuracy must lie in (0, 1/3)");
    if (!is_connected(g, true)) throw DisconnectedGraph("graph is not connected on positive-weight edges");

    PhaseTimer timer(opts.ledger, Phase::ResistanceInit);
    const std::size_t n = g.num_vertices();
    const double eps_prime = eps / 3.0;
    const std::size_t p = sketch_rows_for(n, eps_prime);
    const double inv_sqrt_p = 1.0 / std::sqrt(static_cast<double>(p));

    std::vector<std::size_t> positive;
    std::vector<double> root_w;
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
        if (g.edge(e).w > 0.0) {
            positive.push_back(e);
            root_w.push_back(std::sqrt(g.edge(e).w) * inv_sqrt_p);
        }
    }

    // Rows of Q W^{1/2} B, stored transposed so each row is a contiguous column.
    const auto ni = static_cast<Eigen::Index>(n);
    const auto pi = static_cast<Eigen::Index>(p);
    Eigen::MatrixXd yt = Eigen::MatrixXd::Zero(ni, pi);
    for (Eigen::Index r = 0; r < pi; ++r) {
        double* col = yt.col(r).data();
        std::uint64_t bits = 0;
        int left = 0;
        for (std::size_t i = 0; i < positive.size(); ++i) {
            if (left == 0) {
                bits = rng();
                left = 64;
            }
            const double s = (bits & 1u) ? root_w[i] : -root_w[i];
            bits >>= 1;
            --left;
            const Edge& e = g.edge(positive[i]);
            col[e.u] += s;
            col[e.v] -= s;
        }
    }

    ResistanceOracle o;
    o.mode_ = ResistanceOracle::Mode::Sketch;
    o.epsilon_ = eps;
    o.n_ = n;
    o.ledger_ = opts.ledger;
    o.sketch_scale_ = 1.0 / (1.0 - eps_prime);
    const Eigen::MatrixXd L = laplacian(g);
    if (n <= opts.dense_limit) {
        const Eigen::MatrixXd pinv = laplacian_pseudoinverse(L);
        o.sketch_ = (pinv * yt).transpose();
    } else {
        const Eigen::SparseMatrix<double> S = sparse_laplacian(L);
        const std::size_t iters = opts.cg_max_iterations ? opts.cg_max_iterations : 10 * n + 10;
        o.sketch_.resize(pi, ni);
        for (Eigen::Index r = 0; r < pi; ++r) {
            o.sketch_.row(r) = cg_solve(S, yt.col(r), opts.cg_tolerance, iters).transpose();
        }
    }
    if (opts.ledger) {
        opts.ledger->record(Phase::ResistanceInit, g.num_edges(), cost::oracle_init(g.num_edges(), n, eps));
    }
    return o;
}

double ResistanceOracle::solve_difference(Vertex a, Vertex b) const {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_));
    rhs(static_cast<Eigen::Index>(a)) = 1.0;
    rhs(static_cast<Eigen::Index>(b)) = -1.0;
    const Eigen::VectorXd x = cg_solve(*sparse_laplacian_, rhs, cg_tolerance_, cg_max_iterations_);
    return x(static_cast<Eigen::Index>(a)) - x(static_cast<Eigen::Index>(b));
}

double ResistanceOracle::query(Vertex a, Vertex b) const {
    if (a >= n_ || b >= n_) throw InvalidArgument("resistance query vertex out of range");
    if (ledger_) ledger_->record(Phase::ResistanceQuery, 1, 0.0);
    if (a == b) return 0.0;
    const auto ia = static_cast<Eigen::Index>(a);
    const auto ib = static_cast<Eigen::Index>(b);
    if (mode_ == Mode::Sketch) {
        return (sketch_.col(ia) - sketch_.col(ib)).squaredNorm() * sketch_scale_;
    }
    if (sparse_laplacian_) return solve_difference(a, b);
    return pinv_(ia, ia) + pinv_(ib, ib) - 2.0 * pinv_(ia, ib);
}

LeverageVector leverage_scores(const WeightedGraph& g, const ResistanceOracle& oracle) {
    if (oracle.num_vertices() != g.num_vertices()) throw InvalidArgument("oracle was built for another graph");
    LeverageVector out;
    out.values.assign(g.num_edges(), 0.0);
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
        const Edge& edge = g.edge(e);
        if (edge.w > 0.0) out.values[e] = edge.w * oracle.query(edge.u, edge.v);
    }
    out.lambda = std::accumulate(out.values.begin(), out.values.end(), 0.0);
    return out;
}

SpanningTree max_product_spanning_tree(const WeightedGraph& g, QueryLedger* ledger) {
    PhaseTimer timer(ledger, Phase::MaxProductTree);
    struct Key {
        double log_w;
        EdgeId e;
    };
    std::vector<Key> keys;
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
        if (g.edge(e).w > 0.0) keys.push_back({std::log(g.edge(e).w), e});
    }
    std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
        return a.log_w != b.log_w ? a.log_w > b.log_w : a.e < b.e;
    });
    DisjointSets sets(g.num_vertices());
    SpanningTree t;
    for (const Key& k : keys) {
        if (sets.unite(g.edge(k.e).u, g.edge(k.e).v)) t.edge_ids.push_back(k.e);
    }
    if (g.num_vertices() == 0 || sets.components() != 1) {
        throw DisconnectedGraph("positive-weight subgraph is not connected");
    }
    std::sort(t.edge_ids.begin(), t.edge_ids.end());
    if (ledger) ledger->record(Phase::MaxProductTree, g.num_edges(), cost::tree_init(g.num_edges(), g.num_vertices()));
    return t;
}

}  // namespace rst
