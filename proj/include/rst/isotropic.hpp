#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rst/graph.hpp"
#include "rst/multigraph.hpp"
#include "rst/resistance.hpp"

namespace rst {

/// Flat addressing of labeled copies: edge e owns the global indices
/// [prefix[e], prefix[e] + q_e), copy (e, j) sits at prefix[e] + j - 1.
class CopyDomain {
public:
    CopyDomain() = default;
    explicit CopyDomain(std::span<const std::uint32_t> copy_counts);

    std::size_t size() const noexcept { return prefix_.empty() ? 0 : prefix_.back(); }
    std::size_t num_edges() const noexcept { return prefix_.empty() ? 0 : prefix_.size() - 1; }
    std::uint32_t copy_count(EdgeId e) const { return static_cast<std::uint32_t>(prefix_.at(e + 1) - prefix_[e]); }

    bool contains(const LabeledEdge& l) const noexcept {
        return l.e < num_edges() && l.j >= 1 && l.j <= prefix_[l.e + 1] - prefix_[l.e];
    }
    /// Throws InvalidArgument for labels outside the domain.
    std::size_t index_of(const LabeledEdge& l) const;
    LabeledEdge label_at(std::size_t index) const;

private:
    std::vector<std::size_t> prefix_;
};

enum class LambdaChoice {
    LeverageNorm,  ///< lambda = ||l~||_1
    VertexCount,   ///< lambda = n
};

/// Implicit isotropic multigraph G': edge e is split into
/// q_e = ceil(m l~_e / lambda) copies of weight w_e / q_e (q_e = 0 when
/// l~_e = 0). Copy counts are fixed at construction.
class IsotropicView {
public:
    IsotropicView(WeightedGraph base, std::vector<double> leverage, double lambda);

    const WeightedGraph& base() const noexcept { return base_; }
    const std::vector<double>& leverage() const noexcept { return leverage_; }
    double lambda() const noexcept { return lambda_; }
    double leverage_norm() const noexcept { return leverage_norm_; }
    const std::vector<std::uint32_t>& copy_counts() const noexcept { return q_; }
    const CopyDomain& domain() const noexcept { return domain_; }
    std::size_t m_prime() const noexcept { return domain_.size(); }
    double copy_weight(EdgeId e) const;

    /// Non-fatal notes raised at construction (e.g. lambda below ||l~||_1).
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

private:
    WeightedGraph base_;
    std::vector<double> leverage_;
    double lambda_ = 0.0;
    double leverage_norm_ = 0.0;
    std::vector<std::uint32_t> q_;
    CopyDomain domain_;
    std::vector<std::string> warnings_;
};

/// ceil(x) that treats values within 1e-9 relative of an integer as that
/// integer, so exact leverage sums do not round 1 + ulp up to 2.
std::uint32_t copy_count_ceil(double x);

double lambda_for(LambdaChoice choice, const WeightedGraph& g, const LeverageVector& leverage);

IsotropicView build_isotropic_view(const WeightedGraph& g, const ResistanceOracle& oracle, double lambda);
IsotropicView build_isotropic_view(const WeightedGraph& g, const ResistanceOracle& oracle, LambdaChoice choice);

struct MarginalBoundReport {
    double max_marginal = 0.0;   ///< max over copies of w'_(e,j) R_e
    double bound = 0.0;          ///< lambda / m
    bool marginal_ok = false;
    std::size_t m_prime = 0;
    std::size_t m_prime_bound = 0;  ///< 2m
    bool m_prime_ok = false;
    bool lambda_covers_leverage = false;  ///< lambda >= ||l~||_1
};

/// Exact per-copy marginals checked against lambda/m, and m' against 2m.
MarginalBoundReport marginal_bound_check(const IsotropicView& view);

/// Appends the copies T' then S' with their G' weights to `out`; validates
/// labels and rejects overlap or repeats.
void append_subgraph_copies(const IsotropicView& view, std::span<const LabeledEdge> tree,
                            std::span<const LabeledEdge> fresh, std::vector<EdgeCopy>& out);

/// H' = T' u S' as an explicit multigraph on V.
MultigraphView subgraph_construct(const IsotropicView& view, std::span<const LabeledEdge> tree,
                                  std::span<const LabeledEdge> fresh);

/// All of G' as an explicit multigraph, copies in global-index order.
MultigraphView explicit_multigraph(const IsotropicView& view);

/// The labeled tree {(e, 1) : e in t}.
LabeledTree label_tree(const SpanningTree& t);

}  // namespace rst
