#include "rst/isotropic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rst/errors.hpp"

namespace rst {

CopyDomain::CopyDomain(std::span<const std::uint32_t> copy_counts) {
    prefix_.resize(copy_counts.size() + 1, 0);
    for (std::size_t e = 0; e < copy_counts.size(); ++e) prefix_[e + 1] = prefix_[e] + copy_counts[e];
}

std::size_t CopyDomain::index_of(const LabeledEdge& l) const {
    if (!contains(l)) {
        throw InvalidArgument("label (" + std::to_string(l.e) + "," + std::to_string(l.j) + ") is not a copy in the domain");
    }
    return prefix_[l.e] + l.j - 1;
}

LabeledEdge CopyDomain::label_at(std::size_t index) const {
    if (index >= size()) throw InvalidArgument("copy index out of range");
    const auto it = std::upper_bound(prefix_.begin(), prefix_.end(), index);
    const auto e = static_cast<std::size_t>(it - prefix_.begin()) - 1;
    return {e, static_cast<std::uint32_t>(index - prefix_[e] + 1)};
}

std::uint32_t copy_count_ceil(double x) {
    if (!(x > 0.0)) return 0;
    const double nearest = std::round(x);
    if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, nearest)) return static_cast<std::uint32_t>(nearest);
    return static_cast<std::uint32_t>(std::ceil(x));
}

IsotropicView::IsotropicView(WeightedGraph base, std::vector<double> leverage, double lambda)
    : base_(std::move(base)), leverage_(std::move(leverage)), lambda_(lambda) {
    if (!(lambda_ > 0.0) || !std::isfinite(lambda_)) throw InvalidArgument("lambda must be positive");
    if (leverage_.size() != base_.num_edges()) throw InvalidArgument("one leverage value per edge required");
    leverage_norm_ = std::accumulate(leverage_.begin(), leverage_.end(), 0.0);
    const double m = static_cast<double>(base_.num_edges());
    q_.resize(leverage_.size());
    for (std::size_t e = 0; e < leverage_.size(); ++e) {
        if (leverage_[e] < 0.0) throw InvalidArgument("leverage overestimates must be nonnegative");
        q_[e] = copy_count_ceil(m * leverage_[e] / lambda_);
    }
    domain_ = CopyDomain(q_);
    if (lambda_ < leverage_norm_ * (1.0 - 1e-12)) {
        warnings_.push_back("lambda is below the leverage norm; the isotropic marginal bound is not guaranteed");
    }
}

double IsotropicView::copy_weight(EdgeId e) const {
    const std::uint32_t q = q_.at(e);
    if (q == 0) throw InvalidArgument("edge has no copies in the isotropic view");
    return base_.edge(e).w / static_cast<double>(q);
}

double lambda_for(LambdaChoice choice, const WeightedGraph& g, const LeverageVector& leverage) {
    return choice == LambdaChoice::VertexCount ? static_cast<double>(g.num_vertices()) : leverage.lambda;
}

IsotropicView build_isotropic_view(const WeightedGraph& g, const ResistanceOracle& oracle, double lambda) {
    LeverageVector lev = leverage_scores(g, oracle);
    return IsotropicView(g, std::move(lev.values), lambda);
}

IsotropicView build_isotropic_view(const WeightedGraph& g, const ResistanceOracle& oracle, LambdaChoice choice) {
    LeverageVector lev = leverage_scores(g, oracle);
    const double lambda = lambda_for(choice, g, lev);
    return IsotropicView(g, std::move(lev.values), lambda);
}

MarginalBoundReport marginal_bound_check(const IsotropicView& view) {
    const WeightedGraph& g = view.base();
    const ResistanceOracle exact = build_exact_oracle(g);
    MarginalBoundReport r;
    r.bound = view.lambda() / static_cast<double>(g.num_edges());
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
        if (view.copy_counts()[e] == 0) continue;
        const double marginal = view.copy_weight(e) * exact.query(g.edge(e).u, g.edge(e).v);
        r.max_marginal = std::max(r.max_marginal, marginal);
    }
    r.marginal_ok = r.max_marginal <= r.bound * (1.0 + 1e-9);
    r.m_prime = view.m_prime();
    r.m_prime_bound = 2 * g.num_edges();
    r.m_prime_ok = r.m_prime <= r.m_prime_bound;
    r.lambda_covers_leverage = view.lambda() >= view.leverage_norm() * (1.0 - 1e-12);
    return r;
}

void append_subgraph_copies(const IsotropicView& view, std::span<const LabeledEdge> tree,
                            std::span<const LabeledEdge> fresh, std::vector<EdgeCopy>& out) {
    const WeightedGraph& g = view.base();
    const CopyDomain& dom = view.domain();
    const std::size_t first = out.size();
    auto push = [&](const LabeledEdge& l) {
        if (!dom.contains(l)) {
            throw InvalidArgument("label (" + std::to_string(l.e) + "," + std::to_string(l.j) + ") is not a copy of G'");
        }
        const Edge& e = g.edge(l.e);
        out.push_back({e.u, e.v, e.w / static_cast<double>(view.copy_counts()[l.e]), l});
    };
    for (const LabeledEdge& l : tree) push(l);
    for (const LabeledEdge& l : fresh) push(l);
    // Overlap check on the appended block.
    std::vector<LabeledEdge> labels;
    labels.reserve(out.size() - first);
    for (std::size_t i = first; i < out.size(); ++i) labels.push_back(out[i].label);
    std::sort(labels.begin(), labels.end());
    if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) {
        throw InvalidArgument("tree and fresh copies overlap or repeat a label");
    }
}

MultigraphView subgraph_construct(const IsotropicView& view, std::span<const LabeledEdge> tree,
                                  std::span<const LabeledEdge> fresh) {
    std::vector<EdgeCopy> copies;
    copies.reserve(tree.size() + fresh.size());
    append_subgraph_copies(view, tree, fresh, copies);
    return MultigraphView(view.base().num_vertices(), std::move(copies));
}

MultigraphView explicit_multigraph(const IsotropicView& view) {
    std::vector<EdgeCopy> copies;
    copies.reserve(view.m_prime());
    for (EdgeId e = 0; e < view.base().num_edges(); ++e) {
        const Edge& edge = view.base().edge(e);
        for (std::uint32_t j = 1; j <= view.copy_counts()[e]; ++j) {
            copies.push_back({edge.u, edge.v, view.copy_weight(e), {e, j}});
        }
    }
    return MultigraphView(view.base().num_vertices(), std::move(copies));
}

LabeledTree label_tree(const SpanningTree& t) {
    LabeledTree out;
    out.reserve(t.edge_ids.size());
    for (EdgeId e : t.edge_ids) out.push_back({e, 1});
    return out;
}

}  // namespace rst
