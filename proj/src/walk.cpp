#include "rst/walk.hpp"

#include <algorithm>
#include <cmath>

#include "rst/errors.hpp"

namespace rst {

namespace {

ResistanceOracle make_oracle(const WeightedGraph& g, const WalkConfig& cfg, Rng& rng, QueryLedger* ledger) {
    OracleOptions opts = cfg.oracle_options;
    opts.ledger = ledger;
    if (cfg.oracle == OracleMode::Exact) return build_exact_oracle(g, opts);
    return build_sketch_oracle(g, cfg.oracle_epsilon, rng, opts);
}

IsotropicView make_view(const WeightedGraph& g, const WalkConfig& cfg, Rng& rng, QueryLedger* ledger) {
    if (g.num_vertices() < 2) throw InvalidArgument("the walk needs at least two vertices");
    if (!is_connected(g, true)) throw DisconnectedGraph("graph is not connected on positive-weight edges");
    const ResistanceOracle oracle = make_oracle(g, cfg, rng, ledger);
    return build_isotropic_view(g, oracle, cfg.lambda);
}

std::size_t free_copies(const IsotropicView& view) { return view.m_prime() - (view.base().num_vertices() - 1); }

}  // namespace

void WalkConfig::validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
    if (k_fresh && *k_fresh == 0) throw InvalidArgument("k_fresh must be at least 1");
    if (iterations && *iterations == 0) throw InvalidArgument("iteration count must be at least 1");
    if (!(mixing_constant > 0.0)) throw InvalidArgument("mixing constant must be positive");
    if (oracle == OracleMode::Sketch && !(oracle_epsilon > 0.0 && oracle_epsilon < 1.0 / 3.0)) {
        throw InvalidArgument("sketch accuracy must lie in (0, 1/3)");
    }
}

std::size_t default_iterations(std::size_t n, double epsilon, double mixing_constant) {
    const double l = std::log(static_cast<double>(n) + 2.0);
    return static_cast<std::size_t>(std::ceil(mixing_constant * l * l * l * std::log(2.0 / epsilon)));
}

WalkState walk_step(const WalkState& state, const IsotropicView& view, std::size_t k_fresh, Rng& rng,
                    QueryLedger* ledger) {
    const std::size_t k = std::min(k_fresh, free_copies(view));
    WalkState next;
    const std::vector<LabeledEdge> fresh = iso_sample(view, state.tree, k, rng, ledger);
    const MultigraphView h = subgraph_construct(view, state.tree, fresh);
    next.tree = wilson_sample(h, rng);
    if (ledger) ledger->record(Phase::DownStep, 1, 0.0);
    next.iteration = state.iteration + 1;
    return next;
}

WalkSampler::WalkSampler(const WeightedGraph& g, const WalkConfig& cfg, Rng& setup_rng, QueryLedger* ledger)
    : cfg_((cfg.validate(), cfg)), view_(make_view(g, cfg, setup_rng, ledger)), ledger_(ledger) {
    initial_tree_ = max_product_spanning_tree(g, ledger);
    const std::size_t n = g.num_vertices();
    iterations_ = cfg_.iterations ? *cfg_.iterations : default_iterations(n, cfg_.epsilon, cfg_.mixing_constant);
    requested_k_ = cfg_.k_fresh ? *cfg_.k_fresh : 2 * n;
    k_fresh_ = std::min(requested_k_, free_copies(view_));

    warnings_ = view_.warnings();
    if (k_fresh_ < requested_k_) {
        warnings_.push_back("k_fresh clamped from " + std::to_string(requested_k_) + " to the " +
                            std::to_string(k_fresh_) + " copies outside the tree");
    }
    if (g.num_edges() < 1000 * n || view_.lambda() > 2.0 * static_cast<double>(n)) {
        warnings_.push_back("graph is outside the m >= 1000 n, lambda <= 2 n regime of the mixing bound; "
                            "output law is still stationary but the iteration count is not certified");
    }
}

WalkState WalkSampler::initial_state() const { return {label_tree(initial_tree_), 0}; }

void WalkSampler::step(LabeledTree& tree, Rng& rng, Workspace& ws) const {
    iso_sample_into(view_, tree, k_fresh_, rng, ws.iso, ws.fresh, ledger_);
    ws.copies.clear();
    const std::size_t n = view_.base().num_vertices();
    // Labels were validated by iso_sample_into; fill H' directly.
    const WeightedGraph& g = view_.base();
    for (const LabeledEdge& l : tree) {
        const Edge& e = g.edge(l.e);
        ws.copies.push_back({e.u, e.v, e.w / static_cast<double>(view_.copy_counts()[l.e]), l});
    }
    for (const LabeledEdge& l : ws.fresh) {
        const Edge& e = g.edge(l.e);
        ws.copies.push_back({e.u, e.v, e.w / static_cast<double>(view_.copy_counts()[l.e]), l});
    }
    const std::vector<std::size_t> chosen = wilson_sample_copies(n, ws.copies, rng, ws.wilson);
    tree.clear();
    for (std::size_t c : chosen) tree.push_back(ws.copies[c].label);
    std::sort(tree.begin(), tree.end());
    if (ledger_) ledger_->record(Phase::DownStep, 1, 0.0);
}

SpanningTree WalkSampler::sample(Rng& rng) const {
    Workspace ws;
    LabeledTree tree = label_tree(initial_tree_);
    for (std::size_t t = 0; t < iterations_; ++t) step(tree, rng, ws);
    return strip_labels(tree);
}

void WalkSampler::run(Rng& rng, std::size_t steps,
                      const std::function<void(std::size_t, const LabeledTree&)>& observe) const {
    Workspace ws;
    LabeledTree tree = label_tree(initial_tree_);
    observe(0, tree);
    for (std::size_t t = 1; t <= steps; ++t) {
        step(tree, rng, ws);
        observe(t, tree);
    }
}

SpanningTree qrst(const WeightedGraph& g, const WalkConfig& cfg, Rng& rng, QueryLedger* ledger) {
    const WalkSampler sampler(g, cfg, rng, ledger);
    return sampler.sample(rng);
}

}  // namespace rst
