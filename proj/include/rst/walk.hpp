#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rst/exact_samplers.hpp"
#include "rst/graph.hpp"
#include "rst/isotropic.hpp"
#include "rst/ledger.hpp"
#include "rst/multisample.hpp"
#include "rst/random.hpp"
#include "rst/resistance.hpp"

namespace rst {

enum class OracleMode { Exact, Sketch };

struct WalkConfig {
    /// Target total-variation accuracy, in (0, 1).
    double epsilon = 0.05;
    /// Fresh copies per up-step; defaults to 2n.
    std::optional<std::size_t> k_fresh;
    /// C in M = ceil(C ln^3(n + 2) ln(2 / epsilon)).
    double mixing_constant = 2.0;
    /// Overrides the formula for M.
    std::optional<std::size_t> iterations;
    LambdaChoice lambda = LambdaChoice::LeverageNorm;
    OracleMode oracle = OracleMode::Sketch;
    /// Accuracy of the sketch oracle.
    double oracle_epsilon = 0.1;
    OracleOptions oracle_options;

    /// Throws InvalidArgument on out-of-range fields.
    void validate() const;
};

/// ceil(C ln^3(n + 2) ln(2 / eps)).
std::size_t default_iterations(std::size_t n, double epsilon, double mixing_constant);

struct WalkState {
    LabeledTree tree;  ///< sorted labeled copies of the current tree
    std::size_t iteration = 0;
};

/// One up-down step: S' = iso_sample(T', k), H' = T' u S', T'_next ~ W_H'.
/// `k_fresh` is clamped to the number of copies outside T'.
WalkState walk_step(const WalkState& state, const IsotropicView& view, std::size_t k_fresh, Rng& rng,
                    QueryLedger* ledger = nullptr);

/// Preprocessed large-step down-up walk on one graph: resistance oracle,
/// isotropic view and the starting tree are built once; every call to
/// sample() runs M fresh iterations from that start. Immutable after
/// construction, so independent samples may run concurrently.
class WalkSampler {
public:
    /// `setup_rng` drives the sketch oracle. Throws DisconnectedGraph when
    /// the positive-weight subgraph does not span, InvalidArgument when n < 2.
    WalkSampler(const WeightedGraph& g, const WalkConfig& cfg, Rng& setup_rng, QueryLedger* ledger = nullptr);

    const IsotropicView& view() const noexcept { return view_; }
    const SpanningTree& initial_tree() const noexcept { return initial_tree_; }
    std::size_t iterations() const noexcept { return iterations_; }
    /// Up-step size after clamping to the free copies.
    std::size_t k_fresh() const noexcept { return k_fresh_; }
    /// Per-iteration TV budget eps / (2M) handed to the down-step sampler.
    /// Wilson's algorithm is exact and consumes none of it.
    double down_step_tolerance() const noexcept { return cfg_.epsilon / (2.0 * static_cast<double>(iterations_)); }
    const WalkConfig& config() const noexcept { return cfg_; }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

    WalkState initial_state() const;
    SpanningTree sample(Rng& rng) const;

    /// Runs `steps` iterations from the initial tree, calling
    /// `observe(t, tree)` after iteration t for t = 0..steps.
    void run(Rng& rng, std::size_t steps, const std::function<void(std::size_t, const LabeledTree&)>& observe) const;

private:
    struct Workspace {
        IsoSampleWorkspace iso;
        WilsonWorkspace wilson;
        std::vector<LabeledEdge> fresh;
        std::vector<EdgeCopy> copies;
    };
    void step(LabeledTree& tree, Rng& rng, Workspace& ws) const;

    WalkConfig cfg_;
    IsotropicView view_;
    SpanningTree initial_tree_;
    std::size_t iterations_ = 0;
    std::size_t k_fresh_ = 0;
    std::size_t requested_k_ = 0;
    QueryLedger* ledger_ = nullptr;
    std::vector<std::string> warnings_;
};

/// Builds a sampler and draws one tree.
SpanningTree qrst(const WeightedGraph& g, const WalkConfig& cfg, Rng& rng, QueryLedger* ledger = nullptr);

}  // namespace rst
