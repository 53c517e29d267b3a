#include "rst/sampling.hpp"

#include "rst/errors.hpp"
#include "rst/exact_samplers.hpp"
#include "rst/parallel.hpp"

namespace rst {

std::optional<Method> parse_method(std::string_view name) {
    if (name == "walk") return Method::Walk;
    if (name == "wilson") return Method::Wilson;
    if (name == "aldous") return Method::Aldous;
    return std::nullopt;
}

std::string_view method_name(Method m) {
    switch (m) {
        case Method::Walk: return "walk";
        case Method::Wilson: return "wilson";
        case Method::Aldous: return "aldous";
    }
    return "unknown";
}

std::vector<SpanningTree> draw_walk_trees(const WalkSampler& sampler, std::size_t count, std::uint64_t seed,
                                          std::size_t jobs) {
    std::vector<SpanningTree> out(count);
    for_each_sample_block(count, seed, jobs, [&](std::size_t, std::size_t begin, std::size_t end, Rng& rng) {
        for (std::size_t i = begin; i < end; ++i) out[i] = sampler.sample(rng);
    });
    return out;
}

std::vector<SpanningTree> draw_trees(const WeightedGraph& g, Method method, std::size_t count, std::uint64_t seed,
                                     std::size_t jobs, const WalkConfig& cfg, QueryLedger* ledger) {
    if (method == Method::Walk) {
        Rng setup = make_stream(seed, kSetupStream);
        const WalkSampler sampler(g, cfg, setup, ledger);
        return draw_walk_trees(sampler, count, seed, jobs);
    }
    if (!is_connected(g, true)) throw DisconnectedGraph("graph is not connected on positive-weight edges");
    std::vector<SpanningTree> out(count);
    const MultigraphView h = as_multigraph(g);
    for_each_sample_block(count, seed, jobs, [&](std::size_t, std::size_t begin, std::size_t end, Rng& rng) {
        WilsonWorkspace ws;
        for (std::size_t i = begin; i < end; ++i) {
            if (method == Method::Wilson) {
                auto copies = wilson_sample_copies(h, rng, ws);  // copy index == edge id
                out[i].edge_ids.assign(copies.begin(), copies.end());
                if (ledger) ledger->record(Phase::DownStep, 1, 0.0);
            } else {
                out[i] = aldous_broder_sample(g, rng);
            }
        }
    });
    return out;
}

}  // namespace rst
