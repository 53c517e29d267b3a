#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rst/isotropic.hpp"
#include "rst/ledger.hpp"
#include "rst/random.hpp"

namespace rst {

/// Fresh batches allowed before k_subset_sample / iso_sample give up.
inline constexpr std::size_t kSubsetRetryLimit = 20;

/// Batch size k' = ceil(3 k ln(k + 2)).
std::size_t oversample_count(std::size_t k);

/// `count` independent uniform draws over the domain's copies, each drawn as
/// an edge with probability proportional to q_e followed by a uniform copy
/// index. Charges sqrt(N count) to Phase::WithReplacement.
std::vector<LabeledEdge> sample_with_replacement(const CopyDomain& domain, std::size_t count, Rng& rng,
                                                 QueryLedger* ledger = nullptr);

struct KSubsetResult {
    std::vector<LabeledEdge> labels;  ///< sorted
    std::size_t batches = 0;          ///< with-replacement batches consumed
};

/// Uniform k-subset of the domain: draw k' with replacement, keep the first
/// k distinct; retry with a fresh batch on shortfall.
KSubsetResult k_subset_sample_detailed(const CopyDomain& domain, std::size_t k, Rng& rng,
                                       QueryLedger* ledger = nullptr);
std::vector<LabeledEdge> k_subset_sample(const CopyDomain& domain, std::size_t k, Rng& rng,
                                         QueryLedger* ledger = nullptr);

/// Reusable scratch for iso_sample_into.
struct IsoSampleWorkspace {
    std::vector<std::uint32_t> stamp;
    std::uint32_t epoch = 0;
    std::vector<std::size_t> occupied;
    std::vector<std::size_t> picked;
};

/// Uniform k-subset of E' \ T'. Draws are uniform over the D = m' - |T'|
/// unoccupied copies (equivalently: an edge with probability proportional to
/// q_e minus its occupied labels, then a uniform free slot of that edge),
/// deduplicated as in k_subset_sample. Charges sqrt(m' k) per call to
/// Phase::IsoSample.
void iso_sample_into(const IsotropicView& view, std::span<const LabeledEdge> tree, std::size_t k, Rng& rng,
                     IsoSampleWorkspace& ws, std::vector<LabeledEdge>& out, QueryLedger* ledger = nullptr);

std::vector<LabeledEdge> iso_sample(const IsotropicView& view, std::span<const LabeledEdge> tree, std::size_t k,
                                    Rng& rng, QueryLedger* ledger = nullptr);

}  // namespace rst
