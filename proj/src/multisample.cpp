#include "rst/multisample.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "rst/errors.hpp"

namespace rst {

std::size_t oversample_count(std::size_t k) {
    return static_cast<std::size_t>(std::ceil(3.0 * static_cast<double>(k) * std::log(static_cast<double>(k) + 2.0)));
}

std::vector<LabeledEdge> sample_with_replacement(const CopyDomain& domain, std::size_t count, Rng& rng,
                                                 QueryLedger* ledger) {
    const std::size_t total = domain.size();
    if (total == 0) throw InvalidArgument("cannot sample from an empty copy domain");
    std::vector<LabeledEdge> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(domain.label_at(uniform_index(rng, total)));
    if (ledger) ledger->record(Phase::WithReplacement, count, cost::with_replacement(total, count));
    return out;
}

KSubsetResult k_subset_sample_detailed(const CopyDomain& domain, std::size_t k, Rng& rng, QueryLedger* ledger) {
    const std::size_t total = domain.size();
    if (k > total) {
        throw InvalidArgument("cannot draw " + std::to_string(k) + " distinct copies from " + std::to_string(total));
    }
    KSubsetResult result;
    if (ledger) ledger->record(Phase::KSubset, 0, 0.0);
    if (k == 0) return result;
    if (k == total) {
        result.labels.reserve(total);
        for (std::size_t i = 0; i < total; ++i) result.labels.push_back(domain.label_at(i));
        return result;
    }
    const std::size_t batch = oversample_count(k);
    std::unordered_set<std::size_t> seen;
    for (std::size_t attempt = 0; attempt < kSubsetRetryLimit; ++attempt) {
        ++result.batches;
        const auto draws = sample_with_replacement(domain, batch, rng, ledger);
        seen.clear();
        result.labels.clear();
        for (const LabeledEdge& l : draws) {
            if (seen.insert(domain.index_of(l)).second) {
                result.labels.push_back(l);
                if (result.labels.size() == k) break;
            }
        }
        if (result.labels.size() == k) {
            std::sort(result.labels.begin(), result.labels.end());
            return result;
        }
    }
    throw RetryBudgetExhausted("k-subset sampler found fewer than k distinct copies in every batch");
}

std::vector<LabeledEdge> k_subset_sample(const CopyDomain& domain, std::size_t k, Rng& rng, QueryLedger* ledger) {
    return k_subset_sample_detailed(domain, k, rng, ledger).labels;
}

void iso_sample_into(const IsotropicView& view, std::span<const LabeledEdge> tree, std::size_t k, Rng& rng,
                     IsoSampleWorkspace& ws, std::vector<LabeledEdge>& out, QueryLedger* ledger) {
    const CopyDomain& dom = view.domain();
    const std::size_t m_prime = dom.size();

    ws.occupied.clear();
    for (const LabeledEdge& l : tree) ws.occupied.push_back(dom.index_of(l));
    std::sort(ws.occupied.begin(), ws.occupied.end());
    if (std::adjacent_find(ws.occupied.begin(), ws.occupied.end()) != ws.occupied.end()) {
        throw InvalidArgument("tree repeats a labeled copy");
    }
    const std::size_t free = m_prime - ws.occupied.size();
    if (k > free) {
        throw InvalidArgument("cannot draw " + std::to_string(k) + " fresh copies; only " + std::to_string(free) +
                              " lie outside the tree");
    }

    out.clear();
    std::uint64_t draws_used = 0;
    // r-th unoccupied global index: the smallest i with occupied[i] - i > r
    // gives index r + i.
    auto free_index = [&](std::size_t r) {
        std::size_t lo = 0, hi = ws.occupied.size();
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (ws.occupied[mid] - mid > r) hi = mid;
            else lo = mid + 1;
        }
        return r + lo;
    };

    if (k == free) {
        for (std::size_t r = 0; r < free; ++r) out.push_back(dom.label_at(free_index(r)));
    } else if (k > 0) {
        if (ws.stamp.size() < m_prime) ws.stamp.assign(m_prime, 0);
        const std::size_t batch = oversample_count(k);
        bool done = false;
        for (std::size_t attempt = 0; attempt < kSubsetRetryLimit && !done; ++attempt) {
            if (++ws.epoch == 0) {
                std::fill(ws.stamp.begin(), ws.stamp.end(), 0);
                ws.epoch = 1;
            }
            ws.picked.clear();
            for (std::size_t d = 0; d < batch; ++d) {
                ++draws_used;
                const std::size_t g = free_index(uniform_index(rng, free));
                if (ws.stamp[g] != ws.epoch) {
                    ws.stamp[g] = ws.epoch;
                    ws.picked.push_back(g);
                    if (ws.picked.size() == k) {
                        done = true;
                        break;
                    }
                }
            }
        }
        if (!done) throw RetryBudgetExhausted("isotropic sampler found fewer than k distinct copies in every batch");
        std::sort(ws.picked.begin(), ws.picked.end());
        for (std::size_t g : ws.picked) out.push_back(dom.label_at(g));
    }
    if (ledger) ledger->record(Phase::IsoSample, draws_used, cost::iso_sample(m_prime, k));
}

std::vector<LabeledEdge> iso_sample(const IsotropicView& view, std::span<const LabeledEdge> tree, std::size_t k,
                                    Rng& rng, QueryLedger* ledger) {
    IsoSampleWorkspace ws;
    std::vector<LabeledEdge> out;
    iso_sample_into(view, tree, k, rng, ws, out, ledger);
    return out;
}

}  // namespace rst
