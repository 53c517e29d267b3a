#include "rst/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/distributions/chi_squared.hpp>

#include "rst/errors.hpp"
#include "rst/exact_samplers.hpp"
#include "rst/parallel.hpp"
#include "rst/sampling.hpp"

namespace rst {

namespace {

void check_normalized(double sum, const char* which) {
    if (std::abs(sum - 1.0) > 1e-9) throw InvalidArgument(std::string(which) + " is not normalized");
}

template <class Map>
double map_sum(const Map& m) {
    double s = 0.0;
    for (const auto& [k, v] : m) s += v;
    return s;
}

double expected_abs_normal_sum(const std::vector<double>& sigmas, double& sd) {
    // E|N(0, s^2)| = s sqrt(2/pi); Var = s^2 (1 - 2/pi).
    double mean = 0.0, var = 0.0;
    for (double s : sigmas) {
        mean += s * std::sqrt(2.0 / std::numbers::pi);
        var += s * s * (1.0 - 2.0 / std::numbers::pi);
    }
    sd = std::sqrt(var);
    return mean;
}

}  // namespace

void EmpiricalDistribution::add(const SpanningTree& t, std::uint64_t times) {
    counts_[t.edge_ids] += times;
    total_ += times;
}

void EmpiricalDistribution::merge(const EmpiricalDistribution& other) {
    for (const auto& [k, c] : other.counts_) counts_[k] += c;
    total_ += other.total_;
}

std::uint64_t EmpiricalDistribution::count(const TreeKey& key) const {
    const auto it = counts_.find(key);
    return it == counts_.end() ? 0 : it->second;
}

Distribution EmpiricalDistribution::normalized() const {
    Distribution d;
    for (const auto& [k, c] : counts_) d[k] = static_cast<double>(c) / static_cast<double>(total_);
    return d;
}

Distribution reference_distribution(const WeightedGraph& g) {
    Distribution d;
    for (const auto& t : enumerate_trees(g)) d[t.tree.edge_ids] = t.probability;
    return d;
}

double tv_distance(const Distribution& mu, const Distribution& nu) {
    check_normalized(map_sum(mu), "first distribution");
    check_normalized(map_sum(nu), "second distribution");
    double sum = 0.0;
    auto a = mu.begin();
    auto b = nu.begin();
    while (a != mu.end() || b != nu.end()) {
        if (b == nu.end() || (a != mu.end() && a->first < b->first)) {
            sum += std::abs(a->second);
            ++a;
        } else if (a == mu.end() || b->first < a->first) {
            sum += std::abs(b->second);
            ++b;
        } else {
            sum += std::abs(a->second - b->second);
            ++a;
            ++b;
        }
    }
    return 0.5 * sum;
}

double tv_distance(std::span<const double> mu, std::span<const double> nu) {
    if (mu.size() != nu.size()) throw InvalidArgument("distributions have different supports");
    double sa = 0.0, sb = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        sa += mu[i];
        sb += nu[i];
        sum += std::abs(mu[i] - nu[i]);
    }
    check_normalized(sa, "first distribution");
    check_normalized(sb, "second distribution");
    return 0.5 * sum;
}

double kl_divergence(std::span<const double> mu, std::span<const double> nu) {
    if (mu.size() != nu.size()) throw InvalidArgument("distributions have different supports");
    double sa = 0.0, sb = 0.0, kl = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        sa += mu[i];
        sb += nu[i];
        if (mu[i] == 0.0) continue;
        if (!(nu[i] > 0.0)) throw InvalidArgument("first distribution has mass outside the support of the second");
        kl += mu[i] * std::log(mu[i] / nu[i]);
    }
    check_normalized(sa, "first distribution");
    check_normalized(sb, "second distribution");
    return std::max(kl, 0.0);
}

double kl_divergence(const Distribution& mu, const Distribution& nu) {
    check_normalized(map_sum(mu), "first distribution");
    check_normalized(map_sum(nu), "second distribution");
    double kl = 0.0;
    for (const auto& [k, p] : mu) {
        if (p == 0.0) continue;
        const auto it = nu.find(k);
        if (it == nu.end() || !(it->second > 0.0)) {
            throw InvalidArgument("first distribution has mass outside the support of the second");
        }
        kl += p * std::log(p / it->second);
    }
    return std::max(kl, 0.0);
}

ChiSquareResult chi_square_test(std::span<const std::uint64_t> counts, std::span<const double> expected) {
    if (counts.size() != expected.size() || counts.size() < 2) {
        throw InvalidArgument("chi-square test needs matching vectors with at least two cells");
    }
    double total = 0.0;
    for (auto c : counts) total += static_cast<double>(c);
    ChiSquareResult r;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double e = expected[i] * total;
        if (!(e > 0.0)) throw InvalidArgument("chi-square expected counts must be positive");
        const double d = static_cast<double>(counts[i]) - e;
        r.statistic += d * d / e;
    }
    r.dof = counts.size() - 1;
    const boost::math::chi_squared dist(static_cast<double>(r.dof));
    r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
    return r;
}

ChiSquareResult chi_square_uniform(std::span<const std::uint64_t> counts) {
    const std::vector<double> expected(counts.size(), 1.0 / static_cast<double>(counts.size()));
    return chi_square_test(counts, expected);
}

MarginalReport marginal_check_counts(std::span<const std::uint64_t> edge_counts, std::size_t samples,
                                     const WeightedGraph& g, const ResistanceOracle& oracle) {
    if (edge_counts.size() != g.num_edges()) throw InvalidArgument("one count per edge required");
    if (samples == 0) throw InvalidArgument("marginal check needs samples");
    MarginalReport r;
    r.samples = samples;
    std::size_t within = 0;
    std::vector<double> sigmas;
    const double n_samples = static_cast<double>(samples);
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
        const Edge& edge = g.edge(e);
        EdgeMarginal em;
        em.edge = e;
        em.frequency = static_cast<double>(edge_counts[e]) / n_samples;
        em.expected = edge.w > 0.0 ? std::clamp(edge.w * oracle.query(edge.u, edge.v), 0.0, 1.0) : 0.0;
        em.sigma = std::sqrt(em.expected * (1.0 - em.expected) / n_samples);
        const double diff = em.frequency - em.expected;
        // A deterministic edge (sigma 0) passes only on an exact match.
        if (em.sigma > 1e-12) em.z = diff / em.sigma;
        else em.z = std::abs(diff) < 1e-9 ? 0.0 : std::copysign(INFINITY, diff);
        em.flagged = std::abs(em.z) > 3.0;
        if (!em.flagged) ++within;
        r.frequency_sum += em.frequency;
        r.l1_error += std::abs(diff);
        sigmas.push_back(em.sigma);
        r.edges.push_back(em);
    }
    r.fraction_within_3sigma = g.num_edges() ? static_cast<double>(within) / static_cast<double>(g.num_edges()) : 1.0;
    r.l1_noise_mean = expected_abs_normal_sum(sigmas, r.l1_noise_sd);
    return r;
}

MarginalReport marginal_check(const EmpiricalDistribution& samples, const WeightedGraph& g,
                              const ResistanceOracle& oracle) {
    std::vector<std::uint64_t> counts(g.num_edges(), 0);
    for (const auto& [key, c] : samples.counts()) {
        for (EdgeId e : key) {
            if (e >= counts.size()) throw InvalidArgument("sampled tree references a missing edge");
            counts[e] += c;
        }
    }
    return marginal_check_counts(counts, samples.total(), g, oracle);
}

MixingCurve mixing_curve(const WeightedGraph& g, const WalkConfig& cfg, std::span<const std::size_t> grid,
                         std::size_t samples, std::uint64_t seed, std::size_t jobs, double tv_enumeration_limit) {
    MixingCurve curve;
    curve.samples = samples;
    if (grid.empty()) return curve;
    std::vector<std::size_t> depths(grid.begin(), grid.end());
    std::sort(depths.begin(), depths.end());
    depths.erase(std::unique(depths.begin(), depths.end()), depths.end());
    const std::size_t max_depth = depths.back();

    Rng setup = make_stream(seed, kSetupStream);
    const WalkSampler sampler(g, cfg, setup);
    const std::size_t m = g.num_edges();
    const std::size_t blocks = (samples + kSampleBlock - 1) / kSampleBlock;

    // Per block and depth: edge membership counts and tree counts.
    std::vector<std::vector<std::vector<std::uint64_t>>> edge_counts(
        blocks, std::vector<std::vector<std::uint64_t>>(depths.size(), std::vector<std::uint64_t>(m, 0)));
    std::vector<std::vector<EmpiricalDistribution>> trees(blocks, std::vector<EmpiricalDistribution>(depths.size()));

    for_each_sample_block(samples, seed, jobs, [&](std::size_t b, std::size_t begin, std::size_t end, Rng& rng) {
        for (std::size_t i = begin; i < end; ++i) {
            std::size_t next = 0;
            sampler.run(rng, max_depth, [&](std::size_t t, const LabeledTree& tree) {
                if (next < depths.size() && depths[next] == t) {
                    const SpanningTree plain = strip_labels(tree);
                    for (EdgeId e : plain.edge_ids) ++edge_counts[b][next][e];
                    trees[b][next].add(plain);
                    ++next;
                }
            });
        }
    });

    const ResistanceOracle exact = build_exact_oracle(g);
    std::optional<Distribution> reference;
    if (count_support_trees(g) <= tv_enumeration_limit) reference = reference_distribution(g);

    for (std::size_t d = 0; d < depths.size(); ++d) {
        std::vector<std::uint64_t> counts(m, 0);
        EmpiricalDistribution merged;
        for (std::size_t b = 0; b < blocks; ++b) {
            for (std::size_t e = 0; e < m; ++e) counts[e] += edge_counts[b][d][e];
            merged.merge(trees[b][d]);
        }
        const MarginalReport rep = marginal_check_counts(counts, samples, g, exact);
        MixingPoint p;
        p.iterations = depths[d];
        p.marginal_l1 = rep.l1_error;
        p.fraction_within_3sigma = rep.fraction_within_3sigma;
        p.l1_noise_mean = rep.l1_noise_mean;
        p.l1_noise_sd = rep.l1_noise_sd;
        if (reference) p.tv = tv_distance(merged.normalized(), *reference);
        curve.points.push_back(p);
    }
    return curve;
}

std::optional<std::size_t> plateau_depth(const MixingCurve& curve, double sigmas) {
    std::optional<std::size_t> depth;
    for (auto it = curve.points.rbegin(); it != curve.points.rend(); ++it) {
        if (it->marginal_l1 > it->l1_noise_mean + sigmas * it->l1_noise_sd) break;
        depth = it->iterations;
    }
    return depth;
}

}  // namespace rst
