#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "rst/graph.hpp"
#include "rst/resistance.hpp"
#include "rst/walk.hpp"

namespace rst {

/// Canonical tree key: sorted edge ids with labels stripped.
using TreeKey = std::vector<EdgeId>;
using Distribution = std::map<TreeKey, double>;

class EmpiricalDistribution {
public:
    void add(const SpanningTree& t, std::uint64_t times = 1);
    void merge(const EmpiricalDistribution& other);

    std::uint64_t total() const noexcept { return total_; }
    const std::map<TreeKey, std::uint64_t>& counts() const noexcept { return counts_; }
    std::uint64_t count(const TreeKey& key) const;
    Distribution normalized() const;

private:
    std::map<TreeKey, std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

/// W_G as a keyed distribution, from exhaustive enumeration.
Distribution reference_distribution(const WeightedGraph& g);

/// Half L1 distance; missing keys count as zero. Both inputs must sum to 1
/// within 1e-9.
double tv_distance(const Distribution& mu, const Distribution& nu);
double tv_distance(std::span<const double> mu, std::span<const double> nu);

/// sum mu log(mu / nu), natural log, 0 log 0 = 0. Throws InvalidArgument when
/// mu puts mass outside supp nu.
double kl_divergence(const Distribution& mu, const Distribution& nu);
double kl_divergence(std::span<const double> mu, std::span<const double> nu);

struct ChiSquareResult {
    double statistic = 0.0;
    std::size_t dof = 0;
    double p_value = 1.0;
};

/// Pearson goodness of fit of `counts` against `expected` probabilities.
ChiSquareResult chi_square_test(std::span<const std::uint64_t> counts, std::span<const double> expected);
ChiSquareResult chi_square_uniform(std::span<const std::uint64_t> counts);

struct EdgeMarginal {
    EdgeId edge = 0;
    double frequency = 0.0;
    double expected = 0.0;  ///< w_e R_e
    double sigma = 0.0;     ///< binomial standard error at `expected`
    double z = 0.0;
    bool flagged = false;   ///< |z| > 3
};

struct MarginalReport {
    std::vector<EdgeMarginal> edges;
    std::size_t samples = 0;
    double frequency_sum = 0.0;
    double l1_error = 0.0;
    double fraction_within_3sigma = 0.0;
    /// Mean and standard deviation of l1_error for an exact sampler with the
    /// same sample count (normal approximation of each binomial).
    double l1_noise_mean = 0.0;
    double l1_noise_sd = 0.0;
};

/// Per-edge tree-membership frequencies against w_e R_e from `oracle`.
MarginalReport marginal_check(const EmpiricalDistribution& samples, const WeightedGraph& g,
                              const ResistanceOracle& oracle);
/// Same, from raw per-edge membership counts.
MarginalReport marginal_check_counts(std::span<const std::uint64_t> edge_counts, std::size_t samples,
                                     const WeightedGraph& g, const ResistanceOracle& oracle);

struct MixingPoint {
    std::size_t iterations = 0;
    std::optional<double> tv;  ///< against enumeration, when enumerable
    double marginal_l1 = 0.0;
    double fraction_within_3sigma = 0.0;
    double l1_noise_mean = 0.0;
    double l1_noise_sd = 0.0;
};

struct MixingCurve {
    std::vector<MixingPoint> points;
    std::size_t samples = 0;
};

/// Runs `samples` independent walks to the largest grid depth, recording the
/// tree at every grid depth, so each point is a sample of the walk stopped
/// at that depth. TV is reported when the support has at most
/// `tv_enumeration_limit` trees.
MixingCurve mixing_curve(const WeightedGraph& g, const WalkConfig& cfg, std::span<const std::size_t> grid,
                         std::size_t samples, std::uint64_t seed, std::size_t jobs = 1,
                         double tv_enumeration_limit = 1e5);

/// First grid depth from which every later point stays within
/// noise_mean + `sigmas` * noise_sd; nullopt when no such depth exists.
std::optional<std::size_t> plateau_depth(const MixingCurve& curve, double sigmas = 3.0);

}  // namespace rst
