#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rst/graph.hpp"
#include "rst/isotropic.hpp"

namespace rst {

/// Largest ground set for which chain matrices are materialized.
inline constexpr std::size_t kChainGroundLimit = 12;

/// All k-subsets of {0..m-1} as bitmasks, in lexicographic order of their
/// sorted element lists.
std::vector<std::uint32_t> k_subsets(std::size_t m, std::size_t k);

/// D_{k->l}: entry 1/C(k,l) where the column set is contained in the row set.
Eigen::MatrixXd down_operator(std::size_t m, std::size_t k, std::size_t l);

struct UpOperator {
    Eigen::MatrixXd matrix;
    /// l-sets contained in no set of positive mass; their rows are zero.
    std::vector<std::size_t> unextendable_rows;
};

/// U_{l->k} for a distribution `mu` indexed like k_subsets(m, k).
UpOperator up_operator(std::span<const double> mu, std::size_t m, std::size_t k, std::size_t l);

/// Transition matrix of the large-step chain over `states` (k-sets given as
/// masks over m elements): add `fresh` uniform elements outside the current
/// set, then resample a state from mu restricted to the union.
Eigen::MatrixXd down_up_transition(std::span<const std::uint32_t> states, std::span<const double> mu, std::size_t m,
                                   std::size_t fresh);

struct ChainReport {
    std::size_t ground_size = 0;  ///< m'
    std::size_t tree_size = 0;    ///< n - 1
    std::size_t fresh = 0;        ///< t - (n - 1)
    std::vector<std::uint32_t> states;  ///< spanning trees of G' as copy masks
    std::vector<double> stationary;     ///< W_G' on `states`
    Eigen::MatrixXd transition;
    double stationarity_error = 0.0;    ///< max |mu P - mu|
    std::vector<double> tv_from_start;  ///< TV(1_x P^s, mu), x = labeled max-product tree
    std::vector<double> tv_worst;       ///< max over starting states
    bool monotone = false;
    double power_deviation = 0.0;       ///< max |P^S - 1 mu| at the last power
};

/// Materializes G' (exact leverage, chosen lambda) and the chain M^t on its
/// spanning trees. Throws GuardExceeded when m' > 12, InvalidArgument when
/// t is not in [n, m'].
ChainReport chain_stationarity_check(const WeightedGraph& g, std::size_t t, std::size_t steps = 30,
                                     LambdaChoice lambda = LambdaChoice::LeverageNorm);

}  // namespace rst
