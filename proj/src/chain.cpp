#include "rst/chain.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

#include "rst/errors.hpp"
#include "rst/exact_samplers.hpp"
#include "rst/resistance.hpp"

namespace rst {

namespace {

double binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0.0;
    double r = 1.0;
    for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return std::round(r);
}

void check_ground(std::size_t m) {
    if (m > kChainGroundLimit) {
        throw GuardExceeded("ground set of " + std::to_string(m) + " exceeds the explicit-chain limit of " +
                            std::to_string(kChainGroundLimit));
    }
}

std::unordered_map<std::uint32_t, std::size_t> index_map(const std::vector<std::uint32_t>& sets) {
    std::unordered_map<std::uint32_t, std::size_t> idx;
    for (std::size_t i = 0; i < sets.size(); ++i) idx.emplace(sets[i], i);
    return idx;
}

double tv_rows(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) { return 0.5 * (a - b).cwiseAbs().sum(); }

}  // namespace

std::vector<std::uint32_t> k_subsets(std::size_t m, std::size_t k) {
    check_ground(m);
    std::vector<std::uint32_t> out;
    if (k > m) return out;
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    while (true) {
        std::uint32_t mask = 0;
        for (std::size_t i : pick) mask |= 1u << i;
        out.push_back(mask);
        std::size_t i = k;
        while (i > 0 && pick[i - 1] == m - k + (i - 1)) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
    return out;
}

Eigen::MatrixXd down_operator(std::size_t m, std::size_t k, std::size_t l) {
    if (l > k || k > m) throw InvalidArgument("down operator needs l <= k <= m");
    const auto rows = k_subsets(m, k);
    const auto cols = k_subsets(m, l);
    const double value = 1.0 / binomial(k, l);
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c)
            if ((cols[c] & ~rows[r]) == 0) D(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = value;
    return D;
}

UpOperator up_operator(std::span<const double> mu, std::size_t m, std::size_t k, std::size_t l) {
    if (l > k || k > m) throw InvalidArgument("up operator needs l <= k <= m");
    const auto big = k_subsets(m, k);
    const auto small = k_subsets(m, l);
    if (mu.size() != big.size()) throw InvalidArgument("distribution must have one entry per k-subset");
    UpOperator up;
    up.matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(small.size()), static_cast<Eigen::Index>(big.size()));
    for (std::size_t r = 0; r < small.size(); ++r) {
        double denom = 0.0;
        for (std::size_t c = 0; c < big.size(); ++c)
            if ((small[r] & ~big[c]) == 0) denom += mu[c];
        if (!(denom > 0.0)) {
            up.unextendable_rows.push_back(r);
            continue;
        }
        for (std::size_t c = 0; c < big.size(); ++c)
            if ((small[r] & ~big[c]) == 0)
                up.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = mu[c] / denom;
    }
    return up;
}

Eigen::MatrixXd down_up_transition(std::span<const std::uint32_t> states, std::span<const double> mu, std::size_t m,
                                   std::size_t fresh) {
    check_ground(m);
    if (mu.size() != states.size()) throw InvalidArgument("one probability per state required");
    const auto s = static_cast<Eigen::Index>(states.size());
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(s, s);
    const std::uint32_t all = m == 32 ? ~0u : ((1u << m) - 1u);
    for (Eigen::Index from = 0; from < s; ++from) {
        const std::uint32_t cur = states[static_cast<std::size_t>(from)];
        const std::uint32_t outside = all & ~cur;
        const auto outside_count = static_cast<std::size_t>(std::popcount(outside));
        if (fresh > outside_count) throw InvalidArgument("not enough elements outside the state");
        // Enumerate fresh-subsets of `outside` via subsets of its positions.
        std::vector<std::uint32_t> positions;
        for (std::size_t b = 0; b < m; ++b)
            if (outside & (1u << b)) positions.push_back(1u << b);
        const auto choices = k_subsets(outside_count, fresh);
        const double per_choice = 1.0 / static_cast<double>(choices.size());
        for (std::uint32_t choice : choices) {
            std::uint32_t add = 0;
            for (std::size_t b = 0; b < outside_count; ++b)
                if (choice & (1u << b)) add |= positions[b];
            const std::uint32_t uni = cur | add;
            double z = 0.0;
            for (std::size_t j = 0; j < states.size(); ++j)
                if ((states[j] & ~uni) == 0) z += mu[j];
            for (std::size_t j = 0; j < states.size(); ++j)
                if ((states[j] & ~uni) == 0) P(from, static_cast<Eigen::Index>(j)) += per_choice * mu[j] / z;
        }
    }
    return P;
}

ChainReport chain_stationarity_check(const WeightedGraph& g, std::size_t t, std::size_t steps, LambdaChoice lambda) {
    const ResistanceOracle exact = build_exact_oracle(g);
    const IsotropicView view = build_isotropic_view(g, exact, lambda);
    const MultigraphView explicit_g = explicit_multigraph(view);
    const std::size_t m = explicit_g.num_copies();
    check_ground(m);
    const std::size_t n = g.num_vertices();
    if (t < n || t > m) {
        throw InvalidArgument("t must satisfy n <= t <= m' (got t = " + std::to_string(t) + ", m' = " +
                              std::to_string(m) + ")");
    }

    ChainReport r;
    r.ground_size = m;
    r.tree_size = n - 1;
    r.fresh = t - (n - 1);
    for (const auto& tree : enumerate_trees(explicit_g)) {
        std::uint32_t mask = 0;
        for (std::size_t c : tree.copies) mask |= 1u << c;
        r.states.push_back(mask);
        r.stationary.push_back(tree.probability);
    }
    r.transition = down_up_transition(r.states, r.stationary, m, r.fresh);

    const Eigen::Map<const Eigen::RowVectorXd> mu(r.stationary.data(), static_cast<Eigen::Index>(r.stationary.size()));
    r.stationarity_error = (mu * r.transition - mu).cwiseAbs().maxCoeff();

    // Start: the max-product tree with every edge on copy 1.
    const SpanningTree start_tree = max_product_spanning_tree(g);
    std::uint32_t start_mask = 0;
    for (EdgeId e : start_tree.edge_ids) start_mask |= 1u << view.domain().index_of({e, 1});
    const auto idx = index_map(r.states);
    const auto s = static_cast<Eigen::Index>(r.states.size());
    Eigen::RowVectorXd dist = Eigen::RowVectorXd::Zero(s);
    dist(static_cast<Eigen::Index>(idx.at(start_mask))) = 1.0;
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(s, s);
    r.monotone = true;
    for (std::size_t step = 0; step <= steps; ++step) {
        r.tv_from_start.push_back(tv_rows(dist, mu));
        double worst = 0.0;
        for (Eigen::Index x = 0; x < s; ++x) worst = std::max(worst, tv_rows(power.row(x), mu));
        r.tv_worst.push_back(worst);
        if (step > 0) {
            if (r.tv_from_start[step] > r.tv_from_start[step - 1] + 1e-12) r.monotone = false;
            if (r.tv_worst[step] > r.tv_worst[step - 1] + 1e-12) r.monotone = false;
        }
        dist = dist * r.transition;
        if (step < steps) power = power * r.transition;
    }
    Eigen::MatrixXd limit = Eigen::VectorXd::Ones(s) * mu;
    r.power_deviation = (power - limit).cwiseAbs().maxCoeff();
    return r;
}

}  // namespace rst
