#include "suites.hpp"

#include <bit>
#include <cmath>
#include <unordered_map>

#include "rst/chain.hpp"
#include "rst/errors.hpp"
#include "rst/exact_samplers.hpp"
#include "rst/gadget.hpp"
#include "rst/multisample.hpp"
#include "rst/sampling.hpp"
#include "rst/verify.hpp"

namespace rst::cli {

namespace {

const char* verdict(bool ok) { return ok ? "pass" : "fail"; }

std::size_t or_default(std::size_t v, std::size_t d) { return v ? v : d; }

std::vector<std::size_t> parse_grid(const std::string& text) {
    std::vector<std::size_t> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string item = text.substr(pos, comma - pos);
        if (!item.empty()) {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(item, &used);
            if (used != item.size()) throw InvalidArgument("bad grid entry: " + item);
            out.push_back(static_cast<std::size_t>(v));
        }
        pos = comma + 1;
    }
    return out;
}

void header(Report& r, const SuiteOptions& o, const std::string& suite) {
    r.add("command", o.command);
    r.add("suite", suite);
    r.add("seed", o.seed);
}

bool suite_dist(const SuiteOptions& o, Report& r) {
    const WeightedGraph g = read_graph_file(o.graph);
    const std::size_t samples = or_default(o.samples, 50000);
    const double threshold = o.threshold > 0.0 ? o.threshold : 0.02;
    const Distribution reference = reference_distribution(g);
    r.add("graph.n", g.num_vertices());
    r.add("graph.m", g.num_edges());
    r.add("support", reference.size());
    r.add("samples", samples);
    r.add("threshold", threshold);
    std::vector<Method> methods;
    if (o.method.empty() || o.method == "all") {
        methods = {Method::Walk, Method::Wilson, Method::Aldous};
    } else {
        methods = {*parse_method(o.method)};
    }
    bool ok = true;
    for (Method m : methods) {
        EmpiricalDistribution emp;
        for (const auto& t : draw_trees(g, m, samples, o.seed, o.jobs, o.walk)) emp.add(t);
        const Distribution d = emp.normalized();
        const double tv = tv_distance(d, reference);
        const std::string key = std::string(method_name(m));
        r.add(key + ".tv", tv);
        r.add(key + ".kl", kl_divergence(d, reference));
        r.add(key + ".result", verdict(tv < threshold));
        ok = ok && tv < threshold;
    }
    r.add("result", verdict(ok));
    return ok;
}

bool suite_marginals(const SuiteOptions& o, Report& r) {
    const WeightedGraph g = read_graph_file(o.graph);
    const std::size_t samples = or_default(o.samples, 20000);
    const Method method = o.method.empty() ? Method::Walk : *parse_method(o.method);
    EmpiricalDistribution emp;
    for (const auto& t : draw_trees(g, method, samples, o.seed, o.jobs, o.walk)) emp.add(t);
    const ResistanceOracle exact = build_exact_oracle(g);
    const MarginalReport rep = marginal_check(emp, g, exact);
    r.add("graph.n", g.num_vertices());
    r.add("graph.m", g.num_edges());
    r.add("method", method_name(method));
    r.add("samples", samples);
    r.add("frequency_sum", rep.frequency_sum);
    r.add("l1_error", rep.l1_error);
    r.add("l1_noise_mean", rep.l1_noise_mean);
    r.add("l1_noise_sd", rep.l1_noise_sd);
    r.add("fraction_within_3sigma", rep.fraction_within_3sigma);
    for (const auto& e : rep.edges) {
        if (e.flagged) r.add("flagged_edge", std::to_string(e.edge) + " z=" + std::to_string(e.z));
    }
    const bool ok = rep.fraction_within_3sigma >= o.min_fraction;
    r.add("result", verdict(ok));
    return ok;
}

bool suite_iso(const SuiteOptions& o, Report& r) {
    const WeightedGraph g = read_graph_file(o.graph);
    ResistanceOracle oracle;
    if (o.walk.oracle == OracleMode::Exact) {
        oracle = build_exact_oracle(g);
    } else {
        Rng rng = make_stream(o.seed, kSetupStream);
        oracle = build_sketch_oracle(g, o.walk.oracle_epsilon, rng);
    }
    const IsotropicView view = build_isotropic_view(g, oracle, o.walk.lambda);
    const MarginalBoundReport rep = marginal_bound_check(view);
    r.add("graph.n", g.num_vertices());
    r.add("graph.m", g.num_edges());
    r.add("lambda", view.lambda());
    r.add("leverage_norm", view.leverage_norm());
    r.add("m_prime", rep.m_prime);
    r.add("m_prime_bound", rep.m_prime_bound);
    r.add("max_copy_marginal", rep.max_marginal);
    r.add("copy_marginal_bound", rep.bound);
    for (const auto& w : view.warnings()) r.add("warning", w);
    const bool ok = rep.m_prime_ok && rep.marginal_ok;
    r.add("result", verdict(ok));
    return ok;
}

bool suite_multisample(const SuiteOptions& o, Report& r) {
    const std::size_t runs = or_default(o.samples, 100000);
    const double p_min = o.threshold > 0.0 ? o.threshold : 1e-3;
    r.add("runs", runs);
    r.add("p_threshold", p_min);
    bool ok = true;
    double worst_p = 1.0;
    Rng rng = make_stream(o.seed, 0);
    for (std::size_t n = 1; n <= o.max_n; ++n) {
        const std::vector<std::uint32_t> counts_q(n, 1);
        const CopyDomain domain(counts_q);
        for (std::size_t k = 0; k <= n; ++k) {
            const auto subsets = k_subsets(n, k);
            if (subsets.size() < 2) continue;
            std::unordered_map<std::uint32_t, std::size_t> cell;
            for (std::size_t i = 0; i < subsets.size(); ++i) cell[subsets[i]] = i;
            std::vector<std::uint64_t> counts(subsets.size(), 0);
            for (std::size_t run = 0; run < runs; ++run) {
                std::uint32_t mask = 0;
                for (const auto& l : k_subset_sample(domain, k, rng)) mask |= 1u << l.e;
                ++counts.at(cell.at(mask));
            }
            const ChiSquareResult chi = chi_square_uniform(counts);
            worst_p = std::min(worst_p, chi.p_value);
            const bool pass = chi.p_value > p_min;
            r.add("chi2.N" + std::to_string(n) + ".k" + std::to_string(k),
                  std::to_string(chi.p_value) + (pass ? "" : " fail"));
            ok = ok && pass;
        }
    }
    r.add("chi2.min_p", worst_p);

    const std::vector<std::uint32_t> big(o.big_n, 1);
    const CopyDomain big_domain(big);
    std::size_t retried = 0;
    Rng batch_rng = make_stream(o.seed, 1);
    for (std::size_t i = 0; i < o.trials; ++i) {
        if (k_subset_sample_detailed(big_domain, o.big_k, batch_rng).batches > 1) ++retried;
    }
    const double rate = o.trials ? static_cast<double>(retried) / static_cast<double>(o.trials) : 0.0;
    r.add("batch.N", o.big_n);
    r.add("batch.k", o.big_k);
    r.add("batch.oversample", oversample_count(o.big_k));
    r.add("batch.first_failure_rate", rate);
    ok = ok && rate < 1.0 / 3.0;
    r.add("result", verdict(ok));
    return ok;
}

bool suite_mixing(const SuiteOptions& o, Report& r) {
    const WeightedGraph g = read_graph_file(o.graph);
    const std::size_t samples = or_default(o.samples, 2000);
    const std::size_t M = o.walk.iterations.value_or(
        default_iterations(g.num_vertices(), o.walk.epsilon, o.walk.mixing_constant));
    std::vector<std::size_t> grid = parse_grid(o.grid);
    if (grid.empty()) {
        grid.push_back(0);
        for (std::size_t d = 1; d < M; d *= 2) grid.push_back(d);
        grid.push_back(M);
    }
    WalkConfig cfg = o.walk;
    cfg.iterations = M;
    const MixingCurve curve = mixing_curve(g, cfg, grid, samples, o.seed, o.jobs);
    const auto plateau = plateau_depth(curve);
    r.add("graph.n", g.num_vertices());
    r.add("graph.m", g.num_edges());
    r.add("samples", samples);
    r.add("M", M);
    r.raw("series: iterations,tv,marginal_l1,noise_mean,noise_sd");
    for (const auto& p : curve.points) {
        std::string line = std::to_string(p.iterations) + "," + (p.tv ? std::to_string(*p.tv) : "") + "," +
                           std::to_string(p.marginal_l1) + "," + std::to_string(p.l1_noise_mean) + "," +
                           std::to_string(p.l1_noise_sd);
        r.raw(line);
    }
    if (plateau) r.add("plateau", *plateau);
    else r.add("plateau", "none");
    const bool ok = plateau && *plateau <= M;
    r.add("result", verdict(ok));
    return ok;
}

bool suite_chain(const SuiteOptions& o, Report& r) {
    const WeightedGraph g = read_graph_file(o.graph);
    const LambdaChoice lambda = o.lambda == "n" ? LambdaChoice::VertexCount : LambdaChoice::LeverageNorm;
    std::size_t t = o.t;
    if (t == 0) {
        const ResistanceOracle exact = build_exact_oracle(g);
        const IsotropicView view = build_isotropic_view(g, exact, lambda);
        t = std::min(view.m_prime(), 3 * g.num_vertices() - 1);
    }
    const ChainReport rep = chain_stationarity_check(g, t, o.steps, lambda);
    r.add("graph.n", g.num_vertices());
    r.add("graph.m", g.num_edges());
    r.add("m_prime", rep.ground_size);
    r.add("t", t);
    r.add("fresh", rep.fresh);
    r.add("states", rep.states.size());
    r.add("stationarity_error", rep.stationarity_error);
    r.add("monotone", rep.monotone ? "yes" : "no");
    r.add("tv_step1", rep.tv_from_start.size() > 1 ? rep.tv_from_start[1] : 0.0);
    r.add("tv_last", rep.tv_from_start.empty() ? 0.0 : rep.tv_from_start.back());
    const bool ok = rep.stationarity_error < 1e-10 && rep.monotone;
    r.add("result", verdict(ok));
    return ok;
}

bool suite_gadget(const SuiteOptions& o, Report& r) {
    r.add("rows", o.rows);
    r.add("cols", o.cols);
    bool ok = true;
    if (!o.refined) {
        const auto matrices = all_search_matrices(o.rows, o.cols);
        std::size_t enum_ok = 0, round_trip_ok = 0;
        for (std::size_t i = 0; i < matrices.size(); ++i) {
            const SearchMatrix& m = matrices[i];
            const WeightedGraph g = build_gadget(m, false);
            const auto trees = enumerate_trees(g);
            if (trees.size() == 1 && trees[0].tree == planted_tree(m) && std::abs(trees[0].probability - 1.0) < 1e-12) {
                ++enum_ok;
            }
            const auto sampled = draw_trees(g, Method::Walk, 1, o.seed + i, 1, o.walk);
            if (recover_matrix(sampled[0], o.rows, o.cols) == m) ++round_trip_ok;
        }
        r.add("matrices", matrices.size());
        r.add("enumeration_planted", enum_ok);
        r.add("round_trip", round_trip_ok);
        ok = enum_ok == matrices.size() && round_trip_ok == matrices.size();
    } else {
        const std::size_t samples = or_default(o.samples, 1000);
        Rng rng = make_stream(o.seed, kSetupStream - 1);
        const SearchMatrix m = random_search_matrix(o.rows, o.cols, rng);
        const WeightedGraph g = build_gadget(m, true);
        const double exact = refined_recovery_probability(m);
        std::size_t hits = 0, failures = 0;
        for (const auto& t : draw_trees(g, Method::Walk, samples, o.seed, o.jobs, o.walk)) {
            try {
                if (recover_matrix(t, o.rows, o.cols) == m) ++hits;
            } catch (const RecoveryError&) {
                ++failures;
            }
        }
        const double freq = static_cast<double>(hits) / static_cast<double>(samples);
        r.add("samples", samples);
        r.add("exact_probability", exact);
        r.add("recovery_frequency", freq);
        r.add("degree_failures", failures);
        r.add("tolerance", o.tolerance);
        ok = std::abs(freq - exact) <= o.tolerance;
    }
    r.add("result", verdict(ok));
    return ok;
}

}  // namespace

bool run_suite(const std::string& name, const SuiteOptions& o, Report& r) {
    header(r, o, name);
    if (name == "dist") return suite_dist(o, r);
    if (name == "marginals") return suite_marginals(o, r);
    if (name == "iso") return suite_iso(o, r);
    if (name == "multisample") return suite_multisample(o, r);
    if (name == "mixing") return suite_mixing(o, r);
    if (name == "chain") return suite_chain(o, r);
    if (name == "gadget") return suite_gadget(o, r);
    throw InvalidArgument("unknown suite: " + name);
}

}  // namespace rst::cli
