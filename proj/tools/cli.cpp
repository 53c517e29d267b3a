#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "report.hpp"
#include "rst/errors.hpp"
#include "rst/gadget.hpp"
#include "rst/generators.hpp"
#include "rst/ledger.hpp"
#include "rst/resistance.hpp"
#include "rst/sampling.hpp"
#include "suites.hpp"

namespace rst::cli {

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string join_args(const std::vector<std::string>& args) {
    std::string s;
    for (const auto& a : args) {
        if (!s.empty()) s += ' ';
        s += a;
    }
    return s;
}

std::uint64_t resolve_seed(const CLI::Option* opt, std::uint64_t given) {
    if (opt->count()) return given;
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t pos = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(item, &pos);
        } catch (const std::exception&) {
            throw InvalidArgument("not a nonnegative integer: " + item);
        }
        if (pos != item.size()) throw InvalidArgument("not a nonnegative integer: " + item);
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

std::vector<std::string> parse_word_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

// Tree files may be raw tree lines or full `sample` output; key lines are
// skipped.
SpanningTree read_first_tree(const std::string& path) {
    std::istringstream in(slurp(path));
    std::string line;
    while (std::getline(in, line)) {
        if (line.find(':') != std::string::npos) continue;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        return parse_tree(line);
    }
    throw InvalidArgument("no tree found in " + path);
}

struct WalkFlags {
    double epsilon = 0.05;
    double mixing_constant = 2.0;
    std::size_t k_fresh = 0;
    std::size_t iterations = 0;
    std::string lambda = "norm";
    std::string oracle = "sketch";
    double oracle_epsilon = 0.1;
    // One flag set may be attached to several subcommands.
    std::vector<CLI::Option*> k_opts;
    std::vector<CLI::Option*> it_opts;

    void attach(CLI::App* app) {
        app->add_option("--epsilon", epsilon, "Target TV accuracy of the walk")->capture_default_str();
        app->add_option("--C", mixing_constant, "Constant in M = C ln^3(n+2) ln(2/eps)")->capture_default_str();
        k_opts.push_back(app->add_option("--k-fresh", k_fresh, "Fresh copies per up-step (default 2n)"));
        it_opts.push_back(app->add_option("--iterations", iterations, "Override the number of walk iterations M"));
        app->add_option("--lambda", lambda, "Isotropic lambda: norm (sum of overestimates) or n")
            ->check(CLI::IsMember({"norm", "n"}))
            ->capture_default_str();
        app->add_option("--oracle", oracle, "Resistance oracle: sketch or exact")
            ->check(CLI::IsMember({"sketch", "exact"}))
            ->capture_default_str();
        app->add_option("--oracle-epsilon", oracle_epsilon, "Accuracy of the sketch oracle")->capture_default_str();
    }

    WalkConfig config() const {
        WalkConfig cfg;
        cfg.epsilon = epsilon;
        cfg.mixing_constant = mixing_constant;
        for (auto* o : k_opts) {
            if (o->count()) cfg.k_fresh = k_fresh;
        }
        for (auto* o : it_opts) {
            if (o->count()) cfg.iterations = iterations;
        }
        cfg.lambda = lambda == "n" ? LambdaChoice::VertexCount : LambdaChoice::LeverageNorm;
        cfg.oracle = oracle == "exact" ? OracleMode::Exact : OracleMode::Sketch;
        cfg.oracle_epsilon = oracle_epsilon;
        cfg.validate();
        return cfg;
    }
};

void describe_walk(Report& r, const WalkSampler& s) {
    const WalkConfig& cfg = s.config();
    r.add("config.epsilon", cfg.epsilon);
    r.add("config.C", cfg.mixing_constant);
    r.add("config.lambda", cfg.lambda == LambdaChoice::VertexCount ? "n" : "norm");
    r.add("config.oracle", cfg.oracle == OracleMode::Exact ? "exact" : "sketch");
    if (cfg.oracle == OracleMode::Sketch) r.add("config.oracle_epsilon", cfg.oracle_epsilon);
    r.add("walk.iterations", s.iterations());
    r.add("walk.k_fresh", s.k_fresh());
    r.add("walk.m_prime", s.view().m_prime());
    r.add("walk.lambda", s.view().lambda());
    r.add("walk.down_step_tolerance", s.down_step_tolerance());
    for (const auto& w : s.warnings()) r.add("warning", w);
}

int cmd_sample(const std::vector<std::string>& args, const std::string& graph_path, const std::string& method_text,
               std::uint64_t seed, std::size_t count, std::size_t jobs, bool timing, const WalkFlags& flags,
               std::ostream& out) {
    const auto method = parse_method(method_text);
    if (!method) throw InvalidArgument("unknown method: " + method_text);
    const WeightedGraph g = read_graph_file(graph_path);
    QueryLedger ledger;
    Report head;
    head.add("command", join_args(args));
    head.add("seed", seed);
    head.add("method", method_name(*method));
    head.add("count", count);
    head.add("graph.n", g.num_vertices());
    head.add("graph.m", g.num_edges());

    std::vector<SpanningTree> trees;
    const auto start = std::chrono::steady_clock::now();
    if (*method == Method::Walk) {
        const WalkConfig cfg = flags.config();
        Rng setup = make_stream(seed, kSetupStream);
        const WalkSampler sampler(g, cfg, setup, &ledger);
        describe_walk(head, sampler);
        trees = draw_walk_trees(sampler, count, seed, jobs);
    } else {
        trees = draw_trees(g, *method, count, seed, jobs, {}, &ledger);
    }
    const auto elapsed = std::chrono::steady_clock::now() - start;

    head.print(out);
    out << "trees:\n";
    for (const auto& t : trees) out << format_tree(t) << '\n';
    out << ledger.summary(timing);
    if (timing) {
        out << "wall_ms: " << std::chrono::duration<double, std::milli>(elapsed).count() << '\n';
    }
    return kExitOk;
}

int cmd_resist(const std::string& graph_path, const std::string& oracle, double eps, std::uint64_t seed,
               bool all_pairs, std::ostream& out) {
    const WeightedGraph g = read_graph_file(graph_path);
    ResistanceOracle o;
    if (oracle == "exact") {
        o = build_exact_oracle(g);
    } else {
        Rng rng = make_stream(seed, kSetupStream);
        o = build_sketch_oracle(g, eps, rng);
    }
    char buf[128];
    auto emit = [&](Vertex u, Vertex v) {
        std::snprintf(buf, sizeof buf, "%zu %zu %.17g\n", u, v, o.query(u, v));
        out << buf;
    };
    if (all_pairs) {
        for (Vertex u = 0; u < g.num_vertices(); ++u) {
            for (Vertex v = u + 1; v < g.num_vertices(); ++v) emit(u, v);
        }
    } else {
        for (const Edge& e : g.edges()) emit(e.u, e.v);
    }
    return kExitOk;
}

int cmd_bench(const std::string& family, const std::vector<std::size_t>& sizes,
              const std::vector<std::string>& methods, std::size_t samples, double density, std::uint64_t seed,
              std::size_t jobs, const WalkFlags& flags, std::ostream& out) {
    if (family != "dense" && family != "sparse") throw InvalidArgument("unknown graph family: " + family);
    std::vector<Method> parsed;
    for (const auto& m : methods) {
        const auto p = parse_method(m);
        if (!p) throw InvalidArgument("unknown method: " + m);
        parsed.push_back(*p);
    }
    const WalkConfig cfg = flags.config();
    out << "method,n,m,samples,iterations,wall_ms,classical_calls,charged_queries\n";
    for (std::size_t n : sizes) {
        if (n < 2) throw InvalidArgument("bench sizes must be at least 2");
        Rng graph_rng = make_stream(seed, n);
        const WeightedGraph g = family == "dense"
                                    ? random_connected_graph_p(n, density, 0.1, 10.0, graph_rng)
                                    : random_connected_graph(n, std::min(n * (n - 1) / 2, 4 * n), 0.1, 10.0, graph_rng);
        for (Method method : parsed) {
            QueryLedger ledger;
            std::size_t iterations = 0;
            const auto start = std::chrono::steady_clock::now();
            if (method == Method::Walk) {
                Rng setup = make_stream(seed, kSetupStream);
                const WalkSampler sampler(g, cfg, setup, &ledger);
                iterations = sampler.iterations();
                draw_walk_trees(sampler, samples, seed, jobs);
            } else {
                draw_trees(g, method, samples, seed, jobs, {}, &ledger);
            }
            const double ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            out << method_name(method) << ',' << n << ',' << g.num_edges() << ',' << samples << ',' << iterations
                << ',' << ms << ',' << ledger.total_classical_calls() << ',';
            if (method == Method::Walk) {
                char buf[64];
                std::snprintf(buf, sizeof buf, "%.17g", ledger.total_charged());
                out << buf;
            }
            out << '\n';
        }
    }
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Random spanning tree sampler with query accounting", "rst"};
    app.require_subcommand(1);

    // sample
    auto* sample = app.add_subcommand("sample", "Draw spanning trees");
    std::string graph_path, method = "walk";
    std::uint64_t seed = 0;
    std::size_t count = 1, jobs = 1;
    bool timing = false;
    WalkFlags walk_flags;
    sample->add_option("--graph", graph_path, "Edge-list file")->required();
    sample->add_option("--method", method, "walk, wilson or aldous")
        ->check(CLI::IsMember({"walk", "wilson", "aldous"}))
        ->capture_default_str();
    auto* sample_seed = sample->add_option("--seed", seed, "Random seed (drawn from entropy when omitted)");
    sample->add_option("--count", count, "Number of trees")->capture_default_str();
    sample->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    sample->add_flag("--timing", timing, "Append wall-clock figures to the report");
    walk_flags.attach(sample);

    // resist
    auto* resist = app.add_subcommand("resist", "Print effective resistances as \"u v R\" lines");
    std::string resist_graph, resist_oracle = "exact";
    double resist_eps = 0.1;
    std::uint64_t resist_seed = 0;
    bool all_pairs = false;
    resist->add_option("--graph", resist_graph, "Edge-list file")->required();
    resist->add_option("--oracle", resist_oracle, "exact or sketch")
        ->check(CLI::IsMember({"sketch", "exact"}))
        ->capture_default_str();
    resist->add_option("--epsilon", resist_eps, "Sketch accuracy")->capture_default_str();
    auto* resist_seed_opt = resist->add_option("--seed", resist_seed, "Sketch seed");
    resist->add_flag("--all-pairs", all_pairs, "Every vertex pair instead of the edge endpoints");

    // gadget
    auto* gadget = app.add_subcommand("gadget", "Build the search-matrix gadget graph");
    std::size_t rows = 0, cols = 0;
    bool refined = false;
    std::string matrix_path, matrix_out;
    std::uint64_t gadget_seed = 0;
    gadget->add_option("--rows", rows, "Matrix rows n");
    gadget->add_option("--cols", cols, "Matrix columns k");
    gadget->add_flag("--refined", refined, "Use weight 1/n^4 for zero entries");
    gadget->add_option("--matrix", matrix_path, "Matrix file (header \"n k\", then n rows of 0/1)");
    gadget->add_option("--matrix-out", matrix_out, "Write the matrix used to this file");
    auto* gadget_seed_opt = gadget->add_option("--seed", gadget_seed, "Seed for a random matrix");
    auto* recover = gadget->add_subcommand("recover", "Read the matrix back from a spanning tree");
    std::string tree_path;
    std::size_t rec_rows = 0, rec_cols = 0;
    recover->add_option("--tree", tree_path, "Tree file (raw tree lines or sample output)")->required();
    recover->add_option("--rows", rec_rows, "Matrix rows n")->required();
    recover->add_option("--cols", rec_cols, "Matrix columns k")->required();

    // verify
    auto* verify = app.add_subcommand("verify", "Run a verification suite");
    verify->require_subcommand(1);
    SuiteOptions so;
    WalkFlags verify_flags;
    std::vector<std::pair<CLI::App*, std::string>> suites;
    auto add_suite = [&](const std::string& name, const std::string& help) {
        auto* s = verify->add_subcommand(name, help);
        suites.emplace_back(s, name);
        s->add_option("--seed", so.seed, "Random seed (drawn from entropy when omitted)");
        s->add_option("--jobs", so.jobs, "Worker threads")->check(CLI::PositiveNumber);
        return s;
    };
    auto* v_dist = add_suite("dist", "TV between sampled and enumerated tree laws");
    v_dist->add_option("--graph", so.graph, "Edge-list file")->required();
    v_dist->add_option("--samples", so.samples, "Samples per method")->capture_default_str();
    v_dist->add_option("--method", so.method, "walk, wilson, aldous or all")
        ->check(CLI::IsMember({"walk", "wilson", "aldous", "all"}));
    v_dist->add_option("--threshold", so.threshold, "Largest accepted TV");
    verify_flags.attach(v_dist);
    auto* v_marg = add_suite("marginals", "Edge frequencies against w_e R_e");
    v_marg->add_option("--graph", so.graph, "Edge-list file")->required();
    v_marg->add_option("--samples", so.samples, "Samples");
    v_marg->add_option("--method", so.method, "walk, wilson or aldous")
        ->check(CLI::IsMember({"walk", "wilson", "aldous"}));
    v_marg->add_option("--min-fraction", so.min_fraction, "Required fraction of edges within 3 sigma");
    verify_flags.attach(v_marg);
    auto* v_iso = add_suite("iso", "Isotropic copy counts and per-copy marginals");
    v_iso->add_option("--graph", so.graph, "Edge-list file")->required();
    verify_flags.attach(v_iso);
    auto* v_multi = add_suite("multisample", "k-subset uniformity and first-batch success");
    v_multi->add_option("--max-n", so.max_n, "Largest domain for the chi-square sweep");
    v_multi->add_option("--runs", so.samples, "Draws per (N, k)");
    v_multi->add_option("--p-threshold", so.threshold, "Smallest accepted p-value");
    v_multi->add_option("--big-n", so.big_n, "Domain size of the batch test");
    v_multi->add_option("--big-k", so.big_k, "Subset size of the batch test");
    v_multi->add_option("--trials", so.trials, "Trials of the batch test");
    auto* v_mix = add_suite("mixing", "Marginal-L1 and TV against walk depth");
    v_mix->add_option("--graph", so.graph, "Edge-list file")->required();
    v_mix->add_option("--samples", so.samples, "Walks per grid point");
    v_mix->add_option("--grid", so.grid, "Comma-separated depths (default: doubling up to M)");
    verify_flags.attach(v_mix);
    auto* v_chain = add_suite("chain", "Explicit chain matrix on a tiny graph");
    v_chain->add_option("--graph", so.graph, "Edge-list file")->required();
    v_chain->add_option("--t", so.t, "Up-step target size (default min(m', 3n - 1))");
    v_chain->add_option("--steps", so.steps, "Powers of the chain to examine");
    v_chain->add_option("--lambda", so.lambda, "norm or n")->check(CLI::IsMember({"norm", "n"}));
    auto* v_gadget = add_suite("gadget", "Build, sample and recover search matrices");
    v_gadget->add_option("--rows", so.rows, "Matrix rows n")->required();
    v_gadget->add_option("--cols", so.cols, "Matrix columns k")->required();
    v_gadget->add_flag("--refined", so.refined, "Check the refined variant's recovery rate");
    v_gadget->add_option("--samples", so.samples, "Samples for the refined variant");
    v_gadget->add_option("--tolerance", so.tolerance, "Allowed gap to the exact recovery probability");
    verify_flags.attach(v_gadget);

    // bench
    auto* bench = app.add_subcommand("bench", "Wall-clock and charged-query table");
    std::string family = "dense", sizes_text = "50,100,200", methods_text = "walk,wilson";
    std::size_t bench_samples = 1, bench_jobs = 1;
    double density = 0.5;
    std::uint64_t bench_seed = 0;
    WalkFlags bench_flags;
    bench->add_option("--family", family, "dense or sparse random graphs")->capture_default_str();
    bench->add_option("--sizes", sizes_text, "Comma-separated vertex counts (may be empty)")->capture_default_str();
    bench->add_option("--methods", methods_text, "Comma-separated methods")->capture_default_str();
    bench->add_option("--samples", bench_samples, "Trees per row")->capture_default_str();
    bench->add_option("--density", density, "Edge probability of the dense family")->capture_default_str();
    bench->add_option("--jobs", bench_jobs, "Worker threads")->check(CLI::PositiveNumber);
    auto* bench_seed_opt = bench->add_option("--seed", bench_seed, "Random seed");
    bench_flags.attach(bench);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (sample->parsed()) {
            return cmd_sample(args, graph_path, method, resolve_seed(sample_seed, seed), count, jobs, timing,
                              walk_flags, out);
        }
        if (resist->parsed()) {
            return cmd_resist(resist_graph, resist_oracle, resist_eps, resolve_seed(resist_seed_opt, resist_seed),
                              all_pairs, out);
        }
        if (recover->parsed()) {
            const SearchMatrix m = recover_matrix(read_first_tree(tree_path), rec_rows, rec_cols);
            out << format_search_matrix(m);
            return kExitOk;
        }
        if (gadget->parsed()) {
            SearchMatrix m;
            if (!matrix_path.empty()) {
                m = parse_search_matrix(slurp(matrix_path));
                if ((rows && rows != m.rows()) || (cols && cols != m.cols())) {
                    throw InvalidArgument("matrix file shape disagrees with --rows/--cols");
                }
            } else {
                if (!rows || !cols) throw InvalidArgument("gadget needs --rows and --cols, or --matrix");
                const std::uint64_t s = resolve_seed(gadget_seed_opt, gadget_seed);
                if (!gadget_seed_opt->count()) err << "seed: " << s << '\n';
                Rng rng = make_stream(s, 0);
                m = random_search_matrix(rows, cols, rng);
            }
            if (!matrix_out.empty()) {
                std::ofstream f(matrix_out, std::ios::binary);
                if (!f) throw InvalidArgument("cannot write " + matrix_out);
                f << format_search_matrix(m);
            }
            out << serialize_graph(build_gadget(m, refined));
            return kExitOk;
        }
        if (bench->parsed()) {
            return cmd_bench(family, parse_size_list(sizes_text), parse_word_list(methods_text), bench_samples,
                             density, resolve_seed(bench_seed_opt, bench_seed), bench_jobs, bench_flags, out);
        }
        for (const auto& [sub, name] : suites) {
            if (!sub->parsed()) continue;
            const auto* seed_opt = sub->get_option("--seed");
            if (!seed_opt->count()) so.seed = resolve_seed(seed_opt, 0);
            so.walk = verify_flags.config();
            so.command = join_args(args);
            Report r;
            const bool ok = run_suite(name, so, r);
            r.print(out);
            return ok ? kExitOk : kExitVerifyFailed;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }
    return kExitInputError;
}

}  // namespace rst::cli
