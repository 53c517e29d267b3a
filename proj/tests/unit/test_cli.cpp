#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "rst/gadget.hpp"
#include "rst/graph.hpp"

using namespace rst;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

class TempDir {
public:
    TempDir() {
        path_ = fs::temp_directory_path() / ("rst_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string write(const std::string& name, const std::string& content) const {
        const fs::path p = path_ / name;
        std::ofstream(p) << content;
        return p.string();
    }
    std::string path(const std::string& name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

std::vector<std::string> tree_lines(const std::string& out) {
    std::vector<std::string> lines;
    std::istringstream in(out);
    std::string line;
    bool in_trees = false;
    while (std::getline(in, line)) {
        if (line == "trees:") {
            in_trees = true;
            continue;
        }
        if (in_trees && line.find(':') != std::string::npos) break;
        if (in_trees) lines.push_back(line);
    }
    return lines;
}

const std::string kTriangle = "3 3\n0 1 1\n1 2 1\n0 2 1\n";
const std::string kK4 = "4 6\n0 1 1\n0 2 1\n0 3 1\n1 2 1\n1 3 1\n2 3 1\n";

}  // namespace

TEST_CASE("sample emits valid trees deterministically") {
    TempDir dir;
    const std::string tri = dir.write("tri.txt", kTriangle);
    const Result a = run({"sample", "--graph", tri, "--method", "wilson", "--count", "1", "--seed", "7"});
    CHECK(a.code == 0);
    const auto trees = tree_lines(a.out);
    REQUIRE(trees.size() == 1);
    CHECK(is_spanning_tree(parse_graph(kTriangle), parse_tree(trees[0]).edge_ids));
    CHECK(a.out.find("seed: 7\n") != std::string::npos);
    const Result b = run({"sample", "--graph", tri, "--method", "wilson", "--count", "1", "--seed", "7"});
    CHECK(a.out == b.out);

    const Result walk1 = run({"sample", "--graph", tri, "--count", "20", "--seed", "3", "--jobs", "2"});
    const Result walk2 = run({"sample", "--graph", tri, "--count", "20", "--seed", "3"});
    CHECK(walk1.code == 0);
    CHECK(tree_lines(walk1.out) == tree_lines(walk2.out));
    CHECK(walk1.out.find("ledger.iso_sample.charged_queries") != std::string::npos);
}

TEST_CASE("sample draws and prints a seed when none is given") {
    TempDir dir;
    const Result r = run({"sample", "--graph", dir.write("tri.txt", kTriangle), "--method", "aldous"});
    CHECK(r.code == 0);
    CHECK(r.out.find("seed: ") != std::string::npos);
}

TEST_CASE("walk on a gadget file returns the planted tree") {
    TempDir dir;
    const SearchMatrix m = SearchMatrix::from_dense({{0, 1, 0}, {0, 0, 1}, {0, 1, 0}});
    const std::string path = dir.write("m.txt", format_search_matrix(m));
    const Result g = run({"gadget", "--matrix", path});
    REQUIRE(g.code == 0);
    const std::string graph = dir.write("g.txt", g.out);
    const Result s = run({"sample", "--graph", graph, "--count", "5", "--seed", "1"});
    REQUIRE(s.code == 0);
    for (const auto& line : tree_lines(s.out)) CHECK(parse_tree(line) == planted_tree(m));

    const std::string sample_out = dir.write("s.txt", s.out);
    const Result rec = run({"gadget", "recover", "--tree", sample_out, "--rows", "3", "--cols", "3"});
    CHECK(rec.code == 0);
    CHECK(rec.out == format_search_matrix(m));
}

TEST_CASE("gadget generation") {
    const Result a = run({"gadget", "--rows", "2", "--cols", "3", "--seed", "4"});
    CHECK(a.code == 0);
    const WeightedGraph g = parse_graph(a.out);
    CHECK(g.num_vertices() == 6);
    CHECK(g.num_edges() == 9);
    CHECK(run({"gadget", "--rows", "2", "--cols", "3", "--seed", "4"}).out == a.out);
    const Result refined = run({"gadget", "--rows", "2", "--cols", "2", "--refined", "--seed", "4"});
    CHECK(refined.out.find("0.0625") != std::string::npos);
    CHECK(run({"gadget", "--rows", "2"}).code == 2);
}

TEST_CASE("resist prints u v R lines") {
    TempDir dir;
    const Result r = run({"resist", "--graph", dir.write("tri.txt", kTriangle)});
    CHECK(r.code == 0);
    std::istringstream in(r.out);
    std::size_t u, v, lines = 0;
    double R;
    while (in >> u >> v >> R) {
        CHECK(R == doctest::Approx(2.0 / 3.0));
        ++lines;
    }
    CHECK(lines == 3);
    const Result all = run({"resist", "--graph", dir.path("tri.txt"), "--all-pairs", "--oracle", "sketch", "--seed", "2"});
    CHECK(all.code == 0);
}

TEST_CASE("input errors exit with 2") {
    TempDir dir;
    CHECK(run({"sample", "--graph", dir.path("missing.txt")}).code == 2);
    const Result loop = run({"sample", "--graph", dir.write("bad.txt", "2 1\n0 0 1\n")});
    CHECK(loop.code == 2);
    CHECK(loop.err.find("line 2") != std::string::npos);
    CHECK(run({"sample", "--graph", dir.write("split.txt", "4 2\n0 1 1\n2 3 1\n")}).code == 2);
    CHECK(run({"verify", "nosuch"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"sample", "--graph", dir.path("bad.txt"), "--method", "quantum"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("verify suites") {
    TempDir dir;
    const std::string tri = dir.write("tri.txt", kTriangle);
    const std::string k4 = dir.write("k4.txt", kK4);

    const Result gadget = run({"verify", "gadget", "--rows", "3", "--cols", "3", "--seed", "1"});
    CHECK(gadget.code == 0);
    CHECK(gadget.out.find("result: pass") != std::string::npos);

    const Result chain = run({"verify", "chain", "--graph", tri});
    CHECK(chain.code == 0);
    CHECK(chain.out.find("result: pass") != std::string::npos);

    const Result dist = run({"verify", "dist", "--graph", k4, "--samples", "50000", "--seed", "5"});
    CHECK(dist.code == 0);
    CHECK(dist.out.find("walk.tv: ") != std::string::npos);

    const Result iso = run({"verify", "iso", "--graph", k4, "--seed", "5"});
    CHECK(iso.code == 0);

    const Result marg = run({"verify", "marginals", "--graph", k4, "--samples", "20000", "--seed", "5"});
    CHECK(marg.code == 0);

    const Result multi = run({"verify", "multisample", "--max-n", "4", "--runs", "20000", "--trials", "2000", "--seed", "5"});
    CHECK(multi.code == 0);

    const Result mix = run({"verify", "mixing", "--graph", k4, "--samples", "4000", "--seed", "5"});
    CHECK(mix.code == 0);
    CHECK(mix.out.find("series: iterations,tv,marginal_l1,noise_mean,noise_sd") != std::string::npos);

    // An impossible threshold turns the verdict into exit code 1.
    const Result strict = run({"verify", "dist", "--graph", tri, "--samples", "100", "--method", "wilson",
                               "--threshold", "1e-9", "--seed", "5"});
    CHECK(strict.code == 1);
}

TEST_CASE("bench table") {
    const Result empty = run({"bench", "--sizes", "", "--seed", "1"});
    CHECK(empty.code == 0);
    CHECK(empty.out == "method,n,m,samples,iterations,wall_ms,classical_calls,charged_queries\n");

    const Result r = run({"bench", "--sizes", "8,12", "--methods", "walk,wilson", "--oracle", "exact", "--seed", "1"});
    CHECK(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        if (line.rfind("wilson,", 0) == 0) CHECK(line.back() == ',');
        if (line.rfind("walk,", 0) == 0) CHECK(line.back() != ',');
    }
    CHECK(rows == 4);
}
