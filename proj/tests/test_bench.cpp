#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

#include "copchase/bench.hpp"
#include "copchase/errors.hpp"
#include "test_support.hpp"

using namespace copchase;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

}  // namespace

TEST_CASE("gen_random_graph: n - 1 connected edges is a tree") {
    Graph g = gen_random_graph(4, Density::edges(3), true, 17);
    CHECK(g.edge_count() == 3);
    CHECK(is_connected(g));
    CHECK_FALSE(g.directed());
}

TEST_CASE("gen_random_graph: p = 1 is complete") {
    Graph g = gen_random_graph(10, Density::probability(1.0), false, 3);
    CHECK(g.edge_count() == 45);
    for (VertexId v = 0; v < 10; ++v) CHECK(g.out_adj(v).size() == 9);
}

TEST_CASE("gen_random_graph: connectivity and exact counts") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        REQUIRE(is_connected(gen_random_graph(50, Density::probability(0.1), true, seed)));
        Graph dense = gen_random_graph(30, Density::edges(400), true, seed);
        REQUIRE(dense.edge_count() == 400);
        REQUIRE(is_connected(dense));
        REQUIRE(gen_random_graph(40, Density::per_vertex(4), true, seed).edge_count() == 160);
        REQUIRE(gen_random_graph(40, Density::edges(10), false, seed).edge_count() == 10);
    }
}

TEST_CASE("gen_random_graph: infeasible densities") {
    CHECK_THROWS_AS(gen_random_graph(5, Density::edges(11), false, 0), ValidationError);
    CHECK_THROWS_AS(gen_random_graph(5, Density::edges(3), true, 0), ValidationError);
    CHECK_THROWS_AS(gen_random_graph(5, Density::probability(1.5), false, 0), ValidationError);
    CHECK_THROWS_AS(gen_random_graph(0, Density::probability(0.5), false, 0), EmptyInstanceError);
    CHECK(gen_random_graph(1, Density::probability(0.5), true, 0).vertex_count() == 1);
}

TEST_CASE("gen_random_graph is deterministic in its seed") {
    CHECK(gen_random_graph(60, Density::probability(0.2), true, 9) ==
          gen_random_graph(60, Density::probability(0.2), true, 9));
    CHECK_FALSE(gen_random_graph(60, Density::probability(0.2), true, 9) ==
                gen_random_graph(60, Density::probability(0.2), true, 10));
}

TEST_CASE("gen_random_gamble kinds") {
    Gamble uniform = gen_random_gamble(7, GambleKind::uniform, 0);
    for (std::size_t v = 0; v < 7; ++v) CHECK(uniform[v] == 1.0 / 7.0);

    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Gamble d = gen_random_gamble(25, GambleKind::dirichlet, seed);
        auto p = d.probabilities();
        REQUIRE(std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0) <= 1e-12);
        REQUIRE(std::all_of(p.begin(), p.end(), [](double x) { return x > 0.0; }));
        REQUIRE(d.mode() == GambleMode::strict);
    }

    Gamble sparse = gen_random_gamble(8, GambleKind::sparse_support, 4);
    auto sp = sparse.probabilities();
    CHECK(std::count_if(sp.begin(), sp.end(), [](double x) { return x > 0.0; }) == 2);
    CHECK(std::abs(std::accumulate(sp.begin(), sp.end(), 0.0) - 1.0) <= 1e-12);

    CHECK(gen_random_gamble(1, GambleKind::sparse_support, 0)[0] == 1.0);
    CHECK(gen_random_gamble(9, GambleKind::dirichlet, 5) == gen_random_gamble(9, GambleKind::dirichlet, 5));
}

TEST_CASE("Density labels round-trip") {
    for (auto d : {Density::probability(0.5), Density::edges(12), Density::per_vertex(4)}) {
        auto back = Density::parse(d.label());
        CHECK(back.kind == d.kind);
        CHECK(back.value == d.value);
    }
    CHECK(Density::per_vertex(4).label() == "m=4n");
    CHECK(Density::probability(0.5).label() == "p=0.5");
    CHECK_THROWS_AS(Density::parse("q=1"), ValidationError);
    CHECK_THROWS_AS(Density::parse("m=1.5"), ValidationError);
    CHECK_THROWS_AS(Density::parse("p=2"), ValidationError);
    CHECK(parse_gamble_kind("dirichlet") == GambleKind::dirichlet);
    CHECK_THROWS_AS(parse_gamble_kind("gaussian"), ValidationError);
}

TEST_CASE("run_benchmark on a small config") {
    BenchConfig config;
    config.sizes = {20};
    config.densities = {Density::probability(0.3)};
    config.gamble_kinds = {GambleKind::uniform};
    auto rows = run_benchmark(config);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].algorithm == Algorithm::iterative);
    CHECK(rows[1].algorithm == Algorithm::priority);
    for (const auto& r : rows) {
        CHECK(r.agreement == std::optional<bool>(true));
        CHECK(r.n == 20);
        CHECK(r.max_residual <= 1e-9);
        CHECK(r.wall_time_ns >= 0);
    }
    CHECK(rows[1].iterations == 20);

    config.algorithms = {Algorithm::priority};
    auto single = run_benchmark(config);
    REQUIRE(single.size() == 1);
    CHECK_FALSE(single[0].agreement.has_value());
    std::ostringstream csv;
    write_bench_csv(csv, single);
    auto lines = lines_of(csv.str());
    REQUIRE(lines.size() == 2);
    CHECK(lines[1].back() == ',');

    config.repetitions = 0;
    CHECK_THROWS_AS(run_benchmark(config), ValidationError);
}

TEST_CASE("run_benchmark is deterministic apart from timings") {
    BenchConfig config;
    config.sizes = {15, 30};
    config.densities = {Density::per_vertex(2), Density::probability(0.5)};
    config.gamble_kinds = {GambleKind::uniform, GambleKind::dirichlet, GambleKind::sparse_support};
    config.repetitions = 2;
    auto a = run_benchmark(config);
    auto b = run_benchmark(config);
    REQUIRE(a.size() == 2 * 2 * 3 * 2 * 2);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        b[i].wall_time_ns = a[i].wall_time_ns;
        REQUIRE(a[i].m == b[i].m);
        REQUIRE(a[i].iterations == b[i].iterations);
        REQUIRE(a[i].max_residual == b[i].max_residual);
        REQUIRE(a[i].agreement == b[i].agreement);
    }
}

TEST_CASE("uniform gamble on a large complete graph") {
    const std::size_t n = 500;
    Graph g = gen_random_graph(n, Density::probability(1.0), false, 0);
    Gamble uniform = gen_random_gamble(n, GambleKind::uniform, 0);
    for (auto algorithm : {Algorithm::iterative, Algorithm::priority}) {
        auto sol = solve(g, uniform, algorithm);
        for (auto t : sol.times) REQUIRE(std::abs(t.value() - double(n)) <= 1e-9 * n);
    }
}

TEST_CASE("bench CSV layout") {
    BenchConfig config;
    config.sizes = {10};
    config.densities = {Density::edges(20)};
    config.gamble_kinds = {GambleKind::dirichlet};
    auto rows = run_benchmark(config);
    std::ostringstream csv;
    write_bench_csv(csv, rows);
    auto lines = lines_of(csv.str());
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "n,m,gamble_mode,algorithm,wall_time_ns,iterations,max_residual,agreement");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        CHECK(std::count(lines[i].begin(), lines[i].end(), ',') == 7);
        CHECK(lines[i].starts_with("10,20,dirichlet,"));
        CHECK(lines[i].ends_with(",true"));
    }

    std::ostringstream summary;
    write_timing_summary(summary, rows);
    CHECK(summary.str().find("faster:") != std::string::npos);
}
