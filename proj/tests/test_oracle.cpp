#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "copchase/errors.hpp"
#include "copchase/oracle.hpp"
#include "test_support.hpp"

using namespace copchase;
using copchase::testing::chain_instance;
using copchase::testing::same_time;

namespace {

// Second route to fixed-strategy times: decide finiteness by walking the
// strategy, then solve (I − diag(1 − p)·P_π)·T = 1 on the finite vertices by
// Gaussian elimination.
std::vector<ChaseTime> linear_solve_strategy(const Gamble& gamble, const Strategy& strategy) {
    const std::size_t n = strategy.size();
    std::vector<bool> finite(n, false);
    for (VertexId v = 0; v < n; ++v) {
        VertexId x = v;
        bool ok = false;
        for (std::size_t step = 0; step <= 2 * n && !ok; ++step) {
            // A sure capture, or a cycle that carries some probability mass.
            if (gamble[x] == 1.0) ok = true;
            if (step >= n && gamble[x] > 0.0) ok = true;
            x = strategy[x];
        }
        finite[v] = ok;
    }

    std::vector<VertexId> ids;
    std::vector<std::size_t> row_of(n, 0);
    for (VertexId v = 0; v < n; ++v)
        if (finite[v]) {
            row_of[v] = ids.size();
            ids.push_back(v);
        }
    const std::size_t k = ids.size();
    std::vector<std::vector<double>> a(k, std::vector<double>(k + 1, 0.0));
    for (std::size_t r = 0; r < k; ++r) {
        VertexId v = ids[r];
        a[r][r] += 1.0;
        a[r][k] = 1.0;
        if (gamble[v] < 1.0) {
            REQUIRE(finite[strategy[v]]);
            a[r][row_of[strategy[v]]] -= 1.0 - gamble[v];
        }
    }
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t pivot = c;
        for (std::size_t r = c + 1; r < k; ++r)
            if (std::abs(a[r][c]) > std::abs(a[pivot][c])) pivot = r;
        std::swap(a[c], a[pivot]);
        for (std::size_t r = 0; r < k; ++r) {
            if (r == c) continue;
            double f = a[r][c] / a[c][c];
            for (std::size_t j = c; j <= k; ++j) a[r][j] -= f * a[c][j];
        }
    }
    std::vector<ChaseTime> times(n, ChaseTime::infinite());
    for (std::size_t r = 0; r < k; ++r) times[ids[r]] = ChaseTime(a[r][k] / a[r][r]);
    return times;
}

Graph path_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (VertexId v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
    return build_graph(false, n, edges);
}

Graph complete_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (VertexId u = 0; u < n; ++u)
        for (VertexId v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    return build_graph(false, n, edges);
}

}  // namespace

TEST_CASE("evaluate_stationary_strategy on the chain") {
    auto chain = chain_instance();
    auto stay = evaluate_stationary_strategy(chain.graph, chain.gamble, Strategy::stay(4));
    CHECK(stay.times[0].value() == doctest::Approx(10.0 / 3.0).epsilon(1e-15));
    CHECK(stay.times[1].value() == doctest::Approx(10.0 / 7.0).epsilon(1e-15));
    CHECK(stay.times[2].is_infinite());
    CHECK(stay.strategy == Strategy::stay(4));

    auto move = evaluate_stationary_strategy(chain.graph, chain.gamble, Strategy{{1, 1, 2, 3}});
    CHECK(std::abs(move.times[0].value() - 2.0) <= 1e-12);
}

TEST_CASE("evaluate_stationary_strategy on a two-cycle") {
    // x = 1 + 0.5·(1 + 0.5·x)  ⇒  x = 2.
    std::vector<Edge> edge{{0, 1}};
    Graph g = build_graph(false, 2, edge);
    std::vector<double> half{0.5, 0.5};
    Gamble gamble = validate_gamble(g, half);
    auto eval = evaluate_stationary_strategy(g, gamble, Strategy{{1, 0}});
    CHECK(std::abs(eval.times[0].value() - 2.0) <= 1e-12);
    CHECK(std::abs(eval.times[1].value() - 2.0) <= 1e-12);
}

TEST_CASE("cycles with and without probability mass") {
    // Cycle 0 → 1 → 2 → 0 with p = (0, 0.5, 0): T(0) = 1 + T(1), T(1) = 1 + 0.5·T(2),
    // T(2) = 1 + T(0) ⇒ T(1) = 1 + 0.5·(2 + T(1)) ⇒ T(1) = 4, T(0) = 5, T(2) = 6.
    Graph k3 = complete_graph(3);
    std::vector<double> p{0.0, 0.5, 0.0};
    Gamble gamble = validate_gamble(k3, p, GambleMode::permissive);
    auto eval = evaluate_stationary_strategy(k3, gamble, Strategy{{1, 2, 0}});
    CHECK(std::abs(eval.times[0].value() - 5.0) <= 1e-12);
    CHECK(std::abs(eval.times[1].value() - 4.0) <= 1e-12);
    CHECK(std::abs(eval.times[2].value() - 6.0) <= 1e-12);

    // A cycle through zero-probability vertices never captures; a sure-capture
    // vertex feeding into it still takes exactly one round.
    std::vector<double> q{0.0, 0.0, 1.0};
    Gamble sure = validate_gamble(k3, q);
    auto lost = evaluate_stationary_strategy(k3, sure, Strategy{{1, 0, 0}});
    CHECK(lost.times[0].is_infinite());
    CHECK(lost.times[1].is_infinite());
    CHECK(lost.times[2].value() == 1.0);
}

TEST_CASE("evaluate_stationary_strategy rejects moves outside N(v)") {
    auto chain = chain_instance();
    CHECK_THROWS_AS(evaluate_stationary_strategy(chain.graph, chain.gamble, Strategy{{3, 1, 2, 3}}), ValidationError);
}

TEST_CASE("property: closed-form evaluation matches a linear solve") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        auto inst = copchase::testing::random_instance(9, 300 + seed);
        Rng rng(seed);
        Strategy s;
        for (VertexId v = 0; v < inst.graph.vertex_count(); ++v) {
            auto nv = closed_neighborhood(inst.graph, v);
            s.next.push_back(nv[uniform_index(rng, nv.size())]);
        }
        auto closed_form = evaluate_stationary_strategy(inst.graph, inst.gamble, s);
        auto linear = linear_solve_strategy(inst.gamble, s);
        for (VertexId v = 0; v < inst.graph.vertex_count(); ++v) {
            CAPTURE(seed);
            CAPTURE(v);
            REQUIRE(same_time(closed_form.times[v], linear[v], 1e-9 * std::max(1.0, linear[v].value())));
        }
    }
}

TEST_CASE("enumeration counts and order") {
    CHECK(enumerate_strategies(build_graph(true, 1, {})).size() == 1);
    CHECK(enumerate_strategies(path_graph(2)).size() == 4);

    auto all = enumerate_strategies(path_graph(4));
    CHECK(all.size() == 2 * 3 * 3 * 2);
    CHECK(strategy_count(path_graph(4)) == std::optional<std::uint64_t>(36));
    CHECK(all.front() == Strategy{{0, 0, 1, 2}});
    CHECK(all.back() == Strategy{{1, 2, 3, 3}});
    CHECK(std::is_sorted(all.begin(), all.end(), [](const Strategy& a, const Strategy& b) { return a.next < b.next; }));
    CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
}

TEST_CASE("enumeration cap") {
    Graph k12 = complete_graph(12);
    try {
        StrategyEnumerator it(k12);
        FAIL("expected the cap to trip");
    } catch (const InstanceTooLargeError& e) {
        CHECK(e.count() == std::optional<std::uint64_t>(8916100448256ULL));  // 12^12
        CHECK(std::string(e.what()).find("8916100448256") != std::string::npos);
    }
    CHECK_THROWS_AS(enumerate_strategies(path_graph(4), 35), InstanceTooLargeError);
    CHECK_NOTHROW(enumerate_strategies(path_graph(4), 36));
    CHECK_FALSE(strategy_count(complete_graph(40)).has_value());
}

TEST_CASE("oracle_optimal examples") {
    auto chain = chain_instance();
    auto result = oracle_optimal(chain.graph, chain.gamble);
    CHECK(result.strategies_evaluated == 36);
    std::vector<double> expected{2.0, 10.0 / 7.0, 17.0 / 7.0, 24.0 / 7.0};
    for (VertexId v = 0; v < 4; ++v) CHECK(std::abs(result.times[v].value() - expected[v]) <= 1e-12);

    auto single = copchase::testing::single_vertex_instance();
    CHECK(oracle_optimal(single.graph, single.gamble).times[0].value() == 1.0);

    Graph k3 = complete_graph(3);
    std::vector<double> third(3, 1.0 / 3.0);
    auto k3_result = oracle_optimal(k3, validate_gamble(k3, third));
    for (auto t : k3_result.times) CHECK(std::abs(t.value() - 3.0) <= 1e-12);
}

TEST_CASE("property: every enumerated strategy satisfies its own recurrence") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        auto inst = copchase::testing::random_instance(5, 900 + seed);
        if (strategy_count(inst.graph).value_or(~0ULL) > 5000) continue;
        StrategyEnumerator it(inst.graph);
        std::uint64_t seen = 0;
        do {
            ++seen;
            auto eval = evaluate_stationary_strategy(inst.graph, inst.gamble, it.current());
            for (VertexId v = 0; v < inst.graph.vertex_count(); ++v)
                REQUIRE(same_time(eval.times[v], chase_step(inst.gamble[v], eval.times[it.current()[v]]),
                                  1e-9 * std::max(1.0, eval.times[v].value())));
        } while (it.advance());
        REQUIRE(seen == it.total());
    }
}

TEST_CASE("property: oracle agrees with both solvers") {
    int compared = 0;
    for (std::uint64_t seed = 0; compared < 150; ++seed) {
        auto inst = copchase::testing::random_instance(6, 50'000 + seed);
        if (strategy_count(inst.graph).value_or(~0ULL) > 100'000) continue;
        ++compared;
        auto oracle = oracle_optimal(inst.graph, inst.gamble);
        CAPTURE(seed);
        REQUIRE(max_time_difference(oracle.times, solve_iterative(inst.graph, inst.gamble).times) <= 1e-9);
        REQUIRE(max_time_difference(oracle.times, solve_priority(inst.graph, inst.gamble).times) <= 1e-9);
        auto best = evaluate_stationary_strategy(inst.graph, inst.gamble, oracle.best);
        REQUIRE(max_time_difference(best.times, oracle.times) <= 1e-9);
    }
}
