#include "copchase/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "copchase/errors.hpp"
#include "copchase/indexed_heap.hpp"

namespace copchase {
namespace {

struct Argmin {
    ChaseTime time = ChaseTime::infinite();
    VertexId vertex = 0;
};

// Minimum of times over N(v). N(v) is scanned in ascending id order and only a
// strictly smaller value replaces the incumbent, so ties keep the smallest id.
Argmin min_over_closed_neighborhood(const Graph& g, VertexId v, std::span<const ChaseTime> times) {
    Argmin best{times[v], v};
    for (VertexId u : g.out_adj(v)) {
        if (times[u] < best.time || (times[u] == best.time && u < best.vertex)) best = {times[u], u};
    }
    return best;
}

void check_length(const Graph& g, std::size_t size, const char* what) {
    if (size != g.vertex_count())
        throw ValidationError(std::string(what) + " has " + std::to_string(size) + " entries for " +
                              std::to_string(g.vertex_count()) + " vertices");
}

std::vector<ChaseTime> stay_forever_times(const Gamble& gamble) {
    std::vector<ChaseTime> times(gamble.size());
    for (VertexId v = 0; v < gamble.size(); ++v) times[v] = evaluate_stay_forever(gamble, v);
    return times;
}

// Single relaxation round into caller-owned buffers; returns whether any
// vertex strictly improved.
bool relax_all(const Graph& g, const Gamble& gamble, std::span<const ChaseTime> prev, std::span<ChaseTime> next,
               std::span<std::optional<VertexId>> improved) {
    bool changed = false;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        Argmin best = min_over_closed_neighborhood(g, v, prev);
        ChaseTime candidate = chase_step(gamble[v], best.time);
        if (improves(candidate, prev[v])) {
            next[v] = candidate;
            improved[v] = best.vertex;
            changed = true;
        } else {
            next[v] = prev[v];
            improved[v].reset();
        }
    }
    return changed;
}

}  // namespace

Strategy Strategy::stay(std::size_t n) {
    Strategy s;
    s.next.resize(n);
    for (VertexId v = 0; v < n; ++v) s.next[v] = v;
    return s;
}

void validate_strategy(const Graph& g, const Strategy& strategy) {
    check_length(g, strategy.size(), "strategy");
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        VertexId u = strategy[v];
        if (u == v) continue;
        auto adj = g.out_adj(v);
        if (!std::binary_search(adj.begin(), adj.end(), u))
            throw ValidationError("strategy moves from '" + g.label(v) + "' to " +
                                  (u < g.vertex_count() ? "'" + g.label(u) + "'" : "id " + std::to_string(u)) +
                                  ", which is not in its closed neighborhood");
    }
}

std::string_view to_string(Algorithm algorithm) {
    switch (algorithm) {
    case Algorithm::iterative: return "iterative";
    case Algorithm::priority: return "priority";
    }
    return "unknown";
}

ChaseTime evaluate_stay_forever(const Gamble& gamble, VertexId v) {
    if (v >= gamble.size()) throw ValidationError("vertex id " + std::to_string(v) + " out of range");
    double p = gamble[v];
    return p > 0.0 ? ChaseTime(1.0 / p) : ChaseTime::infinite();
}

BellmanUpdate bellman_update(const Graph& g, const Gamble& gamble, std::span<const ChaseTime> prev) {
    check_length(g, prev.size(), "time vector");
    BellmanUpdate out;
    out.next.resize(prev.size());
    out.improved.resize(prev.size());
    out.changed = relax_all(g, gamble, prev, out.next, out.improved);
    return out;
}

Solution solve_iterative(const Graph& g, const Gamble& gamble, const RoundObserver& observer) {
    check_length(g, gamble.size(), "gamble");
    const std::size_t n = g.vertex_count();

    Solution sol;
    sol.algorithm = Algorithm::iterative;
    sol.strategy = Strategy::stay(n);
    std::vector<ChaseTime> current = stay_forever_times(gamble);
    std::vector<ChaseTime> next(n);
    std::vector<std::optional<VertexId>> improved(n);

    for (;;) {
        bool changed = relax_all(g, gamble, current, next, improved);
        ++sol.iterations;
        for (VertexId v = 0; v < n; ++v)
            if (improved[v]) sol.strategy.next[v] = *improved[v];
        current.swap(next);
        if (observer) observer(sol.iterations, current);
        if (!changed) break;
        // Every shortest chase path is simple, so the values are final after
        // n rounds and round n + 1 cannot change anything.
        if (sol.iterations > n + 1)
            throw InvariantViolation("iterative solver still improving after " + std::to_string(sol.iterations) +
                                     " rounds on " + std::to_string(n) + " vertices");
    }

    sol.times = std::move(current);
    sol.max_residual = bellman_residual(g, gamble, sol.times, ResidualScope::finite_times);
    return sol;
}

Solution solve_priority(const Graph& g, const Gamble& gamble) {
    check_length(g, gamble.size(), "gamble");
    const std::size_t n = g.vertex_count();

    Solution sol;
    sol.algorithm = Algorithm::priority;
    sol.strategy = Strategy::stay(n);
    sol.times = stay_forever_times(gamble);
    sol.settle_order.reserve(n);

    std::vector<bool> settled(n, false);
    IndexedMinHeap<ChaseTime> frontier(n);
    for (VertexId v = 0; v < n; ++v) frontier.push(v, sol.times[v]);

    while (!frontier.empty()) {
        auto [u, t_u] = frontier.pop();
        settled[u] = true;
        sol.settle_order.push_back(u);
        if (t_u.is_infinite()) continue;
        for (VertexId w : g.in_adj(u)) {
            if (settled[w]) continue;
            ChaseTime candidate = chase_step(gamble[w], t_u);
            if (improves(candidate, sol.times[w])) {
                sol.times[w] = candidate;
                sol.strategy.next[w] = u;
                frontier.decrease_key(w, candidate);
            }
        }
    }

    sol.iterations = n;
    sol.max_residual = bellman_residual(g, gamble, sol.times, ResidualScope::finite_times);
    return sol;
}

Solution solve(const Graph& g, const Gamble& gamble, Algorithm algorithm) {
    return algorithm == Algorithm::iterative ? solve_iterative(g, gamble) : solve_priority(g, gamble);
}

double bellman_residual(const Graph& g, const Gamble& gamble, std::span<const ChaseTime> times,
                        ResidualScope scope) {
    check_length(g, times.size(), "time vector");
    double worst = 0.0;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (scope == ResidualScope::finite_times && times[v].is_infinite()) continue;
        ChaseTime rhs = chase_step(gamble[v], min_over_closed_neighborhood(g, v, times).time);
        ChaseTime lhs = times[v];
        if (lhs.is_infinite() && rhs.is_infinite()) continue;
        if (lhs.is_infinite() || rhs.is_infinite()) return std::numeric_limits<double>::infinity();
        worst = std::max(worst, std::abs(lhs.value() - rhs.value()));
    }
    return worst;
}

std::vector<VertexId> chase_path(const Graph& g, const Strategy& strategy, VertexId start) {
    check_length(g, strategy.size(), "strategy");
    if (start >= g.vertex_count()) throw ValidationError("start vertex id " + std::to_string(start) + " out of range");
    std::vector<VertexId> path{start};
    VertexId v = start;
    while (strategy[v] != v) {
        v = strategy[v];
        path.push_back(v);
        if (path.size() > g.vertex_count())
            throw InvariantViolation("strategy has a cycle reachable from '" + g.label(start) +
                                     "': no fixed point within " + std::to_string(g.vertex_count()) + " steps");
    }
    return path;
}

double max_time_difference(std::span<const ChaseTime> a, std::span<const ChaseTime> b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_infinite() && b[i].is_infinite()) continue;
        if (a[i].is_infinite() || b[i].is_infinite()) return std::numeric_limits<double>::infinity();
        worst = std::max(worst, std::abs(a[i].value() - b[i].value()));
    }
    return worst;
}

}  // namespace copchase
