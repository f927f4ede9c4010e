#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "copchase/graph.hpp"

namespace copchase {

/// Expected number of rounds until capture: a finite value >= 0, or +∞.
class ChaseTime {
public:
    constexpr ChaseTime() = default;
    constexpr explicit ChaseTime(double rounds) : rounds_(rounds) {}

    static constexpr ChaseTime infinite() { return ChaseTime(std::numeric_limits<double>::infinity()); }

    constexpr bool is_infinite() const noexcept { return rounds_ == std::numeric_limits<double>::infinity(); }
    constexpr bool is_finite() const noexcept { return !is_infinite(); }
    /// The number of rounds; +∞ as the IEEE infinity.
    constexpr double value() const noexcept { return rounds_; }

    friend constexpr auto operator<=>(ChaseTime, ChaseTime) = default;

private:
    double rounds_ = 0.0;
};

/// Strict improvements must exceed this absolute margin. Keeps termination and
/// an acyclic strategy graph under floating-point rounding.
inline constexpr double kImprovementTolerance = 1e-12;

/// Time of a cop at a vertex with capture probability p who moves on to a
/// vertex worth `next`: 1 + (1 − p)·next, where (1 − p)·∞ is ∞ for p < 1 and
/// 0 for p = 1.
constexpr ChaseTime chase_step(double p, ChaseTime next) {
    if (p >= 1.0) return ChaseTime(1.0);
    if (next.is_infinite()) return ChaseTime::infinite();
    return ChaseTime(1.0 + (1.0 - p) * next.value());
}

/// True when `candidate` beats `current` by more than kImprovementTolerance.
constexpr bool improves(ChaseTime candidate, ChaseTime current) {
    if (candidate.is_infinite()) return false;
    if (current.is_infinite()) return true;
    return candidate.value() < current.value() - kImprovementTolerance;
}

/// Stationary cop strategy: next[v] is the vertex the cop moves to after an
/// unsuccessful round at v.
struct Strategy {
    std::vector<VertexId> next;

    std::size_t size() const noexcept { return next.size(); }
    VertexId operator[](VertexId v) const { return next[v]; }

    /// The strategy that never moves.
    static Strategy stay(std::size_t n);

    friend bool operator==(const Strategy&, const Strategy&) = default;
};

/// Throws ValidationError unless strategy.next[v] ∈ N(v) for every v.
void validate_strategy(const Graph& g, const Strategy& strategy);

enum class Algorithm { iterative, priority };

std::string_view to_string(Algorithm algorithm);

struct Solution {
    std::vector<ChaseTime> times;
    Strategy strategy;
    /// Relaxation rounds for the iterative solver (the final no-change round
    /// included); n settlements for the priority solver.
    std::size_t iterations = 0;
    /// bellman_residual over the vertices with finite T.
    double max_residual = 0.0;
    Algorithm algorithm = Algorithm::iterative;
    /// Vertices in extraction order (priority solver only).
    std::vector<VertexId> settle_order;
};

/// 1/p_v, or +∞ when p_v = 0. Throws ValidationError if v is out of range.
ChaseTime evaluate_stay_forever(const Gamble& gamble, VertexId v);

struct BellmanUpdate {
    std::vector<ChaseTime> next;
    /// Argmin successor at vertices that strictly improved.
    std::vector<std::optional<VertexId>> improved;
    bool changed = false;
};

/// One synchronous relaxation round over every vertex, reading only `prev`.
/// Argmin ties go to the smallest vertex id.
BellmanUpdate bellman_update(const Graph& g, const Gamble& gamble, std::span<const ChaseTime> prev);

/// Called after each relaxation round with the round number (1-based) and
/// the values it produced.
using RoundObserver = std::function<void(std::size_t round, std::span<const ChaseTime> times)>;

/// Bellman-Ford style solver: repeated synchronous relaxation from the
/// stay-forever values until a round changes nothing. Runs at most n + 1
/// rounds of O(n + m) each.
Solution solve_iterative(const Graph& g, const Gamble& gamble, const RoundObserver& observer = {});

/// Dijkstra style solver: settles vertices in ascending order of tentative
/// time and relaxes their in-neighbors through an indexed binary heap,
/// O((n + m) log n).
Solution solve_priority(const Graph& g, const Gamble& gamble);

Solution solve(const Graph& g, const Gamble& gamble, Algorithm algorithm);

enum class ResidualScope {
    all_vertices,
    finite_times,  ///< skip vertices whose own T(v) is +∞
};

/// max over v of |T(v) − (1 + (1 − p_v)·min_{u∈N(v)} T(u))|. A pair of
/// infinities contributes 0, a single infinity contributes +∞.
double bellman_residual(const Graph& g, const Gamble& gamble, std::span<const ChaseTime> times,
                        ResidualScope scope = ResidualScope::all_vertices);

/// Follows the strategy from `start` to the first fixed point, inclusive.
/// Throws InvariantViolation if no fixed point is reached within n steps.
std::vector<VertexId> chase_path(const Graph& g, const Strategy& strategy, VertexId start);
inline std::vector<VertexId> chase_path(const Graph& g, const Solution& sol, VertexId start) {
    return chase_path(g, sol.strategy, start);
}

/// Largest coordinate-wise difference; 0 for matching infinities, +∞ for an
/// infinity against a finite value.
double max_time_difference(std::span<const ChaseTime> a, std::span<const ChaseTime> b);

}  // namespace copchase
