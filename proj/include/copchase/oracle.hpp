#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "copchase/graph.hpp"
#include "copchase/solver.hpp"

namespace copchase {

/// Exact expected times of a cop who always follows one fixed strategy.
struct StrategyEvaluation {
    std::vector<ChaseTime> times;
    Strategy strategy;
};

/// Solves the fixed-strategy recurrence T(v) = 1 + (1 − p_v)·T(π(v)) in
/// closed form. The functional graph of π splits into cycles with trees
/// hanging off them; each cycle reduces to one scalar equation and the trees
/// back-substitute toward it. Throws ValidationError for an invalid π.
StrategyEvaluation evaluate_stationary_strategy(const Graph& g, const Gamble& gamble, const Strategy& strategy);

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

/// Π_v |N(v)|, or nullopt if it does not fit in 64 bits.
std::optional<std::uint64_t> strategy_count(const Graph& g);

/// Walks every strategy with π(v) ∈ N(v), in lexicographic order of the
/// per-vertex choice indices (the last vertex varies fastest).
///
///     StrategyEnumerator it(g);
///     do { use(it.current()); } while (it.advance());
class StrategyEnumerator {
public:
    /// Throws InstanceTooLargeError when strategy_count(g) exceeds `cap`.
    explicit StrategyEnumerator(const Graph& g, std::uint64_t cap = kDefaultEnumerationCap);

    const Strategy& current() const noexcept { return current_; }
    /// Steps to the next strategy; false once the space is exhausted.
    bool advance();
    std::uint64_t total() const noexcept { return total_; }

private:
    std::vector<std::vector<VertexId>> choices_;
    std::vector<std::size_t> index_;
    Strategy current_;
    std::uint64_t total_;
};

/// Materializes the full enumeration. Meant for tests on tiny graphs.
std::vector<Strategy> enumerate_strategies(const Graph& g, std::uint64_t cap = kDefaultEnumerationCap);

struct OracleResult {
    std::vector<ChaseTime> times;
    Strategy best;
    std::uint64_t strategies_evaluated = 0;
};

/// Brute-force optimum: the per-vertex minimum of evaluate_stationary_strategy
/// over every strategy. `best` takes, at each vertex, the smallest-id
/// successor that attains that vertex's minimum, and is checked to attain the
/// minimum everywhere at once.
OracleResult oracle_optimal(const Graph& g, const Gamble& gamble, std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace copchase
