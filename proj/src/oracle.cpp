#include "copchase/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "copchase/errors.hpp"

namespace copchase {
namespace {

// Values on one cycle c_0 → c_1 → … → c_{k−1} → c_0 of the strategy graph.
// With w_i = Π_{j<i} (1 − p_j), unrolling gives T(c_0) = Σ w_i / Σ p_i·w_i;
// the denominator equals 1 − Π (1 − p_j) without cancellation.
void solve_cycle(const Gamble& gamble, const Strategy& strategy, std::span<const VertexId> cycle,
                 std::vector<ChaseTime>& times) {
    bool all_zero = std::all_of(cycle.begin(), cycle.end(), [&](VertexId v) { return 1.0 - gamble[v] == 1.0; });
    if (all_zero) {
        for (VertexId v : cycle) times[v] = ChaseTime::infinite();
        return;
    }
    double weight = 1.0, numerator = 0.0, denominator = 0.0;
    for (VertexId v : cycle) {
        numerator += weight;
        denominator += gamble[v] * weight;
        weight *= 1.0 - gamble[v];
    }
    times[cycle.front()] = ChaseTime(numerator / denominator);
    for (std::size_t i = cycle.size() - 1; i >= 1; --i) {
        VertexId v = cycle[i];
        times[v] = chase_step(gamble[v], times[strategy[v]]);
    }
}

double tolerance_at(ChaseTime t) { return 1e-9 * std::max(1.0, t.value()); }

// Scratch buffers for repeated evaluations over one graph; assumes a valid
// strategy.
class StrategyEvaluator {
public:
    explicit StrategyEvaluator(std::size_t n) : mark_(n), times_(n) { walk_.reserve(n); }

    std::span<const ChaseTime> evaluate(const Gamble& gamble, const Strategy& strategy) {
        const std::size_t n = mark_.size();
        std::fill(mark_.begin(), mark_.end(), Mark::unvisited);
        for (VertexId s = 0; s < n; ++s) {
            if (mark_[s] != Mark::unvisited) continue;
            walk_.clear();
            VertexId v = s;
            while (mark_[v] == Mark::unvisited) {
                mark_[v] = Mark::on_walk;
                walk_.push_back(v);
                v = strategy[v];
            }
            std::size_t tree_end = walk_.size();
            if (mark_[v] == Mark::on_walk) {
                // The walk closed a new cycle starting at v.
                tree_end = static_cast<std::size_t>(std::find(walk_.begin(), walk_.end(), v) - walk_.begin());
                std::span<const VertexId> cycle(walk_.data() + tree_end, walk_.size() - tree_end);
                if (cycle.size() == 1)
                    times_[v] = evaluate_stay_forever(gamble, v);
                else
                    solve_cycle(gamble, strategy, cycle, times_);
                for (VertexId c : cycle) mark_[c] = Mark::done;
            }
            for (std::size_t i = tree_end; i-- > 0;) {
                VertexId x = walk_[i];
                times_[x] = chase_step(gamble[x], times_[strategy[x]]);
                mark_[x] = Mark::done;
            }
        }
        return times_;
    }

private:
    enum class Mark : std::uint8_t { unvisited, on_walk, done };
    std::vector<Mark> mark_;
    std::vector<ChaseTime> times_;
    std::vector<VertexId> walk_;
};

}  // namespace

StrategyEvaluation evaluate_stationary_strategy(const Graph& g, const Gamble& gamble, const Strategy& strategy) {
    validate_strategy(g, strategy);
    if (gamble.size() != g.vertex_count()) throw ValidationError("gamble size does not match the graph");
    StrategyEvaluator evaluator(g.vertex_count());
    StrategyEvaluation out;
    auto times = evaluator.evaluate(gamble, strategy);
    out.times.assign(times.begin(), times.end());
    out.strategy = strategy;
    return out;
}

std::optional<std::uint64_t> strategy_count(const Graph& g) {
    std::uint64_t product = 1;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        std::uint64_t choices = g.out_adj(v).size() + 1;
        if (product > std::numeric_limits<std::uint64_t>::max() / choices) return std::nullopt;
        product *= choices;
    }
    return product;
}

StrategyEnumerator::StrategyEnumerator(const Graph& g, std::uint64_t cap) {
    auto count = strategy_count(g);
    if (!count || *count > cap) {
        double log10_count = 0.0;
        for (VertexId v = 0; v < g.vertex_count(); ++v) log10_count += std::log10(double(g.out_adj(v).size() + 1));
        throw InstanceTooLargeError(count, log10_count, cap);
    }
    total_ = *count;
    choices_.reserve(g.vertex_count());
    for (VertexId v = 0; v < g.vertex_count(); ++v) choices_.push_back(closed_neighborhood(g, v));
    index_.assign(g.vertex_count(), 0);
    current_.next.resize(g.vertex_count());
    for (VertexId v = 0; v < g.vertex_count(); ++v) current_.next[v] = choices_[v][0];
}

bool StrategyEnumerator::advance() {
    for (std::size_t v = choices_.size(); v-- > 0;) {
        if (++index_[v] < choices_[v].size()) {
            current_.next[v] = choices_[v][index_[v]];
            return true;
        }
        index_[v] = 0;
        current_.next[v] = choices_[v][0];
    }
    return false;
}

std::vector<Strategy> enumerate_strategies(const Graph& g, std::uint64_t cap) {
    StrategyEnumerator it(g, cap);
    std::vector<Strategy> out;
    out.reserve(it.total());
    do {
        out.push_back(it.current());
    } while (it.advance());
    return out;
}

OracleResult oracle_optimal(const Graph& g, const Gamble& gamble, std::uint64_t cap) {
    StrategyEnumerator it(g, cap);
    const std::size_t n = g.vertex_count();

    if (gamble.size() != n) throw ValidationError("gamble size does not match the graph");
    StrategyEvaluator evaluator(n);
    OracleResult result;
    result.times.assign(n, ChaseTime::infinite());
    do {
        auto times = evaluator.evaluate(gamble, it.current());
        for (VertexId v = 0; v < n; ++v) result.times[v] = std::min(result.times[v], times[v]);
        ++result.strategies_evaluated;
    } while (it.advance());

    // Per-vertex optimal moves compose into one strategy that is optimal
    // everywhere at once.
    result.best.next.resize(n);
    for (VertexId v = 0; v < n; ++v) {
        result.best.next[v] = v;
        for (VertexId u : closed_neighborhood(g, v)) {
            ChaseTime via = chase_step(gamble[v], result.times[u]);
            bool attains = result.times[v].is_infinite()
                               ? via.is_infinite()
                               : via.is_finite() && std::abs(via.value() - result.times[v].value()) <=
                                                        tolerance_at(result.times[v]);
            if (attains) {
                result.best.next[v] = u;
                break;
            }
        }
    }
    auto check = evaluate_stationary_strategy(g, gamble, result.best);
    for (VertexId v = 0; v < n; ++v) {
        bool ok = result.times[v].is_infinite()
                      ? check.times[v].is_infinite()
                      : check.times[v].is_finite() &&
                            check.times[v].value() <= result.times[v].value() + tolerance_at(result.times[v]);
        if (!ok)
            throw InvariantViolation("no single strategy attains the per-vertex optimum at '" + g.label(v) + "'");
    }
    return result;
}

}  // namespace copchase
