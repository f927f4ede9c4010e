#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "copchase/graph.hpp"
#include "copchase/solver.hpp"

namespace copchase {

/// 64-bit engine used by every randomized component.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer; derives independent seeds from (seed, index) pairs.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Uniform double in [0, 1) from the top 53 bits of one engine output.
inline double uniform_unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform integer in [0, n) by multiply-shift.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(rng()) * n) >> 64);
}

/// Walker/Vose alias table: O(n) construction, O(1) per draw, two engine
/// outputs per draw. Zero-probability vertices are never drawn.
class AliasSampler {
public:
    /// Throws UnsupportedSimulationInput for permissive-mode gambles.
    explicit AliasSampler(const Gamble& gamble);

    VertexId sample(Rng& rng) const;
    std::size_t size() const noexcept { return threshold_.size(); }

    static constexpr std::string_view method = "alias";

private:
    std::vector<double> threshold_;
    std::vector<VertexId> alias_;
};

/// One gambler draw. Builds a fresh table, so loops should hold an
/// AliasSampler instead.
VertexId sample_gamble(const Gamble& gamble, Rng& rng);

inline constexpr std::uint64_t kDefaultRoundCap = 10'000'000;

struct SimulationConfig {
    std::uint64_t trials = 100'000;
    std::uint64_t seed = 0;
    std::uint64_t round_cap = kDefaultRoundCap;
};

struct SimReport {
    std::uint64_t trials = 0;
    /// Mean capture round over non-truncated trials; NaN if every trial was truncated.
    double mean = 0.0;
    /// Sample standard deviation / √(completed trials).
    double std_error = 0.0;
    std::uint64_t truncated = 0;
    std::uint64_t seed = 0;
    VertexId start = 0;
    std::string_view method = AliasSampler::method;

    friend bool operator==(const SimReport&, const SimReport&) = default;
};

/// Plays `config.trials` independent chases from `start`. Each round the
/// gambler's vertex is drawn and compared with the cop's before the cop moves
/// along the strategy, so capture in round 1 happens at `start` itself. Trial
/// t draws from its own engine seeded with mix_seed(seed, t).
SimReport simulate_chase(const Graph& g, const Gamble& gamble, const Strategy& strategy, VertexId start,
                         const SimulationConfig& config);

}  // namespace copchase
