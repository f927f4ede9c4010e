#include "copchase/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "copchase/errors.hpp"

namespace copchase {

AliasSampler::AliasSampler(const Gamble& gamble) {
    if (gamble.mode() != GambleMode::strict)
        throw UnsupportedSimulationInput("simulation requires a strict gamble (probabilities summing to 1)");
    const std::size_t n = gamble.size();
    threshold_.assign(n, 0.0);
    alias_.resize(n);

    // Scale so the average column holds exactly 1 even when the input sum is
    // off by rounding.
    const double scale = static_cast<double>(n) / gamble.sum();
    std::vector<double> scaled(n);
    std::vector<VertexId> small, large;
    for (VertexId v = 0; v < n; ++v) {
        alias_[v] = v;
        scaled[v] = gamble[v] * scale;
        (scaled[v] < 1.0 ? small : large).push_back(v);
    }
    while (!small.empty() && !large.empty()) {
        VertexId s = small.back();
        small.pop_back();
        VertexId l = large.back();
        threshold_[s] = scaled[s];
        alias_[s] = l;
        scaled[l] -= 1.0 - scaled[s];
        if (scaled[l] < 1.0) {
            large.pop_back();
            small.push_back(l);
        }
    }
    // Leftovers are 1 up to rounding.
    for (VertexId v : large) threshold_[v] = 1.0;
    for (VertexId v : small) {
        if (gamble[v] > 0.0) {
            threshold_[v] = 1.0;
        } else {
            threshold_[v] = 0.0;
            alias_[v] = static_cast<VertexId>(std::max_element(gamble.probabilities().begin(),
                                                               gamble.probabilities().end()) -
                                              gamble.probabilities().begin());
        }
    }
}

VertexId AliasSampler::sample(Rng& rng) const {
    auto column = static_cast<VertexId>(uniform_index(rng, threshold_.size()));
    return uniform_unit(rng) < threshold_[column] ? column : alias_[column];
}

VertexId sample_gamble(const Gamble& gamble, Rng& rng) { return AliasSampler(gamble).sample(rng); }

SimReport simulate_chase(const Graph& g, const Gamble& gamble, const Strategy& strategy, VertexId start,
                         const SimulationConfig& config) {
    if (start >= g.vertex_count()) throw ValidationError("start vertex id " + std::to_string(start) + " out of range");
    if (config.trials == 0) throw ValidationError("simulation needs at least one trial");
    if (config.round_cap == 0) throw ValidationError("round cap must be at least 1");
    validate_strategy(g, strategy);
    AliasSampler sampler(gamble);

    SimReport report;
    report.trials = config.trials;
    report.seed = config.seed;
    report.start = start;

    // Exact integer accumulation keeps the statistics independent of trial order.
    std::uint64_t completed = 0;
    unsigned __int128 sum = 0, sum_sq = 0;
    for (std::uint64_t t = 0; t < config.trials; ++t) {
        Rng rng(mix_seed(config.seed, t));
        VertexId cop = start;
        std::uint64_t round = 1;
        bool captured = false;
        for (; round <= config.round_cap; ++round) {
            if (sampler.sample(rng) == cop) {
                captured = true;
                break;
            }
            cop = strategy[cop];
        }
        if (!captured) {
            ++report.truncated;
            continue;
        }
        ++completed;
        sum += round;
        sum_sq += static_cast<unsigned __int128>(round) * round;
    }

    if (completed == 0) {
        report.mean = std::numeric_limits<double>::quiet_NaN();
        report.std_error = std::numeric_limits<double>::quiet_NaN();
        return report;
    }
    const auto k = static_cast<long double>(completed);
    const long double mean = static_cast<long double>(sum) / k;
    long double variance = 0.0L;
    if (completed > 1) {
        variance = (static_cast<long double>(sum_sq) - static_cast<long double>(sum) * mean) / (k - 1.0L);
        if (variance < 0.0L) variance = 0.0L;
    }
    report.mean = static_cast<double>(mean);
    report.std_error = static_cast<double>(std::sqrt(variance / k));
    return report;
}

}  // namespace copchase
