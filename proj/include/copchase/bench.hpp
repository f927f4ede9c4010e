#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "copchase/graph.hpp"
#include "copchase/solver.hpp"

namespace copchase {

/// Edge density of a random graph: an independent edge probability, an exact
/// edge count, or an edge count proportional to n.
struct Density {
    enum class Kind { probability, edge_count, edges_per_vertex };
    Kind kind = Kind::probability;
    double value = 0.0;

    static Density probability(double p) { return {Kind::probability, p}; }
    static Density edges(std::size_t m) { return {Kind::edge_count, static_cast<double>(m)}; }
    static Density per_vertex(double k) { return {Kind::edges_per_vertex, k}; }

    /// "p=0.5", "m=12" or "m=4n".
    std::string label() const;
    /// Inverse of label(). Throws ValidationError.
    static Density parse(std::string_view text);
};

/// Undirected random graph, deterministic in `seed`. With ensure_connected a
/// uniformly random labeled spanning tree (random Prüfer sequence) is laid
/// first; the remaining pairs are then filled in independently with the edge
/// probability, or sampled without replacement up to the target edge count.
/// Throws ValidationError when the density cannot be met.
Graph gen_random_graph(std::size_t n, Density density, bool ensure_connected, std::uint64_t seed);

enum class GambleKind { uniform, dirichlet, sparse_support };

std::string_view to_string(GambleKind kind);
GambleKind parse_gamble_kind(std::string_view text);

/// uniform: 1/n everywhere. dirichlet: symmetric Dirichlet(1) from normalized
/// exponentials. sparse_support: a Dirichlet(1) draw on a random subset of
/// ⌈n/4⌉ vertices, zero elsewhere.
Gamble gen_random_gamble(std::size_t n, GambleKind kind, std::uint64_t seed);

/// True when every vertex is reachable from vertex 0 along out-edges.
bool is_connected(const Graph& g);

inline constexpr double kAgreementTolerance = 1e-9;

struct BenchConfig {
    std::vector<std::size_t> sizes{100, 500, 1000};
    std::vector<Density> densities{Density::per_vertex(4.0), Density::probability(0.5)};
    std::vector<GambleKind> gamble_kinds{GambleKind::uniform, GambleKind::dirichlet};
    std::size_t repetitions = 1;
    std::uint64_t seed = 1;
    std::vector<Algorithm> algorithms{Algorithm::iterative, Algorithm::priority};
    bool ensure_connected = true;
};

struct BenchRow {
    std::size_t n = 0;
    std::size_t m = 0;
    std::string density;
    GambleKind gamble_kind = GambleKind::uniform;
    std::size_t repetition = 0;
    Algorithm algorithm = Algorithm::iterative;
    std::int64_t wall_time_ns = 0;
    std::size_t iterations = 0;
    double max_residual = 0.0;
    /// Unset when only one algorithm ran.
    std::optional<bool> agreement;
};

/// Generates one instance per (size, density, gamble kind, repetition),
/// times each selected solver on it and cross-checks the time vectors.
/// Disagreements are recorded in the rows and written to `log` if given.
std::vector<BenchRow> run_benchmark(const BenchConfig& config, std::ostream* log = nullptr);

inline constexpr std::string_view kBenchCsvHeader =
    "n,m,gamble_mode,algorithm,wall_time_ns,iterations,max_residual,agreement";

void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows);

/// Median wall time per algorithm for each (n, density, gamble) cell and
/// which algorithm was faster. Reported, never asserted.
void write_timing_summary(std::ostream& os, const std::vector<BenchRow>& rows);

}  // namespace copchase
