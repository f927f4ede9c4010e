#include "copchase/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <tuple>
#include <unordered_set>

#include "copchase/errors.hpp"
#include "copchase/format.hpp"
#include "copchase/simulator.hpp"

namespace copchase {
namespace {

// Decodes a uniformly random Prüfer sequence into the edges of a labeled
// tree on n vertices.
std::vector<Edge> random_spanning_tree(std::size_t n, Rng& rng) {
    std::vector<Edge> edges;
    if (n < 2) return edges;
    if (n == 2) return {{0, 1}};

    std::vector<VertexId> code(n - 2);
    for (auto& c : code) c = static_cast<VertexId>(uniform_index(rng, n));
    std::vector<std::size_t> degree(n, 1);
    for (VertexId c : code) ++degree[c];

    // Min-heap of current leaves.
    std::vector<VertexId> leaves;
    for (VertexId v = 0; v < n; ++v)
        if (degree[v] == 1) leaves.push_back(v);
    std::make_heap(leaves.begin(), leaves.end(), std::greater<>{});

    edges.reserve(n - 1);
    for (VertexId c : code) {
        std::pop_heap(leaves.begin(), leaves.end(), std::greater<>{});
        VertexId leaf = leaves.back();
        leaves.pop_back();
        edges.emplace_back(std::min(leaf, c), std::max(leaf, c));
        if (--degree[c] == 1) {
            leaves.push_back(c);
            std::push_heap(leaves.begin(), leaves.end(), std::greater<>{});
        }
    }
    std::sort(leaves.begin(), leaves.end());
    edges.emplace_back(leaves[0], leaves[1]);
    return edges;
}

std::uint64_t pair_key(VertexId u, VertexId v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | v;
}

std::vector<double> dirichlet_one(std::size_t k, Rng& rng) {
    std::vector<double> w(k);
    for (auto& x : w) {
        // Open interval (0, 1) so every weight is strictly positive.
        double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
        x = -std::log(u);
    }
    double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (auto& x : w) x /= total;
    return w;
}

}  // namespace

std::string Density::label() const {
    switch (kind) {
    case Kind::probability: return "p=" + format_double(value);
    case Kind::edge_count: return "m=" + format_double(value);
    case Kind::edges_per_vertex: return "m=" + format_double(value) + "n";
    }
    return "?";
}

Density Density::parse(std::string_view text) {
    auto number = [&](std::string_view digits) {
        double x = 0.0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), x);
        if (ec != std::errc{} || ptr != digits.data() + digits.size() || !std::isfinite(x) || x < 0.0)
            throw ValidationError("invalid density '" + std::string(text) + "'");
        return x;
    };
    if (text.starts_with("p=")) {
        double p = number(text.substr(2));
        if (p > 1.0) throw ValidationError("edge probability " + std::string(text.substr(2)) + " exceeds 1");
        return probability(p);
    }
    if (text.starts_with("m=")) {
        auto rest = text.substr(2);
        if (rest.ends_with("n")) return per_vertex(number(rest.substr(0, rest.size() - 1)));
        double m = number(rest);
        if (m != std::floor(m)) throw ValidationError("edge count '" + std::string(rest) + "' is not an integer");
        return {Kind::edge_count, m};
    }
    throw ValidationError("density must look like p=<prob>, m=<edges> or m=<k>n, got '" + std::string(text) + "'");
}

Graph gen_random_graph(std::size_t n, Density density, bool ensure_connected, std::uint64_t seed) {
    if (n == 0) throw EmptyInstanceError();
    Rng rng(seed);
    const std::uint64_t total_pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;

    std::vector<Edge> edges;
    if (ensure_connected) edges = random_spanning_tree(n, rng);

    if (density.kind == Density::Kind::probability) {
        if (!(density.value >= 0.0 && density.value <= 1.0))
            throw ValidationError("edge probability " + format_double(density.value) + " outside [0, 1]");
        std::unordered_set<std::uint64_t> tree;
        for (auto [u, v] : edges) tree.insert(pair_key(u, v));
        for (VertexId u = 0; u < n; ++u)
            for (VertexId v = u + 1; v < n; ++v)
                if (!tree.contains(pair_key(u, v)) && uniform_unit(rng) < density.value) edges.emplace_back(u, v);
        return Graph::build(false, n, edges);
    }

    double wanted = density.kind == Density::Kind::edge_count ? density.value : std::round(density.value * n);
    if (wanted > static_cast<double>(total_pairs))
        throw ValidationError("cannot place " + format_double(wanted) + " edges on " + std::to_string(n) +
                              " vertices (at most " + std::to_string(total_pairs) + ")");
    if (ensure_connected && wanted < static_cast<double>(n - 1))
        throw ValidationError("a connected graph on " + std::to_string(n) + " vertices needs at least " +
                              std::to_string(n - 1) + " edges, asked for " + format_double(wanted));
    const auto target = static_cast<std::uint64_t>(wanted);
    const std::uint64_t extra = target - edges.size();
    const std::uint64_t free_pairs = total_pairs - edges.size();

    std::unordered_set<std::uint64_t> taken;
    for (auto [u, v] : edges) taken.insert(pair_key(u, v));
    if (2 * extra <= free_pairs) {
        // Sparse fill: rejection sampling accepts at least half the draws.
        while (edges.size() < target) {
            auto u = static_cast<VertexId>(uniform_index(rng, n));
            auto v = static_cast<VertexId>(uniform_index(rng, n));
            if (u == v || !taken.insert(pair_key(u, v)).second) continue;
            edges.emplace_back(std::min(u, v), std::max(u, v));
        }
    } else {
        std::vector<Edge> pool;
        pool.reserve(free_pairs);
        for (VertexId u = 0; u < n; ++u)
            for (VertexId v = u + 1; v < n; ++v)
                if (!taken.contains(pair_key(u, v))) pool.emplace_back(u, v);
        for (std::uint64_t i = 0; i < extra; ++i) {
            std::swap(pool[i], pool[i + uniform_index(rng, pool.size() - i)]);
            edges.push_back(pool[i]);
        }
    }
    return Graph::build(false, n, edges);
}

std::string_view to_string(GambleKind kind) {
    switch (kind) {
    case GambleKind::uniform: return "uniform";
    case GambleKind::dirichlet: return "dirichlet";
    case GambleKind::sparse_support: return "sparse_support";
    }
    return "?";
}

GambleKind parse_gamble_kind(std::string_view text) {
    for (auto kind : {GambleKind::uniform, GambleKind::dirichlet, GambleKind::sparse_support})
        if (text == to_string(kind)) return kind;
    throw ValidationError("unknown gamble mode '" + std::string(text) + "' (uniform, dirichlet, sparse_support)");
}

Gamble gen_random_gamble(std::size_t n, GambleKind kind, std::uint64_t seed) {
    if (n == 0) throw EmptyInstanceError();
    Rng rng(seed);
    std::vector<double> p(n, 0.0);
    switch (kind) {
    case GambleKind::uniform: std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(n)); break;
    case GambleKind::dirichlet: p = dirichlet_one(n, rng); break;
    case GambleKind::sparse_support: {
        const std::size_t k = (n + 3) / 4;
        std::vector<VertexId> order(n);
        std::iota(order.begin(), order.end(), 0);
        for (std::size_t i = 0; i < k; ++i) std::swap(order[i], order[i + uniform_index(rng, n - i)]);
        auto w = dirichlet_one(k, rng);
        for (std::size_t i = 0; i < k; ++i) p[order[i]] = w[i];
        break;
    }
    }
    return make_gamble(p, GambleMode::strict);
}

bool is_connected(const Graph& g) {
    std::vector<bool> seen(g.vertex_count(), false);
    std::vector<VertexId> stack{0};
    seen[0] = true;
    std::size_t reached = 1;
    while (!stack.empty()) {
        VertexId v = stack.back();
        stack.pop_back();
        for (VertexId u : g.out_adj(v))
            if (!seen[u]) {
                seen[u] = true;
                ++reached;
                stack.push_back(u);
            }
    }
    return reached == g.vertex_count();
}

std::vector<BenchRow> run_benchmark(const BenchConfig& config, std::ostream* log) {
    if (config.sizes.empty() || config.densities.empty() || config.gamble_kinds.empty() || config.algorithms.empty())
        throw ValidationError("benchmark config needs at least one size, density, gamble mode and algorithm");
    if (config.repetitions == 0) throw ValidationError("benchmark repetitions must be positive");
    for (auto n : config.sizes)
        if (n == 0) throw ValidationError("benchmark sizes must be positive");

    std::vector<BenchRow> rows;
    std::uint64_t instance = 0;
    for (std::size_t n : config.sizes)
        for (const Density& density : config.densities)
            for (GambleKind kind : config.gamble_kinds)
                for (std::size_t rep = 0; rep < config.repetitions; ++rep, ++instance) {
                    const std::uint64_t base = mix_seed(config.seed, instance);
                    Graph g = gen_random_graph(n, density, config.ensure_connected, mix_seed(base, 0));
                    Gamble gamble = gen_random_gamble(n, kind, mix_seed(base, 1));

                    std::vector<Solution> solutions;
                    std::size_t first_row = rows.size();
                    for (Algorithm algorithm : config.algorithms) {
                        auto start = std::chrono::steady_clock::now();
                        Solution sol = solve(g, gamble, algorithm);
                        auto stop = std::chrono::steady_clock::now();

                        BenchRow row;
                        row.n = n;
                        row.m = g.edge_count();
                        row.density = density.label();
                        row.gamble_kind = kind;
                        row.repetition = rep;
                        row.algorithm = algorithm;
                        row.wall_time_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count();
                        row.iterations = sol.iterations;
                        row.max_residual = sol.max_residual;
                        rows.push_back(std::move(row));
                        solutions.push_back(std::move(sol));
                    }

                    if (solutions.size() < 2) continue;
                    double worst = 0.0;
                    for (std::size_t i = 1; i < solutions.size(); ++i)
                        worst = std::max(worst, max_time_difference(solutions[0].times, solutions[i].times));
                    bool agree = worst <= kAgreementTolerance;
                    for (std::size_t i = first_row; i < rows.size(); ++i) rows[i].agreement = agree;
                    if (!agree && log)
                        *log << "DISAGREEMENT: n=" << n << " " << density.label() << " gamble=" << to_string(kind)
                             << " rep=" << rep << " max |dT| = " << format_double(worst) << '\n';
                }
    return rows;
}

void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
    os << kBenchCsvHeader << '\n';
    for (const auto& r : rows) {
        os << r.n << ',' << r.m << ',' << to_string(r.gamble_kind) << ',' << to_string(r.algorithm) << ','
           << r.wall_time_ns << ',' << r.iterations << ',' << format_double(r.max_residual) << ',';
        if (r.agreement) os << (*r.agreement ? "true" : "false");
        os << '\n';
    }
}

void write_timing_summary(std::ostream& os, const std::vector<BenchRow>& rows) {
    using Cell = std::tuple<std::size_t, std::string, std::string>;
    std::map<Cell, std::map<std::string, std::vector<std::int64_t>>> cells;
    std::vector<Cell> order;
    for (const auto& r : rows) {
        Cell cell{r.n, r.density, std::string(to_string(r.gamble_kind))};
        if (!cells.contains(cell)) order.push_back(cell);
        cells[cell][std::string(to_string(r.algorithm))].push_back(r.wall_time_ns);
    }
    auto median = [](std::vector<std::int64_t> v) {
        std::sort(v.begin(), v.end());
        return v[v.size() / 2];
    };
    for (const auto& cell : order) {
        const auto& [n, density, gamble] = cell;
        os << "n=" << n << ' ' << density << ' ' << gamble << ':';
        std::string fastest;
        std::int64_t best = 0;
        for (const auto& [algorithm, times] : cells[cell]) {
            auto t = median(times);
            os << ' ' << algorithm << '=' << t << "ns";
            if (fastest.empty() || t < best) {
                fastest = algorithm;
                best = t;
            }
        }
        if (cells[cell].size() > 1) os << " (faster: " << fastest << ')';
        os << '\n';
    }
}

}  // namespace copchase
