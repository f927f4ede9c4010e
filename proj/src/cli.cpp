#include "copchase/cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "copchase/bench.hpp"
#include "copchase/errors.hpp"
#include "copchase/format.hpp"
#include "copchase/graph.hpp"
#include "copchase/oracle.hpp"
#include "copchase/simulator.hpp"
#include "copchase/solver.hpp"

namespace copchase::cli {
namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json time_json(ChaseTime t) {
    if (t.is_infinite()) return "inf";
    return t.value();
}

ordered_json real_json(double x) {
    if (std::isinf(x)) return "inf";
    return x;
}

GambleMode gamble_mode(bool permissive) { return permissive ? GambleMode::permissive : GambleMode::strict; }

std::string join_labels(const Graph& g, const std::vector<VertexId>& path, std::string_view sep) {
    std::string s;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i) s += sep;
        s += g.label(path[i]);
    }
    return s;
}

ordered_json solution_json(const Instance& inst, const Solution& sol) {
    const Graph& g = inst.graph;
    ordered_json doc;
    doc["algorithm"] = to_string(sol.algorithm);
    doc["iterations"] = sol.iterations;
    doc["max_residual"] = real_json(sol.max_residual);
    auto& vertices = doc["vertices"] = ordered_json::array();
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        ordered_json rec;
        rec["label"] = g.label(v);
        rec["p"] = inst.gamble[v];
        rec["T"] = time_json(sol.times[v]);
        rec["next"] = g.label(sol.strategy[v]);
        auto& path = rec["chase_path"] = ordered_json::array();
        for (VertexId u : chase_path(g, sol, v)) path.push_back(g.label(u));
        vertices.push_back(std::move(rec));
    }
    return doc;
}

void write_solution_table(std::ostream& out, const Instance& inst, const Solution& sol) {
    const Graph& g = inst.graph;
    out << "algorithm: " << to_string(sol.algorithm) << "  iterations: " << sol.iterations
        << "  max_residual: " << format_double(sol.max_residual) << '\n';

    std::vector<std::array<std::string, 5>> rows{{"label", "p", "T", "next", "chase_path"}};
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        rows.push_back({g.label(v), format_double(inst.gamble[v]), format_double(sol.times[v].value()),
                        g.label(sol.strategy[v]), join_labels(g, chase_path(g, sol, v), " -> ")});
    std::array<std::size_t, 5> width{};
    for (const auto& r : rows)
        for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < r.size(); ++c) {
            out << r[c];
            if (c + 1 < r.size()) out << std::string(width[c] - r[c].size() + 2, ' ');
        }
        out << '\n';
    }
}

struct SolveArgs {
    std::string instance;
    std::string algorithm = "both";
    std::string format = "table";
    bool permissive = false;
};

int cmd_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
    Instance inst = load_instance(a.instance, gamble_mode(a.permissive));
    std::vector<Solution> solutions;
    if (a.algorithm != "priority") solutions.push_back(solve_iterative(inst.graph, inst.gamble));
    if (a.algorithm != "iterative") solutions.push_back(solve_priority(inst.graph, inst.gamble));

    std::optional<double> difference;
    if (solutions.size() == 2) difference = max_time_difference(solutions[0].times, solutions[1].times);
    bool agree = !difference || *difference <= kAgreementTolerance;

    if (a.format == "json") {
        ordered_json doc;
        if (difference) {
            doc["agreement"] = agree;
            doc["max_difference"] = real_json(*difference);
        }
        auto& list = doc["solutions"] = ordered_json::array();
        for (const auto& sol : solutions) list.push_back(solution_json(inst, sol));
        out << doc.dump(2) << '\n';
    } else {
        for (std::size_t i = 0; i < solutions.size(); ++i) {
            if (i) out << '\n';
            write_solution_table(out, inst, solutions[i]);
        }
        if (difference)
            out << "\nagreement: " << (agree ? "yes" : "NO") << " (max |dT| = " << format_double(*difference) << ")\n";
    }
    if (!agree) {
        err << "error: iterative and priority solvers disagree by " << format_double(*difference) << '\n';
        return kDisagreement;
    }
    return kSuccess;
}

struct CheckArgs {
    std::string instance;
    std::uint64_t cap = kDefaultEnumerationCap;
    bool permissive = false;
};

int cmd_check(const CheckArgs& a, std::ostream& out, std::ostream&) {
    Instance inst = load_instance(a.instance, gamble_mode(a.permissive));
    Solution iterative = solve_iterative(inst.graph, inst.gamble);
    Solution priority = solve_priority(inst.graph, inst.gamble);
    OracleResult oracle = oracle_optimal(inst.graph, inst.gamble, a.cap);

    double d_iter = max_time_difference(iterative.times, oracle.times);
    double d_prio = max_time_difference(priority.times, oracle.times);
    bool pass = d_iter <= kAgreementTolerance && d_prio <= kAgreementTolerance;
    out << "strategies enumerated: " << oracle.strategies_evaluated << '\n'
        << "max |iterative - oracle|: " << format_double(d_iter) << '\n'
        << "max |priority - oracle|: " << format_double(d_prio) << '\n'
        << (pass ? "PASS" : "FAIL") << '\n';
    return pass ? kSuccess : kDisagreement;
}

struct SimulateArgs {
    std::string instance;
    std::string start;
    std::uint64_t trials = 200'000;
    std::uint64_t seed = 42;
    std::uint64_t round_cap = kDefaultRoundCap;
    std::string strategy = "solved";
    bool permissive = false;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
    Instance inst = load_instance(a.instance, gamble_mode(a.permissive));
    const Graph& g = inst.graph;
    VertexId start = 0;
    if (!a.start.empty()) {
        bool found = false;
        for (VertexId v = 0; v < g.vertex_count() && !found; ++v)
            if (g.label(v) == a.start) {
                start = v;
                found = true;
            }
        if (!found) {
            err << "error: unknown start vertex '" << a.start << "'\n";
            return kInputError;
        }
    }

    Strategy strategy = a.strategy == "stay" ? Strategy::stay(g.vertex_count())
                                             : solve_iterative(g, inst.gamble).strategy;
    ChaseTime expected = evaluate_stationary_strategy(g, inst.gamble, strategy).times[start];
    SimReport report = simulate_chase(g, inst.gamble, strategy, start, {a.trials, a.seed, a.round_cap});

    double z = (report.mean - expected.value()) / report.std_error;
    if (report.std_error == 0.0 && report.mean == expected.value()) z = 0.0;
    out << "start: " << g.label(start) << '\n'
        << "strategy: " << a.strategy << '\n'
        << "sampler: " << report.method << '\n'
        << "trials: " << report.trials << '\n'
        << "seed: " << report.seed << '\n'
        << "truncated: " << report.truncated << '\n'
        << "mean: " << format_double(report.mean) << '\n'
        << "std_error: " << format_double(report.std_error) << '\n'
        << "expected: " << format_double(expected.value()) << '\n'
        << "z: " << format_double(z) << '\n';
    return kSuccess;
}

struct BenchArgs {
    std::string config_path;
    std::string out_path;
    std::vector<std::size_t> sizes;
    std::vector<std::string> densities;
    std::vector<std::string> gambles;
    std::optional<std::size_t> repetitions;
    std::optional<std::uint64_t> seed;
    std::string algorithm;
};

BenchConfig load_bench_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open bench config '" + path + "'");
    BenchConfig config;
    try {
        auto doc = nlohmann::json::parse(in);
        if (doc.contains("sizes")) config.sizes = doc["sizes"].get<std::vector<std::size_t>>();
        if (doc.contains("densities")) {
            config.densities.clear();
            for (const auto& d : doc["densities"]) config.densities.push_back(Density::parse(d.get<std::string>()));
        }
        if (doc.contains("gamble_modes")) {
            config.gamble_kinds.clear();
            for (const auto& k : doc["gamble_modes"]) config.gamble_kinds.push_back(parse_gamble_kind(k.get<std::string>()));
        }
        if (doc.contains("repetitions")) config.repetitions = doc["repetitions"].get<std::size_t>();
        if (doc.contains("seed")) config.seed = doc["seed"].get<std::uint64_t>();
        if (doc.contains("ensure_connected")) config.ensure_connected = doc["ensure_connected"].get<bool>();
        if (doc.contains("algorithms")) {
            config.algorithms.clear();
            for (const auto& name : doc["algorithms"]) {
                auto s = name.get<std::string>();
                if (s == "iterative") config.algorithms.push_back(Algorithm::iterative);
                else if (s == "priority") config.algorithms.push_back(Algorithm::priority);
                else throw ValidationError("unknown algorithm '" + s + "' in bench config");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("invalid bench config '" + path + "': " + e.what());
    }
    return config;
}

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
    BenchConfig config = a.config_path.empty() ? BenchConfig{} : load_bench_config(a.config_path);
    if (!a.sizes.empty()) config.sizes = a.sizes;
    if (!a.densities.empty()) {
        config.densities.clear();
        for (const auto& d : a.densities) config.densities.push_back(Density::parse(d));
    }
    if (!a.gambles.empty()) {
        config.gamble_kinds.clear();
        for (const auto& k : a.gambles) config.gamble_kinds.push_back(parse_gamble_kind(k));
    }
    if (a.repetitions) config.repetitions = *a.repetitions;
    if (a.seed) config.seed = *a.seed;
    if (a.algorithm == "iterative") config.algorithms = {Algorithm::iterative};
    if (a.algorithm == "priority") config.algorithms = {Algorithm::priority};
    if (a.algorithm == "both") config.algorithms = {Algorithm::iterative, Algorithm::priority};

    auto rows = run_benchmark(config, &err);

    std::ostream* csv = &out;
    std::ofstream file;
    if (!a.out_path.empty()) {
        file.open(a.out_path);
        if (!file) throw ValidationError("cannot write '" + a.out_path + "'");
        csv = &file;
    }
    write_bench_csv(*csv, rows);
    // Keep stdout pure CSV when no output file is given.
    write_timing_summary(a.out_path.empty() ? err : out, rows);

    bool all_agree = std::all_of(rows.begin(), rows.end(), [](const BenchRow& r) { return r.agreement.value_or(true); });
    if (!all_agree) {
        err << "error: solvers disagreed on at least one instance\n";
        return kDisagreement;
    }
    return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Optimal cop strategies against a known gambler distribution", "copchase"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    auto* solve_cmd = app.add_subcommand("solve", "Compute T(v), the strategy and chase paths for every vertex");
    solve_cmd->add_option("instance", solve_args.instance, "Instance file (JSON or edge list)")->required();
    solve_cmd->add_option("--algorithm", solve_args.algorithm)
        ->check(CLI::IsMember({"iterative", "priority", "both"}))
        ->capture_default_str();
    solve_cmd->add_option("--format", solve_args.format)->check(CLI::IsMember({"json", "table"}))->capture_default_str();
    solve_cmd->add_flag("--permissive", solve_args.permissive, "Accept gambles summing to less than 1");

    CheckArgs check_args;
    auto* check_cmd = app.add_subcommand("check", "Compare both solvers against brute-force strategy enumeration");
    check_cmd->add_option("instance", check_args.instance, "Instance file")->required();
    check_cmd->add_option("--cap", check_args.cap, "Maximum number of strategies to enumerate")->capture_default_str();
    check_cmd->add_flag("--permissive", check_args.permissive, "Accept gambles summing to less than 1");

    SimulateArgs sim_args;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo chase from one start vertex");
    sim_cmd->add_option("instance", sim_args.instance, "Instance file")->required();
    sim_cmd->add_option("--start", sim_args.start, "Start vertex label (default: first vertex)");
    sim_cmd->add_option("--trials", sim_args.trials)->check(CLI::PositiveNumber)->capture_default_str();
    sim_cmd->add_option("--seed", sim_args.seed)->capture_default_str();
    sim_cmd->add_option("--round-cap", sim_args.round_cap, "Rounds before a trial counts as truncated")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sim_cmd->add_option("--strategy", sim_args.strategy)->check(CLI::IsMember({"solved", "stay"}))->capture_default_str();
    sim_cmd->add_flag("--permissive", sim_args.permissive, "Parse sub-distributions (rejected for simulation)");

    BenchArgs bench_args;
    auto* bench_cmd = app.add_subcommand("bench", "Time both solvers on random instances and write CSV");
    bench_cmd->add_option("--config", bench_args.config_path, "JSON bench config")->check(CLI::ExistingFile);
    bench_cmd->add_option("--out", bench_args.out_path, "CSV output path (default: stdout)");
    bench_cmd->add_option("--sizes", bench_args.sizes, "Vertex counts")->delimiter(',');
    bench_cmd->add_option("--densities", bench_args.densities, "Densities: p=<prob>, m=<edges>, m=<k>n")->delimiter(',');
    bench_cmd->add_option("--gambles", bench_args.gambles, "uniform, dirichlet, sparse_support")->delimiter(',');
    bench_cmd->add_option("--repetitions", bench_args.repetitions)->check(CLI::PositiveNumber);
    bench_cmd->add_option("--seed", bench_args.seed);
    bench_cmd->add_option("--algorithm", bench_args.algorithm)->check(CLI::IsMember({"iterative", "priority", "both"}));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kInputError;
    }

    try {
        if (*solve_cmd) return cmd_solve(solve_args, out, err);
        if (*check_cmd) return cmd_check(check_args, out, err);
        if (*sim_cmd) return cmd_simulate(sim_args, out, err);
        if (*bench_cmd) return cmd_bench(bench_args, out, err);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const InstanceTooLargeError& e) {
        err << "error: " << e.what() << '\n';
        return kOracleCap;
    } catch (const UnsupportedSimulationInput& e) {
        err << "error: " << e.what() << '\n';
        return kUnsupportedSimulation;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternalError;
    }
    return kInternalError;
}

}  // namespace copchase::cli
