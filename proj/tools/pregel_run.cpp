// Command-line runner: load an edge list, execute a built-in vertex
// program, write per-vertex values, report metrics, and optionally check
// the result against the matching sequential oracle.
//
// Exit codes: 0 success, 1 usage error, 2 load error, 3 run error,
// 4 verification failure.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "minipregel/algorithms.hpp"
#include "minipregel/engine.hpp"
#include "minipregel/graph.hpp"
#include "minipregel/io.hpp"
#include "minipregel/oracles.hpp"

namespace {

using namespace minipregel;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitLoad = 2;
constexpr int kExitRun = 3;
constexpr int kExitVerify = 4;

struct CliConfig {
    std::string algorithm;
    std::string graph_path;
    std::string output_path;
    std::uint32_t workers = 4;
    std::uint64_t max_supersteps = 30;
    double teleport = 0.15;
    std::string source;
    std::optional<double> convergence;
    bool deterministic = true;
    std::uint64_t checkpoint_interval = 0;
    std::string fail_worker;
    bool verify = false;
};

int usage_error(const std::string& message) {
    std::cerr << "error: " << message << "\n";
    return kExitUsage;
}

bool parse_fail_worker(const std::string& spec, FailurePlan& plan) {
    const auto at = spec.find('@');
    if (at == std::string::npos || at == 0 || at + 1 == spec.size()) {
        return false;
    }
    try {
        std::size_t used = 0;
        const unsigned long w = std::stoul(spec.substr(0, at), &used);
        if (used != at) {
            return false;
        }
        const std::string rest = spec.substr(at + 1);
        const unsigned long long s = std::stoull(rest, &used);
        if (used != rest.size()) {
            return false;
        }
        plan.worker = static_cast<std::uint32_t>(w);
        plan.superstep = s;
    } catch (const std::exception&) {
        return false;
    }
    return true;
}

bool undirected_algorithm(const std::string& algorithm) {
    // Flooding and community programs assume information can flow both ways
    // along an input edge; the loader symmetrizes for them.
    return algorithm == "maxvalue" || algorithm == "wcc" ||
           algorithm == "labelprop";
}

double linf_live(const Graph& g, std::span<const double> a,
                 std::span<const double> b) {
    double linf = 0.0;
    for (std::uint64_t v = 0; v < g.n_total(); ++v) {
        if (!g.is_live(static_cast<VertexId>(v))) {
            continue;
        }
        const double x = a[v];
        const double y = b[v];
        if (std::isinf(x) && std::isinf(y) && x == y) {
            continue;
        }
        const double d = std::fabs(x - y);
        linf = std::max(linf, d);
    }
    return linf;
}

int run(const CliConfig& cli) {
    // Load phase.
    ParsedGraph doc;
    Graph graph;
    std::vector<double> init_values;
    VertexId source = 0;
    try {
        std::ifstream in(cli.graph_path, std::ios::binary);
        if (!in) {
            throw Error("cannot open graph file \"" + cli.graph_path + "\"");
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        doc = parse_edge_list(buf.str());
        graph = graph_from_parsed(doc, !undirected_algorithm(cli.algorithm));
        init_values = dense_initial_values(doc, graph, 0.0);
        if (cli.algorithm == "sssp" || cli.algorithm == "bfs") {
            const auto id = graph.find_vertex(cli.source);
            if (!id) {
                throw Error("source vertex \"" + cli.source +
                            "\" is not in the graph");
            }
            source = *id;
        }
    } catch (const std::exception& e) {
        std::cerr << "load error: " << e.what() << "\n";
        return kExitLoad;
    }

    // Run phase.
    std::unique_ptr<VertexProgram> program;
    RunResult result;
    try {
        if (cli.algorithm == "pagerank") {
            PageRankConfig cfg;
            cfg.teleport = cli.teleport;
            cfg.damping = 1.0 - cli.teleport;
            cfg.max_supersteps = cli.max_supersteps;
            program = pagerank_program(cfg);
        } else if (cli.algorithm == "maxvalue") {
            program = max_value_program(init_values);
        } else if (cli.algorithm == "sssp") {
            program = sssp_program(source);
        } else if (cli.algorithm == "bfs") {
            program = bfs_program(source);
        } else if (cli.algorithm == "wcc") {
            program = wcc_program();
        } else {
            program = label_propagation_program(cli.max_supersteps);
        }

        EngineConfig cfg;
        cfg.workers = cli.workers;
        cfg.max_supersteps = cli.max_supersteps;
        cfg.deterministic = cli.deterministic;
        cfg.checkpoint_interval = cli.checkpoint_interval;
        cfg.convergence_threshold = cli.convergence;
        if (!cli.fail_worker.empty()) {
            FailurePlan plan;
            parse_fail_worker(cli.fail_worker, plan);  // validated earlier
            cfg.failure_plan = plan;
        }
        result = run_program(*program, graph, cfg);

        std::ofstream out(cli.output_path, std::ios::binary);
        if (!out) {
            throw Error("cannot open output file \"" + cli.output_path + "\"");
        }
        write_vertex_values(result.values, result.graph, out);
        out.flush();
        if (!out) {
            throw Error("writing output file failed");
        }
    } catch (const std::exception& e) {
        std::cerr << "run error: " << e.what() << "\n";
        return kExitRun;
    }

    write_metrics(result, std::cerr);

    if (!cli.verify) {
        return kExitOk;
    }

    // Verify phase: compare against the matching sequential oracle.
    const Graph& g = result.graph;
    std::vector<double> expected;
    double tolerance = 0.0;
    if (cli.algorithm == "pagerank") {
        // Value updates start at superstep 1, so a run that stopped before
        // superstep s has applied s - 1 of them.
        const std::uint64_t iters =
            result.final_superstep > 0 ? result.final_superstep - 1 : 0;
        expected = oracles::pagerank_power_iteration(
            g, cli.teleport, iters, 1.0 / static_cast<double>(g.live_count()));
        tolerance = 1e-9;
    } else if (cli.algorithm == "sssp") {
        expected = oracles::dijkstra(g, source);
    } else if (cli.algorithm == "bfs") {
        expected = oracles::bfs_levels(g, source);
    } else if (cli.algorithm == "wcc") {
        expected = oracles::components_union_find(g);
    } else {
        // maxvalue: the flood converges to each component's maximum.
        const std::vector<double> comp = oracles::components_union_find(g);
        std::vector<double> comp_max(g.n_total(),
                                     -std::numeric_limits<double>::infinity());
        for (std::uint64_t v = 0; v < g.n_total(); ++v) {
            if (g.is_live(static_cast<VertexId>(v))) {
                const auto root = static_cast<std::size_t>(comp[v]);
                comp_max[root] = std::max(comp_max[root], init_values[v]);
            }
        }
        expected.assign(g.n_total(), 0.0);
        for (std::uint64_t v = 0; v < g.n_total(); ++v) {
            if (g.is_live(static_cast<VertexId>(v))) {
                expected[v] = comp_max[static_cast<std::size_t>(comp[v])];
            }
        }
    }

    const double deviation = linf_live(g, result.values, expected);
    const bool ok = deviation <= tolerance;
    std::cerr << "verify: " << cli.algorithm << " max deviation "
              << format_value(deviation) << (ok ? " (ok)" : " (mismatch)")
              << "\n";
    return ok ? kExitOk : kExitVerify;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"BSP vertex-centric graph runner"};
    CliConfig cli;

    app.add_option("--algorithm", cli.algorithm,
                   "One of pagerank, maxvalue, sssp, bfs, wcc, labelprop")
        ->required()
        ->check(CLI::IsMember({"pagerank", "maxvalue", "sssp", "bfs", "wcc",
                               "labelprop"}));
    app.add_option("--graph", cli.graph_path, "Edge list input path")
        ->required();
    app.add_option("--output", cli.output_path, "Vertex value output path")
        ->required();
    app.add_option("--workers", cli.workers, "Worker count (default 4)")
        ->check(CLI::PositiveNumber);
    app.add_option("--max-supersteps", cli.max_supersteps,
                   "Superstep cap (default 30)")
        ->check(CLI::PositiveNumber);
    app.add_option("--teleport", cli.teleport,
                   "PageRank teleport probability (default 0.15)");
    app.add_option("--source", cli.source, "Source vertex label (sssp/bfs)");
    app.add_option("--convergence", cli.convergence,
                   "Stop when the L1 value delta drops below this");
    app.add_flag("--deterministic,!--no-deterministic", cli.deterministic,
                 "Deterministic message ordering (default on)");
    app.add_option("--checkpoint-interval", cli.checkpoint_interval,
                   "Supersteps between checkpoints (0 = off)");
    app.add_option("--fail-worker", cli.fail_worker,
                   "Kill worker w at superstep s once, as \"w@s\"");
    app.add_flag("--verify", cli.verify,
                 "Check the result against the sequential oracle");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    const bool needs_source =
        cli.algorithm == "sssp" || cli.algorithm == "bfs";
    if (needs_source && cli.source.empty()) {
        return usage_error("--source is required for " + cli.algorithm);
    }
    if (!needs_source && !cli.source.empty()) {
        return usage_error("--source only applies to sssp and bfs");
    }
    if (!cli.fail_worker.empty()) {
        FailurePlan plan;
        if (!parse_fail_worker(cli.fail_worker, plan)) {
            return usage_error("--fail-worker expects \"w@s\"");
        }
        if (cli.checkpoint_interval == 0) {
            return usage_error(
                "--fail-worker requires --checkpoint-interval > 0");
        }
        if (plan.worker >= cli.workers) {
            return usage_error("--fail-worker index exceeds --workers");
        }
    }
    if (cli.verify && cli.algorithm == "labelprop") {
        return usage_error("--verify has no oracle for labelprop");
    }

    return run(cli);
}
