#include <doctest.h>

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "minipregel/algorithms.hpp"
#include "minipregel/checkpoint.hpp"
#include "minipregel/engine.hpp"
#include "support/test_graphs.hpp"

using namespace minipregel;

namespace {

EngineState sample_state() {
    EngineState s;
    s.superstep = 12;
    s.n_total = 13;  // odd count so the bitmaps straddle a byte boundary
    s.values.resize(13);
    s.halted.assign(13, 0);
    s.live.assign(13, 1);
    for (std::size_t v = 0; v < 13; ++v) {
        s.values[v] = 0.125 * static_cast<double>(v) - 0.5;
    }
    s.values[3] = std::numeric_limits<double>::infinity();
    s.halted[1] = 1;
    s.halted[8] = 1;
    s.halted[12] = 1;
    s.live[5] = 0;
    s.inbox = {{0, 2, 0.25}, {0, 7, -1.5}, {9, 0, 3.0}};
    s.aggregators = {{"delta", 0.75}, {"total", 1.0}};
    s.edges = {{0, 1, 1.0}, {2, 0, 2.5}, {9, 12, 0.0}};
    return s;
}

} // namespace

TEST_CASE("checkpoint round-trips every field") {
    const EngineState original = sample_state();
    const auto blob = make_checkpoint(original);
    const EngineState back = restore_checkpoint(blob);
    CHECK(back == original);
}

TEST_CASE("checkpoint round-trips the empty extremes") {
    EngineState s;
    s.superstep = 0;
    s.n_total = 1;
    s.values = {0.0};
    s.halted = {0};
    s.live = {1};
    const auto blob = make_checkpoint(s);
    CHECK(restore_checkpoint(blob) == s);
}

TEST_CASE("blob starts with the magic bytes") {
    const auto blob = make_checkpoint(sample_state());
    REQUIRE_GE(blob.size(), 4);
    CHECK_EQ(blob[0], 'P');
    CHECK_EQ(blob[1], 'G');
    CHECK_EQ(blob[2], 'L');
    CHECK_EQ(blob[3], 'C');
}

TEST_CASE("bad magic is rejected") {
    auto blob = make_checkpoint(sample_state());
    blob[0] = 'X';
    CHECK_THROWS_AS(restore_checkpoint(blob), CheckpointError);
}

TEST_CASE("unsupported version is rejected") {
    auto blob = make_checkpoint(sample_state());
    blob[4] = 0xFF;  // version field sits right after the magic
    CHECK_THROWS_AS(restore_checkpoint(blob), CheckpointError);
}

TEST_CASE("every possible truncation is rejected") {
    const auto blob = make_checkpoint(sample_state());
    for (std::size_t len = 0; len < blob.size(); ++len) {
        const std::span<const std::uint8_t> cut(blob.data(), len);
        CHECK_THROWS_AS(restore_checkpoint(cut), CheckpointError);
    }
}

TEST_CASE("trailing garbage is rejected") {
    auto blob = make_checkpoint(sample_state());
    blob.push_back(0);
    CHECK_THROWS_AS(restore_checkpoint(blob), CheckpointError);
}

TEST_CASE("recovery replays from the newest checkpoint at the kill point") {
    std::mt19937_64 rng(91);
    const Graph g = testsupport::random_sinkless(rng, 40, 1, 6);
    const auto program = pagerank_program({0.15, 0.85, 12, {}});
    EngineConfig cfg;
    cfg.max_supersteps = 12;
    const RunResult baseline = run_program(*program, g, cfg);

    // Superstep 10 is itself a checkpoint boundary, so only superstep 10
    // is replayed.
    cfg.checkpoint_interval = 5;
    cfg.failure_plan = FailurePlan{0, 10};
    const RunResult r = run_program(*program, g, cfg);
    CHECK(r.values == baseline.values);
    CHECK_EQ(r.recoveries, 1);
    CHECK_EQ(r.supersteps_executed, baseline.supersteps_executed + 1);
    CHECK_EQ(r.final_superstep, baseline.final_superstep);
}

TEST_CASE("a kill right after the s=0 checkpoint replays the whole prefix") {
    std::mt19937_64 rng(92);
    const Graph g = testsupport::random_sinkless(rng, 25, 1, 4);
    const auto program = pagerank_program({0.15, 0.85, 8, {}});
    EngineConfig cfg;
    cfg.max_supersteps = 8;
    const RunResult baseline = run_program(*program, g, cfg);

    cfg.checkpoint_interval = 5;
    cfg.failure_plan = FailurePlan{1, 2};
    const RunResult r = run_program(*program, g, cfg);
    CHECK(r.values == baseline.values);
    CHECK_EQ(r.recoveries, 1);
    // Supersteps 0..2 ran, the failure rewound to 0, then 0..7 ran clean.
    CHECK_EQ(r.supersteps_executed, baseline.supersteps_executed + 3);
}

TEST_CASE("the failed attempt still reports a metrics row") {
    std::mt19937_64 rng(93);
    const Graph g = testsupport::random_sinkless(rng, 20, 1, 4);
    const auto program = pagerank_program({0.15, 0.85, 6, {}});
    EngineConfig cfg;
    cfg.max_supersteps = 6;
    cfg.checkpoint_interval = 2;
    cfg.failure_plan = FailurePlan{0, 3};
    const RunResult r = run_program(*program, g, cfg);
    CHECK_EQ(r.recoveries, 1);
    REQUIRE_EQ(r.metrics.size(), r.supersteps_executed);
    // Two rows carry superstep index 3: the killed attempt and its replay.
    std::uint64_t threes = 0;
    for (const auto& row : r.metrics) {
        if (row.superstep == 3) ++threes;
    }
    CHECK_EQ(threes, 2);
}

TEST_CASE("recovery also restores mutated topology") {
    // The program adds a vertex and an edge at superstep 1; the failure at
    // superstep 3 rewinds to the post-mutation checkpoint at 2.
    struct Mutator : VertexProgram {
        std::string name() const override { return "mutator"; }
        double initial_value(VertexId v, std::uint64_t) const override {
            return static_cast<double>(v);
        }
        void compute(ComputeContext& ctx,
                     std::span<const double>) const override {
            if (ctx.superstep() == 1 && ctx.vertex() == 0) {
                ctx.add_vertex(50.0);
                ctx.add_edge(0, 1, 2.0);
            }
            if (ctx.superstep() >= 4) {
                ctx.vote_to_halt();
            }
        }
    };
    const Graph g = testsupport::make_graph(2, {{0, 1, 1.0}, {1, 0, 1.0}});
    const Mutator program;
    EngineConfig cfg;
    cfg.max_supersteps = 6;
    const RunResult baseline = run_program(program, g, cfg);

    cfg.checkpoint_interval = 2;
    cfg.failure_plan = FailurePlan{0, 3};
    const RunResult r = run_program(program, g, cfg);
    CHECK_EQ(r.recoveries, 1);
    CHECK(r.values == baseline.values);
    CHECK(r.graph == baseline.graph);
    CHECK_EQ(r.graph.n_total(), 3);
    CHECK_EQ(r.graph.out_degree(0), 2);
    CHECK_EQ(r.values[2], 50.0);
}

TEST_CASE("aggregator values survive a restore") {
    // The aggregated total from the superstep before the kill must be
    // visible again after recovery, or the replay diverges.
    struct Summer : VertexProgram {
        std::string name() const override { return "summer"; }
        double initial_value(VertexId, std::uint64_t) const override {
            return 0.0;
        }
        std::vector<AggregatorSpec> aggregators() const override {
            return {{"acc", 0.0,
                     [](double a, double b) { return a + b; }}};
        }
        void compute(ComputeContext& ctx,
                     std::span<const double>) const override {
            ctx.aggregate("acc", 1.0);
            ctx.set_value(ctx.value() + ctx.aggregated("acc"));
            if (ctx.superstep() >= 5) {
                ctx.vote_to_halt();
            }
        }
    };
    const Graph g = testsupport::cycle_graph(3);
    const Summer program;
    EngineConfig cfg;
    cfg.max_supersteps = 7;
    const RunResult baseline = run_program(program, g, cfg);

    cfg.checkpoint_interval = 3;
    cfg.failure_plan = FailurePlan{0, 4};
    const RunResult r = run_program(program, g, cfg);
    CHECK_EQ(r.recoveries, 1);
    CHECK(r.values == baseline.values);
}
