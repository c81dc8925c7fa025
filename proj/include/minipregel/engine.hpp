#ifndef MINIPREGEL_ENGINE_HPP
#define MINIPREGEL_ENGINE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "minipregel/graph.hpp"
#include "minipregel/program.hpp"

namespace minipregel {

// A message buffered at superstep s and consumed by its target at s+1.
struct Message {
    VertexId target = 0;
    VertexId sender = 0;
    double payload = 0.0;

    friend bool operator==(const Message&, const Message&) = default;
};

// Kill worker `worker` once, while it executes superstep `superstep`.
struct FailurePlan {
    std::uint32_t worker = 0;
    std::uint64_t superstep = 0;
};

struct EngineConfig {
    std::uint32_t workers = 4;
    std::uint64_t max_supersteps = 30;
    bool deterministic = true;
    // Supersteps between checkpoints; 0 disables checkpointing.
    std::uint64_t checkpoint_interval = 0;
    // Requires checkpoint_interval > 0.
    std::optional<FailurePlan> failure_plan;
    // Optional early stop: L1 delta of the value vector below this ends the
    // run at the barrier.
    std::optional<double> convergence_threshold;
    // After quiescent termination, force one extra superstep over every live
    // vertex and record what it would have done. The probe's effects are
    // discarded.
    bool probe_quiescence = false;
    // Called at each committed barrier with (superstep, values).
    std::function<void(std::uint64_t, std::span<const double>)> on_superstep_end;
};

struct SuperstepMetrics {
    std::uint64_t superstep = 0;
    std::uint64_t active_after = 0;       // vertices due to compute next superstep
    std::uint64_t messages_sent = 0;      // before combining
    std::uint64_t messages_combined = 0;  // messages removed by the combiner
    double wall_ms = 0.0;
    double l1_delta = 0.0;                // sum of |value change| this superstep
};

enum class TerminationReason { Quiescence, SuperstepCap, Convergence };

struct QuiescenceProbe {
    std::uint64_t messages_sent = 0;
    std::uint64_t values_changed = 0;
};

struct RunResult {
    // Indexed by VertexId over the final graph's id space; only live
    // vertices carry meaningful values.
    std::vector<double> values;
    // Final topology, after any mutations.
    Graph graph;
    // Superstep executions performed, including replays after recovery.
    std::uint64_t supersteps_executed = 0;
    // Logical supersteps committed (replays collapse into one).
    std::uint64_t final_superstep = 0;
    std::uint64_t recoveries = 0;
    TerminationReason termination = TerminationReason::Quiescence;
    // One entry per execution, in execution order.
    std::vector<SuperstepMetrics> metrics;
    std::optional<QuiescenceProbe> probe;
};

// Runs the program to termination: quiescence (all halted, no messages in
// flight), the superstep cap, or convergence. Throws ConfigError for an
// invalid config and EngineError for an empty graph, a message to a dead
// vertex, an unknown aggregator, or a compute() exception (with vertex and
// superstep context).
RunResult run_program(const VertexProgram& program, const Graph& graph,
                      const EngineConfig& cfg);

// Merges per-worker outboxes into one inbox grouped by target (ascending).
// Deterministic mode additionally orders each target's run by
// (sender, payload); otherwise arrival order within a target is kept.
std::vector<Message> deliver_messages(
    const std::vector<std::vector<Message>>& outboxes, bool deterministic);

// Left fold over payloads. Requires a nonempty span and a valid combiner.
double apply_combiner(std::span<const double> payloads,
                      const CombinerFn& combiner);

// Collapses each target's run of a delivered inbox to a single message
// carrying the folded payload and the run's first sender. Without a
// combiner the inbox is returned unchanged.
std::vector<Message> combine_inbox(std::vector<Message> delivered,
                                   const CombinerFn& combiner);

struct MutationOutcome {
    Graph graph;
    // Newly assigned ids with the request's initial value, in creation order.
    std::vector<std::pair<VertexId, std::optional<double>>> added;
    std::vector<VertexId> removed;
};

// Applies one barrier's mutation batch in fixed phase order: remove_edge,
// remove_vertex, add_vertex, add_edge. remove_edge drops every parallel
// copy of (src, dst); removes of absent items are no-ops; duplicate adds
// are kept. add_edge referencing a vertex that does not exist after the
// add_vertex phase throws EngineError.
MutationOutcome apply_mutation_batch(const Graph& g,
                                     std::span<const MutationRequest> batch);

// Convenience wrapper returning just the mutated graph.
Graph apply_mutations(std::span<const MutationRequest> requests,
                      const Graph& g);

} // namespace minipregel

#endif // MINIPREGEL_ENGINE_HPP
