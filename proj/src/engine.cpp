#include "minipregel/engine.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "minipregel/checkpoint.hpp"

namespace minipregel {

std::vector<Message> deliver_messages(
    const std::vector<std::vector<Message>>& outboxes, bool deterministic) {
    std::size_t total = 0;
    for (const auto& ob : outboxes) {
        total += ob.size();
    }
    std::vector<Message> all;
    all.reserve(total);
    for (const auto& ob : outboxes) {
        all.insert(all.end(), ob.begin(), ob.end());
    }
    if (deterministic) {
        std::sort(all.begin(), all.end(), [](const Message& a, const Message& b) {
            return std::tie(a.target, a.sender, a.payload) <
                   std::tie(b.target, b.sender, b.payload);
        });
    } else {
        // Group by target but keep arrival order inside each group.
        std::stable_sort(all.begin(), all.end(),
                         [](const Message& a, const Message& b) {
                             return a.target < b.target;
                         });
    }
    return all;
}

double apply_combiner(std::span<const double> payloads,
                      const CombinerFn& combiner) {
    if (payloads.empty()) {
        throw EngineError("apply_combiner called with an empty inbox");
    }
    double acc = payloads[0];
    for (std::size_t i = 1; i < payloads.size(); ++i) {
        acc = combiner(acc, payloads[i]);
    }
    return acc;
}

std::vector<Message> combine_inbox(std::vector<Message> delivered,
                                   const CombinerFn& combiner) {
    if (!combiner || delivered.empty()) {
        return delivered;
    }
    std::vector<Message> out;
    std::size_t i = 0;
    while (i < delivered.size()) {
        std::size_t j = i;
        double acc = delivered[i].payload;
        while (++j < delivered.size() &&
               delivered[j].target == delivered[i].target) {
            acc = combiner(acc, delivered[j].payload);
        }
        out.push_back(Message{delivered[i].target, delivered[i].sender, acc});
        i = j;
    }
    return out;
}

MutationOutcome apply_mutation_batch(const Graph& g,
                                     std::span<const MutationRequest> batch) {
    const std::uint64_t n_old = g.n_total();
    std::vector<std::uint8_t> live = g.live_mask();
    std::vector<Edge> edges = g.edge_list();
    MutationOutcome out;

    // Phase 1: edge removals. Every parallel copy of (src, dst) goes.
    std::unordered_set<std::uint64_t> removed_pairs;
    for (const MutationRequest& r : batch) {
        if (r.kind == MutationRequest::Kind::RemoveEdge && r.src < n_old &&
            r.dst < n_old) {
            removed_pairs.insert((static_cast<std::uint64_t>(r.src) << 32) |
                                 r.dst);
        }
    }
    if (!removed_pairs.empty()) {
        std::erase_if(edges, [&](const Edge& e) {
            return removed_pairs.count(
                       (static_cast<std::uint64_t>(e.src) << 32) | e.dst) != 0;
        });
    }

    // Phase 2: vertex removals drop the vertex and every incident edge.
    for (const MutationRequest& r : batch) {
        if (r.kind == MutationRequest::Kind::RemoveVertex && r.src < n_old &&
            live[r.src] != 0) {
            live[r.src] = 0;
            out.removed.push_back(r.src);
        }
    }
    if (!out.removed.empty()) {
        std::erase_if(edges, [&](const Edge& e) {
            return live[e.src] == 0 || live[e.dst] == 0;
        });
    }

    // Phase 3: vertex additions extend the id space.
    std::uint64_t n_new = n_old;
    for (const MutationRequest& r : batch) {
        if (r.kind == MutationRequest::Kind::AddVertex) {
            live.push_back(1);
            out.added.emplace_back(static_cast<VertexId>(n_new),
                                   r.initial_value);
            ++n_new;
        }
    }

    // Phase 4: edge additions; endpoints must exist by now.
    for (const MutationRequest& r : batch) {
        if (r.kind != MutationRequest::Kind::AddEdge) {
            continue;
        }
        if (r.src >= n_new || live[r.src] == 0 || r.dst >= n_new ||
            live[r.dst] == 0) {
            throw EngineError("add_edge " + std::to_string(r.src) + " -> " +
                              std::to_string(r.dst) +
                              ": vertex does not exist after the add phase");
        }
        edges.push_back(Edge{r.src, r.dst, r.weight});
    }

    out.graph = Graph::from_parts(n_new, std::move(edges), g.label_table(),
                                  std::move(live));
    return out;
}

Graph apply_mutations(std::span<const MutationRequest> requests,
                      const Graph& g) {
    return apply_mutation_batch(g, requests).graph;
}

namespace {

struct PendingMutation {
    VertexId issuer = 0;
    std::uint64_t seq = 0;
    MutationRequest request;
};

struct WorkerBuffers {
    std::vector<Message> outbox;
    std::vector<PendingMutation> mutations;
    std::vector<double> agg_partial;
    double l1_delta = 0.0;
    std::uint64_t computed = 0;
    std::uint64_t mutation_seq = 0;
    bool failed = false;
    std::string error;
};

struct InboxRun {
    std::uint64_t offset = 0;
    std::uint64_t length = 0;
};

class Engine;

// One reusable context per worker; re-pointed at each vertex in turn.
class WorkerContext final : public ComputeContext {
public:
    WorkerContext(Engine& eng, WorkerBuffers& buf, std::uint64_t superstep,
                  bool probe)
        : eng_(eng), buf_(buf), superstep_(superstep), probe_(probe) {}

    void attach(VertexId v) { v_ = v; }

    VertexId vertex() const override { return v_; }
    std::uint64_t superstep() const override { return superstep_; }
    std::uint64_t num_vertices() const override;

    double value() const override;
    void set_value(double v) override;

    std::span<const OutEdge> out_edges() const override;

    void send(VertexId target, double payload) override;
    void send_to_all_neighbors(double payload) override;

    void vote_to_halt() override;

    double aggregated(const std::string& name) const override;
    void aggregate(const std::string& name, double contribution) override;

    void add_vertex(std::optional<double> initial_value) override;
    void remove_vertex(VertexId v) override;
    void add_edge(VertexId src, VertexId dst, double weight) override;
    void remove_edge(VertexId src, VertexId dst) override;

    std::uint64_t probe_messages = 0;

private:
    void push_mutation(MutationRequest r);

    Engine& eng_;
    WorkerBuffers& buf_;
    std::uint64_t superstep_ = 0;
    bool probe_ = false;
    VertexId v_ = 0;
};

class Engine {
public:
    Engine(const VertexProgram& program, const Graph& graph,
           const EngineConfig& cfg)
        : program_(program), cfg_(cfg), graph_(graph) {
        validate_config();
        init_state();
    }

    RunResult run();

private:
    friend class WorkerContext;

    void validate_config() const {
        if (cfg_.workers == 0) {
            throw ConfigError("workers must be at least 1");
        }
        if (cfg_.max_supersteps == 0) {
            throw ConfigError("max_supersteps must be at least 1");
        }
        if (cfg_.failure_plan) {
            if (cfg_.checkpoint_interval == 0) {
                throw ConfigError(
                    "failure_plan requires checkpoint_interval > 0");
            }
            if (cfg_.failure_plan->worker >= cfg_.workers) {
                throw ConfigError("failure_plan worker index out of range");
            }
        }
    }

    void init_state();

    void take_checkpoint();
    void restore_from(const std::vector<std::uint8_t>& blob);
    void rebuild_runs();
    void compute_phase(std::uint64_t s);
    void run_worker(std::uint32_t w, std::uint64_t s);
    void barrier_deliver(SuperstepMetrics& row);
    void barrier_aggregate();
    void barrier_mutate();
    std::uint64_t count_active() const;
    void quiescence_probe(RunResult& result, std::uint64_t s);

    const VertexProgram& program_;
    EngineConfig cfg_;
    Graph graph_;
    LabelTable initial_labels_;

    std::vector<double> values_;
    std::vector<std::uint8_t> halted_;
    std::vector<Message> inbox_;
    std::vector<double> inbox_payloads_;
    std::vector<InboxRun> runs_;

    std::vector<AggregatorSpec> agg_specs_;
    std::unordered_map<std::string, std::size_t> agg_slots_;
    std::vector<double> agg_global_;

    std::vector<WorkerBuffers> bufs_;
    CombinerFn combiner_;

    std::vector<std::uint8_t> last_blob_;
    bool have_blob_ = false;
    bool failure_pending_ = false;

    std::uint64_t inbox_superstep_ = 0;  // superstep the inbox was built for
};

std::uint64_t WorkerContext::num_vertices() const {
    return eng_.graph_.live_count();
}

double WorkerContext::value() const { return eng_.values_[v_]; }

void WorkerContext::set_value(double v) { eng_.values_[v_] = v; }

std::span<const OutEdge> WorkerContext::out_edges() const {
    return eng_.graph_.out_edges(v_);
}

void WorkerContext::send(VertexId target, double payload) {
    if (!eng_.graph_.is_live(target)) {
        throw EngineError("message to nonexistent vertex " +
                          std::to_string(target));
    }
    if (probe_) {
        ++probe_messages;
        return;
    }
    buf_.outbox.push_back(Message{target, v_, payload});
}

void WorkerContext::send_to_all_neighbors(double payload) {
    for (const OutEdge& e : eng_.graph_.out_edges(v_)) {
        send(e.target, payload);
    }
}

void WorkerContext::vote_to_halt() { eng_.halted_[v_] = 1; }

double WorkerContext::aggregated(const std::string& name) const {
    auto it = eng_.agg_slots_.find(name);
    if (it == eng_.agg_slots_.end()) {
        throw EngineError("unknown aggregator \"" + name + "\"");
    }
    return eng_.agg_global_[it->second];
}

void WorkerContext::aggregate(const std::string& name, double contribution) {
    auto it = eng_.agg_slots_.find(name);
    if (it == eng_.agg_slots_.end()) {
        throw EngineError("unknown aggregator \"" + name + "\"");
    }
    double& slot = buf_.agg_partial[it->second];
    slot = eng_.agg_specs_[it->second].reduce(slot, contribution);
}

void WorkerContext::push_mutation(MutationRequest r) {
    if (probe_) {
        return;
    }
    buf_.mutations.push_back(PendingMutation{v_, buf_.mutation_seq++, r});
}

void WorkerContext::add_vertex(std::optional<double> initial_value) {
    MutationRequest r;
    r.kind = MutationRequest::Kind::AddVertex;
    r.initial_value = initial_value;
    push_mutation(r);
}

void WorkerContext::remove_vertex(VertexId v) {
    MutationRequest r;
    r.kind = MutationRequest::Kind::RemoveVertex;
    r.src = v;
    push_mutation(r);
}

void WorkerContext::add_edge(VertexId src, VertexId dst, double weight) {
    MutationRequest r;
    r.kind = MutationRequest::Kind::AddEdge;
    r.src = src;
    r.dst = dst;
    r.weight = weight;
    push_mutation(r);
}

void WorkerContext::remove_edge(VertexId src, VertexId dst) {
    MutationRequest r;
    r.kind = MutationRequest::Kind::RemoveEdge;
    r.src = src;
    r.dst = dst;
    push_mutation(r);
}

void Engine::init_state() {
    if (graph_.live_count() == 0) {
        throw EngineError("graph is empty");
    }
    initial_labels_ = graph_.label_table();

    agg_specs_ = program_.aggregators();
    for (std::size_t i = 0; i < agg_specs_.size(); ++i) {
        if (!agg_specs_[i].reduce) {
            throw ConfigError("aggregator \"" + agg_specs_[i].name +
                              "\" has no reduce function");
        }
        if (!agg_slots_.emplace(agg_specs_[i].name, i).second) {
            throw ConfigError("duplicate aggregator \"" + agg_specs_[i].name +
                              "\"");
        }
        agg_global_.push_back(agg_specs_[i].identity);
    }

    const std::uint64_t n = graph_.n_total();
    values_.assign(n, 0.0);
    halted_.assign(n, 0);
    for (std::uint64_t v = 0; v < n; ++v) {
        if (graph_.is_live(static_cast<VertexId>(v))) {
            values_[v] = program_.initial_value(static_cast<VertexId>(v),
                                                graph_.live_count());
        } else {
            halted_[v] = 1;
        }
    }
    runs_.assign(n, InboxRun{});
    combiner_ = program_.combiner();
    failure_pending_ = cfg_.failure_plan.has_value();
}

void Engine::rebuild_runs() {
    const std::uint64_t n = graph_.n_total();
    runs_.assign(n, InboxRun{});
    inbox_payloads_.resize(inbox_.size());
    std::size_t i = 0;
    while (i < inbox_.size()) {
        std::size_t j = i;
        while (j < inbox_.size() && inbox_[j].target == inbox_[i].target) {
            inbox_payloads_[j] = inbox_[j].payload;
            ++j;
        }
        runs_[inbox_[i].target] = InboxRun{i, j - i};
        i = j;
    }
}

void Engine::take_checkpoint() {
    EngineState state;
    state.superstep = inbox_superstep_;
    state.n_total = graph_.n_total();
    state.values = values_;
    state.halted = halted_;
    state.inbox = inbox_;
    for (std::size_t i = 0; i < agg_specs_.size(); ++i) {
        state.aggregators.emplace_back(agg_specs_[i].name, agg_global_[i]);
    }
    std::sort(state.aggregators.begin(), state.aggregators.end());
    state.live = graph_.live_mask();
    state.edges = graph_.edge_list();
    last_blob_ = make_checkpoint(state);
    have_blob_ = true;
}

void Engine::restore_from(const std::vector<std::uint8_t>& blob) {
    EngineState state = restore_checkpoint(blob);
    graph_ = Graph::from_parts(state.n_total, std::move(state.edges),
                               initial_labels_, std::move(state.live));
    values_ = std::move(state.values);
    halted_ = std::move(state.halted);
    inbox_ = std::move(state.inbox);
    for (auto& slot : agg_global_) {
        slot = 0.0;
    }
    for (const auto& [name, value] : state.aggregators) {
        auto it = agg_slots_.find(name);
        if (it == agg_slots_.end()) {
            throw CheckpointError("checkpoint names unknown aggregator \"" +
                                  name + "\"");
        }
        agg_global_[it->second] = value;
    }
    inbox_superstep_ = state.superstep;
    rebuild_runs();
}

void Engine::run_worker(std::uint32_t w, std::uint64_t s) {
    WorkerBuffers& buf = bufs_[w];
    WorkerContext ctx(*this, buf, s, false);
    const std::uint64_t n = graph_.n_total();
    try {
        for (std::uint64_t v = w; v < n; v += cfg_.workers) {
            const auto id = static_cast<VertexId>(v);
            if (!graph_.is_live(id)) {
                continue;
            }
            const InboxRun run = runs_[v];
            if (halted_[v] != 0) {
                if (run.length == 0) {
                    continue;
                }
                halted_[v] = 0;  // a message reactivates a halted vertex
            }
            const double before = values_[v];
            ctx.attach(id);
            std::span<const double> msgs;
            if (run.length > 0) {
                msgs = {inbox_payloads_.data() + run.offset, run.length};
            }
            try {
                program_.compute(ctx, msgs);
            } catch (const std::exception& e) {
                throw EngineError("compute failed at vertex " +
                                  std::to_string(v) + ", superstep " +
                                  std::to_string(s) + ": " + e.what());
            }
            buf.l1_delta += std::fabs(values_[v] - before);
            ++buf.computed;
        }
    } catch (const std::exception& e) {
        buf.failed = true;
        buf.error = e.what();
    }
}

void Engine::compute_phase(std::uint64_t s) {
    assert(inbox_superstep_ == s);  // messages are one superstep old
    bufs_.assign(cfg_.workers, WorkerBuffers{});
    for (auto& buf : bufs_) {
        buf.agg_partial.resize(agg_specs_.size());
        for (std::size_t i = 0; i < agg_specs_.size(); ++i) {
            buf.agg_partial[i] = agg_specs_[i].identity;
        }
    }
    if (cfg_.workers == 1) {
        run_worker(0, s);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(cfg_.workers);
        for (std::uint32_t w = 0; w < cfg_.workers; ++w) {
            threads.emplace_back([this, w, s] { run_worker(w, s); });
        }
        for (auto& t : threads) {
            t.join();
        }
    }
    for (const auto& buf : bufs_) {
        if (buf.failed) {
            throw EngineError(buf.error);
        }
    }
}

void Engine::barrier_deliver(SuperstepMetrics& row) {
    std::vector<std::vector<Message>> outboxes;
    outboxes.reserve(bufs_.size());
    for (auto& buf : bufs_) {
        outboxes.push_back(std::move(buf.outbox));
    }
    std::vector<Message> delivered =
        deliver_messages(outboxes, cfg_.deterministic);
    row.messages_sent = delivered.size();
    inbox_ = combine_inbox(std::move(delivered), combiner_);
    row.messages_combined = row.messages_sent - inbox_.size();
}

void Engine::barrier_aggregate() {
    for (std::size_t i = 0; i < agg_specs_.size(); ++i) {
        double acc = agg_specs_[i].identity;
        for (const auto& buf : bufs_) {
            acc = agg_specs_[i].reduce(acc, buf.agg_partial[i]);
        }
        agg_global_[i] = acc;
    }
}

void Engine::barrier_mutate() {
    std::vector<PendingMutation> batch;
    for (auto& buf : bufs_) {
        batch.insert(batch.end(), buf.mutations.begin(), buf.mutations.end());
    }
    if (batch.empty()) {
        return;
    }
    std::sort(batch.begin(), batch.end(),
              [](const PendingMutation& a, const PendingMutation& b) {
                  return std::tie(a.issuer, a.seq) < std::tie(b.issuer, b.seq);
              });
    std::vector<MutationRequest> requests;
    requests.reserve(batch.size());
    for (const auto& p : batch) {
        requests.push_back(p.request);
    }
    MutationOutcome outcome = apply_mutation_batch(graph_, requests);
    graph_ = std::move(outcome.graph);

    const std::uint64_t n_new = graph_.n_total();
    values_.resize(n_new, 0.0);
    halted_.resize(n_new, 0);
    for (const auto& [id, init] : outcome.added) {
        values_[id] =
            init ? *init : program_.initial_value(id, graph_.live_count());
        halted_[id] = 0;  // new vertices start active
    }
    for (VertexId id : outcome.removed) {
        halted_[id] = 1;
    }
    if (!outcome.removed.empty()) {
        std::erase_if(inbox_, [this](const Message& m) {
            return !graph_.is_live(m.target);
        });
    }
}

std::uint64_t Engine::count_active() const {
    std::uint64_t active = 0;
    for (std::uint64_t v = 0; v < graph_.n_total(); ++v) {
        if (!graph_.is_live(static_cast<VertexId>(v))) {
            continue;
        }
        if (halted_[v] == 0 || runs_[v].length > 0) {
            ++active;
        }
    }
    return active;
}

void Engine::quiescence_probe(RunResult& result, std::uint64_t s) {
    std::vector<double> saved_values = values_;
    std::vector<std::uint8_t> saved_halted = halted_;
    WorkerBuffers scratch;
    scratch.agg_partial.assign(agg_specs_.size(), 0.0);
    WorkerContext ctx(*this, scratch, s, true);
    QuiescenceProbe probe;
    for (std::uint64_t v = 0; v < graph_.n_total(); ++v) {
        const auto id = static_cast<VertexId>(v);
        if (!graph_.is_live(id)) {
            continue;
        }
        const double before = values_[v];
        ctx.attach(id);
        program_.compute(ctx, {});
        if (values_[v] != before) {
            ++probe.values_changed;
        }
    }
    probe.messages_sent = ctx.probe_messages;
    values_ = std::move(saved_values);
    halted_ = std::move(saved_halted);
    result.probe = probe;
}

RunResult Engine::run() {
    RunResult result;
    std::uint64_t s = 0;
    inbox_superstep_ = 0;
    TerminationReason reason = TerminationReason::SuperstepCap;

    while (true) {
        if (cfg_.checkpoint_interval > 0 &&
            s % cfg_.checkpoint_interval == 0) {
            take_checkpoint();
        }

        const auto t0 = std::chrono::steady_clock::now();
        compute_phase(s);

        SuperstepMetrics row;
        row.superstep = s;
        for (const auto& buf : bufs_) {
            row.l1_delta += buf.l1_delta;
        }

        if (failure_pending_ && cfg_.failure_plan->superstep == s) {
            // The planned worker dies mid-superstep; its partition state is
            // gone, so the whole group rewinds to the latest checkpoint.
            failure_pending_ = false;
            for (const auto& buf : bufs_) {
                row.messages_sent += buf.outbox.size();
                row.active_after += buf.computed;
            }
            row.wall_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
            result.metrics.push_back(row);
            ++result.supersteps_executed;
            ++result.recoveries;
            restore_from(last_blob_);
            s = inbox_superstep_;
            continue;
        }

        barrier_deliver(row);
        barrier_aggregate();
        barrier_mutate();
        rebuild_runs();
        inbox_superstep_ = s + 1;

        row.active_after = count_active();
        row.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        result.metrics.push_back(row);
        ++result.supersteps_executed;
        if (cfg_.on_superstep_end) {
            cfg_.on_superstep_end(s, values_);
        }

        if (row.active_after == 0) {
            reason = TerminationReason::Quiescence;
            ++s;
            break;
        }
        if (s + 1 == cfg_.max_supersteps) {
            reason = TerminationReason::SuperstepCap;
            ++s;
            break;
        }
        if (cfg_.convergence_threshold && s >= 1 &&
            row.l1_delta < *cfg_.convergence_threshold) {
            reason = TerminationReason::Convergence;
            ++s;
            break;
        }
        ++s;
    }

    result.final_superstep = s;
    result.termination = reason;
    if (cfg_.probe_quiescence && reason == TerminationReason::Quiescence) {
        quiescence_probe(result, s);
    }
    result.values = std::move(values_);
    result.graph = std::move(graph_);
    return result;
}

} // namespace

RunResult run_program(const VertexProgram& program, const Graph& graph,
                      const EngineConfig& cfg) {
    Engine engine(program, graph, cfg);
    return engine.run();
}

} // namespace minipregel
