#include "minipregel/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace minipregel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class PageRank final : public VertexProgram {
public:
    explicit PageRank(PageRankConfig cfg) : cfg_(cfg) {
        if (!(cfg_.teleport > 0.0 && cfg_.teleport < 1.0)) {
            throw ConfigError("teleport must lie in (0, 1)");
        }
        if (std::fabs(cfg_.teleport + cfg_.damping - 1.0) > 1e-12) {
            throw ConfigError("damping must equal 1 - teleport");
        }
    }

    std::string name() const override { return "pagerank"; }

    double initial_value(VertexId, std::uint64_t n) const override {
        return cfg_.init_value ? *cfg_.init_value
                               : 1.0 / static_cast<double>(n);
    }

    void compute(ComputeContext& ctx,
                 std::span<const double> messages) const override {
        if (ctx.superstep() >= 1) {
            double sum = 0.0;
            for (double m : messages) {
                sum += m;
            }
            ctx.set_value(cfg_.teleport / static_cast<double>(ctx.num_vertices()) +
                          cfg_.damping * sum);
        }
        if (ctx.superstep() < cfg_.max_supersteps) {
            const auto edges = ctx.out_edges();
            if (!edges.empty()) {
                // A vertex with no out-edges spreads nothing; its mass drains.
                ctx.send_to_all_neighbors(ctx.value() /
                                          static_cast<double>(edges.size()));
            }
        } else {
            ctx.vote_to_halt();
        }
    }

    CombinerFn combiner() const override {
        return [](double a, double b) { return a + b; };
    }

private:
    PageRankConfig cfg_;
};

class MaxValue final : public VertexProgram {
public:
    explicit MaxValue(std::vector<double> init) : init_(std::move(init)) {}

    std::string name() const override { return "maxvalue"; }

    double initial_value(VertexId v, std::uint64_t) const override {
        return v < init_.size() ? init_[v] : 0.0;
    }

    void compute(ComputeContext& ctx,
                 std::span<const double> messages) const override {
        if (ctx.superstep() == 0) {
            ctx.send_to_all_neighbors(ctx.value());
            return;  // stay active so superstep 1 runs everywhere
        }
        double best = ctx.value();
        for (double m : messages) {
            best = std::max(best, m);
        }
        if (best > ctx.value()) {
            ctx.set_value(best);
            ctx.send_to_all_neighbors(best);
        } else {
            ctx.vote_to_halt();
        }
    }

    CombinerFn combiner() const override {
        return [](double a, double b) { return std::max(a, b); };
    }

private:
    std::vector<double> init_;
};

class Relaxation final : public VertexProgram {
public:
    Relaxation(VertexId source, bool unit_weights)
        : source_(source), unit_weights_(unit_weights) {}

    std::string name() const override { return unit_weights_ ? "bfs" : "sssp"; }

    double initial_value(VertexId v, std::uint64_t) const override {
        return v == source_ ? 0.0 : kInf;
    }

    void compute(ComputeContext& ctx,
                 std::span<const double> messages) const override {
        double best = ctx.value();
        for (double m : messages) {
            best = std::min(best, m);
        }
        const bool improved = best < ctx.value();
        if (improved) {
            ctx.set_value(best);
        }
        if (improved || (ctx.superstep() == 0 && ctx.vertex() == source_)) {
            for (const OutEdge& e : ctx.out_edges()) {
                ctx.send(e.target,
                         ctx.value() + (unit_weights_ ? 1.0 : e.weight));
            }
        }
        ctx.vote_to_halt();
    }

    CombinerFn combiner() const override {
        return [](double a, double b) { return std::min(a, b); };
    }

private:
    VertexId source_;
    bool unit_weights_;
};

class Components final : public VertexProgram {
public:
    std::string name() const override { return "wcc"; }

    double initial_value(VertexId v, std::uint64_t) const override {
        return static_cast<double>(v);
    }

    void compute(ComputeContext& ctx,
                 std::span<const double> messages) const override {
        if (ctx.superstep() == 0) {
            ctx.send_to_all_neighbors(ctx.value());
            ctx.vote_to_halt();
            return;
        }
        double best = ctx.value();
        for (double m : messages) {
            best = std::min(best, m);
        }
        if (best < ctx.value()) {
            ctx.set_value(best);
            ctx.send_to_all_neighbors(best);
        }
        ctx.vote_to_halt();
    }

    CombinerFn combiner() const override {
        return [](double a, double b) { return std::min(a, b); };
    }
};

class LabelProp final : public VertexProgram {
public:
    explicit LabelProp(std::uint64_t max_rounds) : max_rounds_(max_rounds) {}

    std::string name() const override { return "labelprop"; }

    double initial_value(VertexId v, std::uint64_t) const override {
        return static_cast<double>(v);
    }

    void compute(ComputeContext& ctx,
                 std::span<const double> messages) const override {
        const std::uint64_t s = ctx.superstep();
        bool changed = false;
        if (s >= 1 && !messages.empty()) {
            // Most frequent incoming label; the ordered map makes the first
            // run of the maximum count the lowest label.
            std::map<double, std::uint64_t> counts;
            for (double m : messages) {
                ++counts[m];
            }
            double best = ctx.value();
            std::uint64_t best_count = 0;
            for (const auto& [label, count] : counts) {
                if (count > best_count) {
                    best = label;
                    best_count = count;
                }
            }
            if (best != ctx.value()) {
                ctx.set_value(best);
                changed = true;
            }
        }
        if (s >= max_rounds_) {
            ctx.vote_to_halt();
            return;
        }
        // Keep broadcasting even when settled: neighbors need every label
        // to count majorities, and their messages reactivate this vertex.
        ctx.send_to_all_neighbors(ctx.value());
        if (s >= 1 && !changed) {
            ctx.vote_to_halt();
        }
    }

private:
    std::uint64_t max_rounds_;
};

} // namespace

std::unique_ptr<VertexProgram> pagerank_program(PageRankConfig cfg) {
    return std::make_unique<PageRank>(cfg);
}

std::unique_ptr<VertexProgram> max_value_program(std::vector<double> init_values) {
    return std::make_unique<MaxValue>(std::move(init_values));
}

std::unique_ptr<VertexProgram> sssp_program(VertexId source) {
    return std::make_unique<Relaxation>(source, false);
}

std::unique_ptr<VertexProgram> bfs_program(VertexId source) {
    return std::make_unique<Relaxation>(source, true);
}

std::unique_ptr<VertexProgram> wcc_program() {
    return std::make_unique<Components>();
}

std::unique_ptr<VertexProgram> label_propagation_program(std::uint64_t max_rounds) {
    return std::make_unique<LabelProp>(max_rounds);
}

double pagerank_initial_value_insensitivity_check(const Graph& g, double init_a,
                                                  double init_b,
                                                  const EngineConfig& cfg) {
    PageRankConfig pr_a;
    pr_a.init_value = init_a;
    PageRankConfig pr_b;
    pr_b.init_value = init_b;
    const RunResult ra = run_program(*pagerank_program(pr_a), g, cfg);
    const RunResult rb = run_program(*pagerank_program(pr_b), g, cfg);
    double linf = 0.0;
    for (std::uint64_t v = 0; v < g.n_total(); ++v) {
        if (g.is_live(static_cast<VertexId>(v))) {
            linf = std::max(linf, std::fabs(ra.values[v] - rb.values[v]));
        }
    }
    return linf;
}

} // namespace minipregel
