#ifndef MINIPREGEL_PROGRAM_HPP
#define MINIPREGEL_PROGRAM_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "minipregel/graph.hpp"

namespace minipregel {

// Commutative and associative fold over message payloads headed for one
// vertex. When a program supplies one, the runtime may collapse the inbox
// to a single value before compute() sees it.
using CombinerFn = std::function<double(double, double)>;

struct AggregatorSpec {
    std::string name;
    double identity = 0.0;
    std::function<double(double, double)> reduce;
};

struct MutationRequest {
    enum class Kind { AddEdge, RemoveEdge, AddVertex, RemoveVertex };

    Kind kind = Kind::AddEdge;
    VertexId src = 0;
    VertexId dst = 0;
    double weight = 1.0;
    // AddVertex only: starting value for the new vertex. Unset means the
    // program's initial_value() is consulted instead.
    std::optional<double> initial_value;
};

// Per-vertex view handed to compute(). All reads refer to the state at the
// start of the superstep; sends and mutations take effect at the barrier.
class ComputeContext {
public:
    virtual ~ComputeContext() = default;

    virtual VertexId vertex() const = 0;
    virtual std::uint64_t superstep() const = 0;
    virtual std::uint64_t num_vertices() const = 0;

    virtual double value() const = 0;
    virtual void set_value(double v) = 0;

    virtual std::span<const OutEdge> out_edges() const = 0;

    virtual void send(VertexId target, double payload) = 0;
    virtual void send_to_all_neighbors(double payload) = 0;

    virtual void vote_to_halt() = 0;

    // Aggregator value reduced over the previous superstep.
    virtual double aggregated(const std::string& name) const = 0;
    virtual void aggregate(const std::string& name, double contribution) = 0;

    // New ids are assigned at the barrier, in request order.
    virtual void add_vertex(std::optional<double> initial_value = {}) = 0;
    virtual void remove_vertex(VertexId v) = 0;
    virtual void add_edge(VertexId src, VertexId dst, double weight = 1.0) = 0;
    virtual void remove_edge(VertexId src, VertexId dst) = 0;
};

class VertexProgram {
public:
    virtual ~VertexProgram() = default;

    virtual std::string name() const = 0;
    virtual double initial_value(VertexId v, std::uint64_t num_vertices) const = 0;
    virtual void compute(ComputeContext& ctx,
                         std::span<const double> messages) const = 0;

    virtual CombinerFn combiner() const { return nullptr; }
    virtual std::vector<AggregatorSpec> aggregators() const { return {}; }
};

} // namespace minipregel

#endif // MINIPREGEL_PROGRAM_HPP
