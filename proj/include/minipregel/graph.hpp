#ifndef MINIPREGEL_GRAPH_HPP
#define MINIPREGEL_GRAPH_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "minipregel/error.hpp"

namespace minipregel {

/// Dense vertex index. External labels are remapped to [0, N) at load time;
/// the mapping is kept by the Graph.
using VertexId = std::uint32_t;

/// One outgoing edge as stored in the adjacency array (source implied).
struct OutEdge {
    VertexId target;
    double weight;

    friend bool operator==(const OutEdge&, const OutEdge&) = default;
};

/// A directed edge in list form, used by builders, mutation batches and
/// checkpoints.
struct Edge {
    VertexId src;
    VertexId dst;
    double weight = 1.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// An input edge before label remapping.
struct LabeledEdge {
    std::string src;
    std::string dst;
    double weight = 1.0;
};

/// External label <-> dense id mapping built at load time. Vertices created
/// later by mutations are not listed here; their labels are synthesized.
struct LabelTable {
    std::vector<std::string> names;                      // id -> label
    std::unordered_map<std::string, VertexId> index;     // label -> id
};

/// Immutable directed multigraph in compressed adjacency form.
///
/// Vertices removed by a mutation batch stay in the id space as dead slots;
/// `is_live` distinguishes them. Per-vertex adjacency keeps input order and
/// is stable across calls. Parallel edges and self-loops are preserved.
class Graph {
public:
    Graph() = default;

    /// Assembles a graph from dense parts. Edges must connect live vertices.
    static Graph from_parts(std::uint64_t n_total, std::vector<Edge> edges,
                            LabelTable labels, std::vector<std::uint8_t> live);

    std::uint64_t n_total() const { return n_total_; }
    std::uint64_t live_count() const { return live_count_; }
    std::uint64_t num_edges() const { return adjacency_.size(); }
    std::uint64_t dangling_count() const { return dangling_count_; }

    bool is_live(VertexId v) const {
        return v < n_total_ && live_[v] != 0;
    }

    /// Stable adjacency slice for v; empty for dangling or dead vertices.
    /// Throws GraphError if v is outside the id space.
    std::span<const OutEdge> out_edges(VertexId v) const;

    std::uint64_t out_degree(VertexId v) const { return out_edges(v).size(); }

    /// Label for any id in [0, n_total). Ids beyond the load-time label
    /// table (vertices added by mutations) get a synthesized decimal label
    /// that cannot collide with a loaded one.
    std::string label_of(VertexId v) const;

    std::optional<VertexId> find_vertex(const std::string& label) const;

    const LabelTable& label_table() const { return labels_; }
    const std::vector<std::uint8_t>& live_mask() const { return live_; }

    /// Materializes the edge list ordered by (src, adjacency position).
    std::vector<Edge> edge_list() const;

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.n_total_ == b.n_total_ && a.live_ == b.live_ &&
               a.offsets_ == b.offsets_ && a.adjacency_ == b.adjacency_ &&
               a.labels_.names == b.labels_.names;
    }

private:
    std::uint64_t n_total_ = 0;
    std::uint64_t live_count_ = 0;
    std::uint64_t dangling_count_ = 0;
    std::vector<std::uint64_t> offsets_;     // n_total + 1
    std::vector<OutEdge> adjacency_;
    std::vector<std::uint8_t> live_;
    LabelTable labels_;
};

/// Builds a dense-id graph from labeled input edges. Labels are interned in
/// first-appearance order: extra_vertices first, then each edge's src and
/// dst. With directed=false every input edge yields two directed edges.
/// Rejects negative or non-finite weights with the offending edge index.
Graph build_graph(std::span<const LabeledEdge> edges, bool directed,
                  std::span<const std::string> extra_vertices = {});

/// Pure structural report over a graph.
struct ValidationReport {
    std::uint64_t n = 0;                // live vertices
    std::uint64_t edge_count = 0;
    std::uint64_t dangling_count = 0;   // live vertices with out-degree 0
    std::uint64_t self_loop_count = 0;
    std::uint64_t max_out_degree = 0;
};

ValidationReport validate(const Graph& g);

/// Modular vertex placement: worker(v) = v mod W. Pure function of (id, W),
/// so placement is identical across runs and after recovery.
struct PartitionMap {
    std::uint32_t num_workers = 1;

    std::uint32_t worker_of(VertexId v) const { return v % num_workers; }
};

/// Throws ConfigError when workers == 0.
PartitionMap assign_partitions(const Graph& g, std::uint32_t workers);

} // namespace minipregel

#endif
