#include "minipregel/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace minipregel {

namespace {

VertexId intern(LabelTable& table, const std::string& label) {
    auto it = table.index.find(label);
    if (it != table.index.end()) {
        return it->second;
    }
    auto id = static_cast<VertexId>(table.names.size());
    table.names.push_back(label);
    table.index.emplace(label, id);
    return id;
}

} // namespace

Graph Graph::from_parts(std::uint64_t n_total, std::vector<Edge> edges,
                        LabelTable labels, std::vector<std::uint8_t> live) {
    Graph g;
    g.n_total_ = n_total;
    g.labels_ = std::move(labels);
    if (live.empty()) {
        live.assign(n_total, 1);
    }
    if (live.size() != n_total) {
        throw GraphError("live mask size does not match vertex count");
    }
    g.live_ = std::move(live);
    g.live_count_ = static_cast<std::uint64_t>(
        std::count(g.live_.begin(), g.live_.end(), std::uint8_t{1}));

    // Counting sort by source keeps the given edge order within each vertex.
    std::vector<std::uint64_t> degree(n_total, 0);
    for (const Edge& e : edges) {
        if (e.src >= n_total || e.dst >= n_total) {
            throw GraphError("edge endpoint outside the vertex id space");
        }
        if (g.live_[e.src] == 0 || g.live_[e.dst] == 0) {
            throw GraphError("edge references a dead vertex");
        }
        ++degree[e.src];
    }
    g.offsets_.assign(n_total + 1, 0);
    for (std::uint64_t v = 0; v < n_total; ++v) {
        g.offsets_[v + 1] = g.offsets_[v] + degree[v];
    }
    g.adjacency_.resize(edges.size());
    std::vector<std::uint64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const Edge& e : edges) {
        g.adjacency_[cursor[e.src]++] = OutEdge{e.dst, e.weight};
    }

    g.dangling_count_ = 0;
    for (std::uint64_t v = 0; v < n_total; ++v) {
        if (g.live_[v] != 0 && degree[v] == 0) {
            ++g.dangling_count_;
        }
    }
    return g;
}

std::span<const OutEdge> Graph::out_edges(VertexId v) const {
    if (v >= n_total_) {
        throw GraphError("vertex id " + std::to_string(v) +
                         " out of range (N=" + std::to_string(n_total_) + ")");
    }
    const auto begin = offsets_[v];
    const auto end = offsets_[v + 1];
    return {adjacency_.data() + begin, adjacency_.data() + end};
}

std::string Graph::label_of(VertexId v) const {
    if (v >= n_total_) {
        throw GraphError("vertex id " + std::to_string(v) +
                         " out of range (N=" + std::to_string(n_total_) + ")");
    }
    if (v < labels_.names.size()) {
        return labels_.names[v];
    }
    // Synthesized label for a vertex created by mutation. Extend with
    // underscores until it clears the loaded label set.
    std::string label = std::to_string(v);
    while (labels_.index.count(label) != 0) {
        label.push_back('_');
    }
    return label;
}

std::optional<VertexId> Graph::find_vertex(const std::string& label) const {
    auto it = labels_.index.find(label);
    if (it == labels_.index.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::vector<Edge> Graph::edge_list() const {
    std::vector<Edge> edges;
    edges.reserve(adjacency_.size());
    for (std::uint64_t v = 0; v < n_total_; ++v) {
        for (auto off = offsets_[v]; off < offsets_[v + 1]; ++off) {
            edges.push_back(Edge{static_cast<VertexId>(v),
                                 adjacency_[off].target,
                                 adjacency_[off].weight});
        }
    }
    return edges;
}

Graph build_graph(std::span<const LabeledEdge> edges, bool directed,
                  std::span<const std::string> extra_vertices) {
    LabelTable labels;
    for (const auto& label : extra_vertices) {
        intern(labels, label);
    }

    std::vector<Edge> dense;
    dense.reserve(directed ? edges.size() : edges.size() * 2);
    std::size_t index = 0;
    for (const LabeledEdge& e : edges) {
        if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) {
            throw GraphError("edge " + std::to_string(index) + " (" + e.src +
                             " -> " + e.dst + "): negative or non-finite weight");
        }
        const VertexId src = intern(labels, e.src);
        const VertexId dst = intern(labels, e.dst);
        dense.push_back(Edge{src, dst, e.weight});
        if (!directed) {
            dense.push_back(Edge{dst, src, e.weight});
        }
        ++index;
    }

    const auto n = static_cast<std::uint64_t>(labels.names.size());
    return Graph::from_parts(n, std::move(dense), std::move(labels), {});
}

ValidationReport validate(const Graph& g) {
    ValidationReport report;
    report.n = g.live_count();
    report.edge_count = g.num_edges();
    report.dangling_count = g.dangling_count();
    for (std::uint64_t v = 0; v < g.n_total(); ++v) {
        const auto id = static_cast<VertexId>(v);
        if (!g.is_live(id)) {
            continue;
        }
        const auto adj = g.out_edges(id);
        report.max_out_degree = std::max<std::uint64_t>(report.max_out_degree,
                                                        adj.size());
        for (const OutEdge& e : adj) {
            if (e.target == id) {
                ++report.self_loop_count;
            }
        }
    }
    return report;
}

PartitionMap assign_partitions(const Graph&, std::uint32_t workers) {
    if (workers == 0) {
        throw ConfigError("worker count must be at least 1");
    }
    return PartitionMap{workers};
}

} // namespace minipregel
