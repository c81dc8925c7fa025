#include "minipregel/oracles.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <queue>
#include <utility>

namespace minipregel {
namespace oracles {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_source(const Graph& g, VertexId source) {
    if (!g.is_live(source)) {
        throw GraphError("source vertex " + std::to_string(source) +
                         " is not a live vertex");
    }
}

} // namespace

std::vector<double> pagerank_power_iteration(const Graph& g, double teleport,
                                             std::uint64_t iters, double init) {
    const std::uint64_t n = g.n_total();
    const double live_n = static_cast<double>(g.live_count());
    const double damping = 1.0 - teleport;

    // In-edge sources per target, ascending source id (edge_list order), so
    // the per-target sum is folded exactly like a deterministic engine run.
    std::vector<std::vector<VertexId>> in_sources(n);
    for (const Edge& e : g.edge_list()) {
        in_sources[e.dst].push_back(e.src);
    }

    std::vector<double> v(n, 0.0);
    for (std::uint64_t u = 0; u < n; ++u) {
        if (g.is_live(static_cast<VertexId>(u))) {
            v[u] = init;
        }
    }

    std::vector<double> share(n, 0.0);
    std::vector<double> next(n, 0.0);
    for (std::uint64_t iter = 0; iter < iters; ++iter) {
        for (std::uint64_t u = 0; u < n; ++u) {
            const auto id = static_cast<VertexId>(u);
            const std::uint64_t deg = g.is_live(id) ? g.out_degree(id) : 0;
            share[u] = deg > 0 ? v[u] / static_cast<double>(deg) : 0.0;
        }
        for (std::uint64_t t = 0; t < n; ++t) {
            if (!g.is_live(static_cast<VertexId>(t))) {
                next[t] = 0.0;
                continue;
            }
            double sum = 0.0;
            for (VertexId src : in_sources[t]) {
                sum += share[src];
            }
            next[t] = teleport / live_n + damping * sum;
        }
        v = next;
    }
    return v;
}

std::vector<double> dijkstra(const Graph& g, VertexId source) {
    check_source(g, source);
    const std::uint64_t n = g.n_total();
    for (const Edge& e : g.edge_list()) {
        if (e.weight < 0.0) {
            throw GraphError("negative edge weight in dijkstra input");
        }
    }

    std::vector<double> dist(n, kInf);
    dist[source] = 0.0;
    using Entry = std::pair<double, VertexId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) {
            continue;
        }
        for (const OutEdge& e : g.out_edges(u)) {
            const double cand = dist[u] + e.weight;
            if (cand < dist[e.target]) {
                dist[e.target] = cand;
                heap.emplace(cand, e.target);
            }
        }
    }
    return dist;
}

std::vector<double> bfs_levels(const Graph& g, VertexId source) {
    check_source(g, source);
    std::vector<double> level(g.n_total(), kInf);
    level[source] = 0.0;
    std::deque<VertexId> queue{source};
    while (!queue.empty()) {
        const VertexId u = queue.front();
        queue.pop_front();
        for (const OutEdge& e : g.out_edges(u)) {
            if (level[e.target] == kInf) {
                level[e.target] = level[u] + 1.0;
                queue.push_back(e.target);
            }
        }
    }
    return level;
}

std::vector<double> components_union_find(const Graph& g) {
    const std::uint64_t n = g.n_total();
    std::vector<VertexId> parent(n);
    for (std::uint64_t v = 0; v < n; ++v) {
        parent[v] = static_cast<VertexId>(v);
    }
    auto find = [&](VertexId v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    for (const Edge& e : g.edge_list()) {
        const VertexId a = find(e.src);
        const VertexId b = find(e.dst);
        if (a != b) {
            parent[std::max(a, b)] = std::min(a, b);
        }
    }
    // Union by min root, so every root is already its component's minimum.
    std::vector<double> label(n);
    for (std::uint64_t v = 0; v < n; ++v) {
        const auto id = static_cast<VertexId>(v);
        label[v] = static_cast<double>(g.is_live(id) ? find(id) : id);
    }
    return label;
}

double global_max(std::span<const double> values) {
    if (values.empty()) {
        throw Error("global_max on empty input");
    }
    return *std::max_element(values.begin(), values.end());
}

} // namespace oracles
} // namespace minipregel
