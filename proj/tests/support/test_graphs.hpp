#ifndef MINIPREGEL_TEST_GRAPHS_HPP
#define MINIPREGEL_TEST_GRAPHS_HPP

// Seeded graph builders shared by the unit and acceptance suites.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "minipregel/graph.hpp"

namespace testsupport {

// Dense graph with decimal labels "0".."n-1".
inline minipregel::Graph make_graph(std::uint64_t n,
                                    std::vector<minipregel::Edge> edges) {
    minipregel::LabelTable labels;
    for (std::uint64_t v = 0; v < n; ++v) {
        labels.names.push_back(std::to_string(v));
        labels.index.emplace(labels.names.back(),
                             static_cast<minipregel::VertexId>(v));
    }
    return minipregel::Graph::from_parts(n, std::move(edges),
                                         std::move(labels), {});
}

inline minipregel::Graph cycle_graph(std::uint64_t n) {
    std::vector<minipregel::Edge> edges;
    for (std::uint64_t v = 0; v < n; ++v) {
        edges.push_back({static_cast<minipregel::VertexId>(v),
                         static_cast<minipregel::VertexId>((v + 1) % n), 1.0});
    }
    return make_graph(n, std::move(edges));
}

// Every vertex gets an out-degree drawn from [min_deg, max_deg], so with
// min_deg >= 1 no vertex is a sink.
inline minipregel::Graph random_sinkless(std::mt19937_64& rng, std::uint64_t n,
                                         int min_deg = 1, int max_deg = 15) {
    std::uniform_int_distribution<int> deg_dist(min_deg, max_deg);
    std::uniform_int_distribution<std::uint64_t> target(0, n - 1);
    std::vector<minipregel::Edge> edges;
    for (std::uint64_t v = 0; v < n; ++v) {
        const int deg = deg_dist(rng);
        for (int i = 0; i < deg; ++i) {
            edges.push_back({static_cast<minipregel::VertexId>(v),
                             static_cast<minipregel::VertexId>(target(rng)),
                             1.0});
        }
    }
    return make_graph(n, std::move(edges));
}

// Arbitrary directed graph; sinks and unreachable vertices are likely.
// Weights are small non-negative integers when weighted.
inline minipregel::Graph random_directed(std::mt19937_64& rng, std::uint64_t n,
                                         std::uint64_t num_edges,
                                         bool weighted) {
    std::uniform_int_distribution<std::uint64_t> pick(0, n - 1);
    std::uniform_int_distribution<int> weight(0, 10);
    std::vector<minipregel::Edge> edges;
    for (std::uint64_t i = 0; i < num_edges; ++i) {
        edges.push_back({static_cast<minipregel::VertexId>(pick(rng)),
                         static_cast<minipregel::VertexId>(pick(rng)),
                         weighted ? static_cast<double>(weight(rng)) : 1.0});
    }
    return make_graph(n, std::move(edges));
}

// Connected undirected graph: a random spanning tree plus extra edges,
// every input edge expanded to both directions.
inline minipregel::Graph random_connected_undirected(std::mt19937_64& rng,
                                                     std::uint64_t n,
                                                     std::uint64_t extra) {
    std::vector<minipregel::Edge> edges;
    auto add_undirected = [&](std::uint64_t a, std::uint64_t b) {
        edges.push_back({static_cast<minipregel::VertexId>(a),
                         static_cast<minipregel::VertexId>(b), 1.0});
        edges.push_back({static_cast<minipregel::VertexId>(b),
                         static_cast<minipregel::VertexId>(a), 1.0});
    };
    for (std::uint64_t v = 1; v < n; ++v) {
        std::uniform_int_distribution<std::uint64_t> parent(0, v - 1);
        add_undirected(parent(rng), v);
    }
    std::uniform_int_distribution<std::uint64_t> pick(0, n - 1);
    for (std::uint64_t i = 0; i < extra; ++i) {
        add_undirected(pick(rng), pick(rng));
    }
    return make_graph(n, std::move(edges));
}

// Undirected graph that may be disconnected.
inline minipregel::Graph random_undirected(std::mt19937_64& rng,
                                           std::uint64_t n,
                                           std::uint64_t pairs) {
    std::uniform_int_distribution<std::uint64_t> pick(0, n - 1);
    std::vector<minipregel::Edge> edges;
    for (std::uint64_t i = 0; i < pairs; ++i) {
        const auto a = static_cast<minipregel::VertexId>(pick(rng));
        const auto b = static_cast<minipregel::VertexId>(pick(rng));
        edges.push_back({a, b, 1.0});
        edges.push_back({b, a, 1.0});
    }
    return make_graph(n, std::move(edges));
}

inline std::vector<double> random_values(std::mt19937_64& rng, std::uint64_t n,
                                         double lo = -100.0, double hi = 100.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> values(n);
    for (auto& v : values) {
        v = dist(rng);
    }
    return values;
}

} // namespace testsupport

#endif // MINIPREGEL_TEST_GRAPHS_HPP
