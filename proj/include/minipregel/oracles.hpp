#ifndef MINIPREGEL_ORACLES_HPP
#define MINIPREGEL_ORACLES_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "minipregel/graph.hpp"

namespace minipregel {
namespace oracles {

// Sequential reference implementations used to validate engine results.
// They depend on the graph container only, never on the engine or the
// vertex programs.

// Damped power iteration: v' = teleport/N + (1-teleport) * sum over in-
// edges of v_u / out_degree(u). Vertices without out-edges contribute
// nothing (their mass drains). Contributions to each target are summed in
// ascending source-id order so results can be compared exactly against a
// deterministic run. iters = 0 returns the init vector.
std::vector<double> pagerank_power_iteration(const Graph& g, double teleport,
                                             std::uint64_t iters, double init);

// Exact shortest distances from source; +inf for unreachable vertices.
// Throws GraphError on a negative edge weight.
std::vector<double> dijkstra(const Graph& g, VertexId source);

// Queue-based hop counts from source; +inf for unreachable vertices.
std::vector<double> bfs_levels(const Graph& g, VertexId source);

// Union-find component labels: every vertex maps to the smallest live id
// reachable from it treating edges as undirected. Dead vertices keep their
// own id.
std::vector<double> components_union_find(const Graph& g);

// Maximum of a nonempty value sequence. Throws Error on empty input.
double global_max(std::span<const double> values);

} // namespace oracles
} // namespace minipregel

#endif // MINIPREGEL_ORACLES_HPP
