#ifndef MINIPREGEL_ALGORITHMS_HPP
#define MINIPREGEL_ALGORITHMS_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "minipregel/engine.hpp"
#include "minipregel/graph.hpp"
#include "minipregel/program.hpp"

namespace minipregel {

struct PageRankConfig {
    double teleport = 0.15;
    double damping = 0.85;
    std::uint64_t max_supersteps = 30;
    // Unset means 1/N.
    std::optional<double> init_value;
};

// Classic damped PageRank as a vertex program. Initial value init_value
// (default 1/N); from superstep 1 on, value = teleport/N + damping * sum of
// incoming; while superstep < max_supersteps each vertex spreads value/degree
// along its out-edges (a vertex with no out-edges sends nothing, so its mass
// drains); then it votes to halt. Sum-combiner enabled. Throws ConfigError
// when teleport is outside (0,1) or damping != 1 - teleport.
std::unique_ptr<VertexProgram> pagerank_program(PageRankConfig cfg = {});

// Flood-max: superstep 0 broadcasts the vertex's own value; afterwards a
// vertex adopts any larger incoming value and re-broadcasts, otherwise it
// votes to halt. init_values maps dense ids to starting values; missing
// entries start at 0. Max-combiner enabled.
std::unique_ptr<VertexProgram> max_value_program(std::vector<double> init_values);

// Message relaxation: source starts at 0, everything else at +inf; any
// improvement is forwarded as dist + edge weight. Min-combiner enabled.
// Unreachable vertices keep +inf.
std::unique_ptr<VertexProgram> sssp_program(VertexId source);

// sssp with every edge counted as weight 1; values are hop counts.
std::unique_ptr<VertexProgram> bfs_program(VertexId source);

// Min-label flooding; the fixed point labels each vertex with the smallest
// id in its component. Meaningful on graphs loaded with undirected
// expansion. Min-combiner enabled.
std::unique_ptr<VertexProgram> wcc_program();

// Synchronous label propagation: every superstep each vertex sends its
// current label along its out-edges and (from superstep 1) adopts the most
// frequent incoming label, ties broken by the lowest label. A vertex whose
// label did not change votes to halt after sending, so the process only
// quiesces once no neighbor keeps broadcasting; max_rounds is the hard
// stop. No combiner: majority needs the full message multiset.
std::unique_ptr<VertexProgram> label_propagation_program(std::uint64_t max_rounds);

// Runs PageRank twice on g with the two given initial constants (same
// config otherwise) and returns the L-infinity distance between the final
// value vectors.
double pagerank_initial_value_insensitivity_check(const Graph& g,
                                                  double init_a, double init_b,
                                                  const EngineConfig& cfg = {});

} // namespace minipregel

#endif // MINIPREGEL_ALGORITHMS_HPP
