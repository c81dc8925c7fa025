#ifndef MINIPREGEL_IO_HPP
#define MINIPREGEL_IO_HPP

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "minipregel/engine.hpp"
#include "minipregel/graph.hpp"

namespace minipregel {

// Parsed form of an edge-list document:
//   # comment
//   src dst [weight]
//   v <label> <value>
// Tokens are whitespace-separated; weight defaults to 1. A three-token line
// whose first token is exactly "v" is a vertex-value line, so a vertex
// literally labeled "v" cannot carry weighted out-edges.
struct ParsedGraph {
    std::vector<LabeledEdge> edges;                          // file order
    std::vector<std::pair<std::string, double>> vertex_values; // file order
};

// Throws ParseError with 1-based line number and offending content on any
// malformed, negative-weight, or non-finite-number line.
ParsedGraph parse_edge_list(std::string_view text);

// Builds the dense graph. Labels from value lines are interned first, so a
// vertex that only appears in a "v" line still exists.
Graph graph_from_parsed(const ParsedGraph& doc, bool directed);

// Dense per-id initial values from the document's "v" lines; ids without a
// value line get default_value. A later line for the same label wins.
std::vector<double> dense_initial_values(const ParsedGraph& doc, const Graph& g,
                                         double default_value);

// One "label<TAB>value" line per live vertex, sorted by original label
// (numerically when every label is a plain integer, lexicographically
// otherwise). Floats carry 17 significant digits; infinity prints as "inf".
// Throws Error when the sink fails.
void write_vertex_values(std::span<const double> values, const Graph& g,
                         std::ostream& out);

// Live vertex ids in output order (see write_vertex_values).
std::vector<VertexId> output_order(const Graph& g);

// Writes a document that parses back to doc (same edges, same values).
void write_edge_list(const ParsedGraph& doc, std::ostream& out);

// One JSON object per superstep record:
//   {"superstep":S,"active":A,"messages_sent":M,"wall_ms":W}
// then a summary object {"supersteps_executed":E,"recoveries":R}.
void write_metrics(const RunResult& result, std::ostream& out);

std::string format_value(double v);

} // namespace minipregel

#endif // MINIPREGEL_IO_HPP
