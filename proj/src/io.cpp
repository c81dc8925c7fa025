#include "minipregel/io.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <unordered_map>

namespace minipregel {

namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() &&
               std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        std::size_t start = i;
        while (i < line.size() &&
               !std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        if (i > start) {
            tokens.push_back(line.substr(start, i - start));
        }
    }
    return tokens;
}

[[noreturn]] void fail_line(std::size_t line_no, std::string_view line,
                            const std::string& what) {
    throw ParseError("line " + std::to_string(line_no) + ": " + what + ": \"" +
                         std::string(line) + "\"",
                     line_no);
}

double parse_number(std::string_view token, std::size_t line_no,
                    std::string_view line) {
    const std::string buf(token);
    errno = 0;
    char* end = nullptr;
    const double value = std::strtod(buf.c_str(), &end);
    if (end != buf.c_str() + buf.size() || buf.empty() || errno == ERANGE) {
        fail_line(line_no, line, "not a number: \"" + buf + "\"");
    }
    if (std::isnan(value)) {
        fail_line(line_no, line, "nan is not a valid value");
    }
    return value;
}

bool is_plain_integer(const std::string& s) {
    std::size_t i = (!s.empty() && s[0] == '-') ? 1 : 0;
    if (i == s.size()) {
        return false;
    }
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
            return false;
        }
    }
    // Reject values a signed 64-bit sort key cannot hold.
    errno = 0;
    char* end = nullptr;
    (void)std::strtoll(s.c_str(), &end, 10);
    return errno != ERANGE;
}

} // namespace

ParsedGraph parse_edge_list(std::string_view text) {
    ParsedGraph doc;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            nl = text.size();
        }
        const std::string_view line = text.substr(pos, nl - pos);
        const bool last = nl == text.size();
        pos = nl + 1;
        ++line_no;

        const auto tokens = split_tokens(line);
        if (tokens.empty() || tokens[0][0] == '#') {
            if (last) {
                break;
            }
            continue;
        }
        if (tokens.size() == 3 && tokens[0] == "v") {
            const double value = parse_number(tokens[2], line_no, line);
            doc.vertex_values.emplace_back(std::string(tokens[1]), value);
        } else if (tokens.size() == 2 || tokens.size() == 3) {
            LabeledEdge e;
            e.src = std::string(tokens[0]);
            e.dst = std::string(tokens[1]);
            if (tokens.size() == 3) {
                e.weight = parse_number(tokens[2], line_no, line);
                if (e.weight < 0.0) {
                    fail_line(line_no, line, "negative edge weight");
                }
                if (std::isinf(e.weight)) {
                    fail_line(line_no, line, "edge weight must be finite");
                }
            }
            doc.edges.push_back(std::move(e));
        } else {
            fail_line(line_no, line, "expected \"src dst [weight]\" or \"v <id> <value>\"");
        }
        if (last) {
            break;
        }
    }
    return doc;
}

Graph graph_from_parsed(const ParsedGraph& doc, bool directed) {
    std::vector<std::string> extra;
    extra.reserve(doc.vertex_values.size());
    for (const auto& [label, value] : doc.vertex_values) {
        extra.push_back(label);
    }
    return build_graph(doc.edges, directed, extra);
}

std::vector<double> dense_initial_values(const ParsedGraph& doc, const Graph& g,
                                         double default_value) {
    std::vector<double> init(g.n_total(), default_value);
    for (const auto& [label, value] : doc.vertex_values) {
        const auto id = g.find_vertex(label);
        if (!id) {
            throw GraphError("value line for unknown vertex \"" + label + "\"");
        }
        init[*id] = value;  // a later line for the same label wins
    }
    return init;
}

std::string format_value(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<VertexId> output_order(const Graph& g) {
    struct Row {
        VertexId id;
        std::string label;
        long long numeric = 0;
    };
    std::vector<Row> rows;
    bool all_numeric = true;
    for (std::uint64_t v = 0; v < g.n_total(); ++v) {
        const auto id = static_cast<VertexId>(v);
        if (!g.is_live(id)) {
            continue;
        }
        Row row{id, g.label_of(id), 0};
        if (all_numeric && is_plain_integer(row.label)) {
            row.numeric = std::strtoll(row.label.c_str(), nullptr, 10);
        } else {
            all_numeric = false;
        }
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end(), [&](const Row& a, const Row& b) {
        if (all_numeric && a.numeric != b.numeric) {
            return a.numeric < b.numeric;
        }
        return a.label < b.label;
    });
    std::vector<VertexId> order;
    order.reserve(rows.size());
    for (const Row& row : rows) {
        order.push_back(row.id);
    }
    return order;
}

void write_vertex_values(std::span<const double> values, const Graph& g,
                         std::ostream& out) {
    for (VertexId id : output_order(g)) {
        out << g.label_of(id) << '\t' << format_value(values[id]) << '\n';
    }
    if (!out) {
        throw Error("vertex value output write failed");
    }
}

void write_edge_list(const ParsedGraph& doc, std::ostream& out) {
    for (const LabeledEdge& e : doc.edges) {
        out << e.src << ' ' << e.dst;
        // Weight 1 stays implicit so two-token lines survive a round trip.
        if (e.weight != 1.0) {
            out << ' ' << format_value(e.weight);
        }
        out << '\n';
    }
    for (const auto& [label, value] : doc.vertex_values) {
        out << "v " << label << ' ' << format_value(value) << '\n';
    }
    if (!out) {
        throw Error("edge list output write failed");
    }
}

void write_metrics(const RunResult& result, std::ostream& out) {
    char wall[32];
    for (const SuperstepMetrics& row : result.metrics) {
        std::snprintf(wall, sizeof(wall), "%.3f", row.wall_ms);
        out << "{\"superstep\":" << row.superstep << ",\"active\":"
            << row.active_after << ",\"messages_sent\":" << row.messages_sent
            << ",\"wall_ms\":" << wall << "}\n";
    }
    out << "{\"supersteps_executed\":" << result.supersteps_executed
        << ",\"recoveries\":" << result.recoveries << "}\n";
    if (!out) {
        throw Error("metrics output write failed");
    }
}

} // namespace minipregel
