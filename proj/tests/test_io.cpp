#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "minipregel/io.hpp"
#include "support/test_graphs.hpp"

using namespace minipregel;

TEST_CASE("parse_edge_list: plain two-line document") {
    const ParsedGraph doc = parse_edge_list("0 1\n1 0\n");
    REQUIRE_EQ(doc.edges.size(), 2);
    CHECK(doc.vertex_values.empty());
    CHECK_EQ(doc.edges[0].src, "0");
    CHECK_EQ(doc.edges[0].dst, "1");
    CHECK_EQ(doc.edges[0].weight, 1.0);
    CHECK_EQ(doc.edges[1].src, "1");
    CHECK_EQ(doc.edges[1].dst, "0");
}

TEST_CASE("parse_edge_list: comments and weights") {
    const ParsedGraph doc = parse_edge_list("# comment\na b 2.5\n");
    REQUIRE_EQ(doc.edges.size(), 1);
    CHECK_EQ(doc.edges[0].src, "a");
    CHECK_EQ(doc.edges[0].dst, "b");
    CHECK_EQ(doc.edges[0].weight, 2.5);
}

TEST_CASE("parse_edge_list: malformed line reports its 1-based number") {
    CHECK_THROWS_AS(parse_edge_list("0 1\nx\n"), ParseError);
    try {
        parse_edge_list("0 1\nx\n");
    } catch (const ParseError& e) {
        CHECK_EQ(e.line(), 2);
        const std::string what = e.what();
        CHECK(what.find("line 2") != std::string::npos);
        CHECK(what.find("x") != std::string::npos);
    }
}

TEST_CASE("parse_edge_list: negative weight is rejected") {
    CHECK_THROWS_AS(parse_edge_list("a b -1\n"), ParseError);
    try {
        parse_edge_list("ok ok\na b -0.5\n");
    } catch (const ParseError& e) {
        CHECK_EQ(e.line(), 2);
    }
}

TEST_CASE("parse_edge_list: non-numeric weight and bad token counts fail") {
    CHECK_THROWS_AS(parse_edge_list("a b heavy\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("a b 1 2\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("lonetoken\n"), ParseError);
}

TEST_CASE("parse_edge_list: two-token line starting with v is an edge") {
    const ParsedGraph doc = parse_edge_list("v x\n");
    REQUIRE_EQ(doc.edges.size(), 1);
    CHECK_EQ(doc.edges[0].src, "v");
    CHECK_EQ(doc.edges[0].dst, "x");
    CHECK(doc.vertex_values.empty());
}

TEST_CASE("parse_edge_list: vertex value lines") {
    const ParsedGraph doc = parse_edge_list("v n0 3.5\nn0 n1\nv n1 -2\n");
    REQUIRE_EQ(doc.edges.size(), 1);
    REQUIRE_EQ(doc.vertex_values.size(), 2);
    CHECK_EQ(doc.vertex_values[0].first, "n0");
    CHECK_EQ(doc.vertex_values[0].second, 3.5);
    CHECK_EQ(doc.vertex_values[1].first, "n1");
    CHECK_EQ(doc.vertex_values[1].second, -2.0);
}

TEST_CASE("parse_edge_list: blank lines, stray whitespace, missing final newline") {
    const ParsedGraph doc = parse_edge_list("\n  \n 0   1 \n\n1 2");
    REQUIRE_EQ(doc.edges.size(), 2);
    CHECK_EQ(doc.edges[1].src, "1");
    CHECK_EQ(doc.edges[1].dst, "2");
}

TEST_CASE("graph_from_parsed: value-only vertices exist in the graph") {
    const ParsedGraph doc = parse_edge_list("v lonely 9\na b\n");
    const Graph g = graph_from_parsed(doc, true);
    CHECK_EQ(g.n_total(), 3);
    REQUIRE(g.find_vertex("lonely").has_value());
    CHECK_EQ(g.out_degree(*g.find_vertex("lonely")), 0);
}

TEST_CASE("dense_initial_values: defaults and later-line-wins") {
    const ParsedGraph doc =
        parse_edge_list("a b\nb c\nv a 1\nv c 3\nv a 7\n");
    const Graph g = graph_from_parsed(doc, true);
    const auto vals = dense_initial_values(doc, g, 0.5);
    REQUIRE_EQ(vals.size(), g.n_total());
    CHECK_EQ(vals[*g.find_vertex("a")], 7.0);
    CHECK_EQ(vals[*g.find_vertex("b")], 0.5);
    CHECK_EQ(vals[*g.find_vertex("c")], 3.0);
}

TEST_CASE("format_value: 17 significant digits and infinity spelling") {
    CHECK_EQ(format_value(0.5), "0.5");
    CHECK_EQ(format_value(std::numeric_limits<double>::infinity()), "inf");
    CHECK_EQ(format_value(-std::numeric_limits<double>::infinity()), "-inf");
    // 0.1 is not exactly representable; 17 digits expose the stored value.
    CHECK_EQ(format_value(0.1), "0.10000000000000001");
    const double third = 1.0 / 3.0;
    CHECK_EQ(std::stod(format_value(third)), third);
}

TEST_CASE("write_vertex_values: numeric labels sort numerically") {
    const Graph g = testsupport::make_graph(11, {{10, 2, 1.0}});
    std::vector<double> values(11);
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = static_cast<double>(i);
    }
    std::ostringstream out;
    write_vertex_values(values, g, out);
    std::istringstream lines(out.str());
    std::string line;
    std::getline(lines, line);
    CHECK_EQ(line, "0\t0");
    // Position 2 would be "10" under lexicographic order.
    std::getline(lines, line);
    CHECK_EQ(line, "1\t1");
    std::getline(lines, line);
    CHECK_EQ(line, "2\t2");
}

TEST_CASE("write_vertex_values: word labels sort lexicographically") {
    const std::vector<LabeledEdge> edges = {{"pear", "apple", 1.0},
                                            {"apple", "fig", 1.0}};
    const Graph g = build_graph(edges, true);
    const std::vector<double> values = {1.0, 2.0, 3.0};
    std::ostringstream out;
    write_vertex_values(values, g, out);
    CHECK_EQ(out.str(), "apple\t2\nfig\t3\npear\t1\n");
}

TEST_CASE("write_vertex_values: infinity prints as inf") {
    const Graph g = testsupport::make_graph(3, {{0, 1, 1.0}});
    const std::vector<double> values = {
        0.0, 1.0, std::numeric_limits<double>::infinity()};
    std::ostringstream out;
    write_vertex_values(values, g, out);
    CHECK(out.str().find("2\tinf\n") != std::string::npos);
}

TEST_CASE("write_vertex_values: failed sink raises") {
    const Graph g = testsupport::cycle_graph(2);
    std::ostringstream out;
    out.setstate(std::ios::badbit);
    CHECK_THROWS_AS(write_vertex_values(std::vector<double>{1.0, 2.0}, g, out),
                    Error);
}

TEST_CASE("round-trip: parse(write(parse(x))) preserves edges and values") {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<int> label(0, 30);
    std::uniform_real_distribution<double> weight(0.0, 10.0);
    std::ostringstream doc_text;
    doc_text << "# generated\n";
    for (int i = 0; i < 200; ++i) {
        doc_text << label(rng) << ' ' << label(rng);
        if (i % 3 == 0) doc_text << ' ' << format_value(weight(rng));
        doc_text << '\n';
    }
    doc_text << "v 3 0.25\nv 7 " << format_value(1.0 / 3.0) << "\n";

    const ParsedGraph first = parse_edge_list(doc_text.str());
    std::ostringstream rewritten;
    write_edge_list(first, rewritten);
    const ParsedGraph second = parse_edge_list(rewritten.str());

    REQUIRE_EQ(first.edges.size(), second.edges.size());
    for (std::size_t i = 0; i < first.edges.size(); ++i) {
        CHECK_EQ(first.edges[i].src, second.edges[i].src);
        CHECK_EQ(first.edges[i].dst, second.edges[i].dst);
        CHECK_EQ(first.edges[i].weight, second.edges[i].weight);
    }
    REQUIRE_EQ(first.vertex_values.size(), second.vertex_values.size());
    for (std::size_t i = 0; i < first.vertex_values.size(); ++i) {
        CHECK_EQ(first.vertex_values[i], second.vertex_values[i]);
    }
    CHECK(graph_from_parsed(first, true) == graph_from_parsed(second, true));
}

TEST_CASE("write_metrics: record shape and key order") {
    RunResult result;
    result.metrics.push_back({0, 3, 5, 0, 1.25, 0.0});
    result.metrics.push_back({1, 0, 0, 0, 0.75, 0.0});
    result.supersteps_executed = 2;
    result.recoveries = 0;
    std::ostringstream out;
    write_metrics(result, out);
    std::istringstream lines(out.str());
    std::string line;
    std::getline(lines, line);
    CHECK_EQ(line,
             R"({"superstep":0,"active":3,"messages_sent":5,"wall_ms":1.250})");
    std::getline(lines, line);
    CHECK_EQ(line,
             R"({"superstep":1,"active":0,"messages_sent":0,"wall_ms":0.750})");
    std::getline(lines, line);
    CHECK_EQ(line, R"({"supersteps_executed":2,"recoveries":0})");
}

TEST_CASE("output is byte-stable for repeated writes") {
    std::mt19937_64 rng(77);
    const Graph g = testsupport::random_directed(rng, 40, 150, true);
    const auto values = testsupport::random_values(rng, 40);
    std::ostringstream a, b;
    write_vertex_values(values, g, a);
    write_vertex_values(values, g, b);
    CHECK_EQ(a.str(), b.str());
}
