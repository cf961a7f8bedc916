#include <gtest/gtest.h>

#include <sstream>

#include "oimp/errors.hpp"
#include "oimp/graph.hpp"

using namespace oimp;

namespace {

Graph parse(const std::string& text, const EdgeListOptions& options = {}, EdgeListReport* report = nullptr) {
    std::istringstream in(text);
    return read_edge_list(in, options, report);
}

}  // namespace

TEST(EdgeList, EmptyInput) {
    const Graph g = parse("");
    EXPECT_EQ(g.node_count(), 0u);
    EXPECT_EQ(g.edge_count(), 0u);
}

TEST(EdgeList, CountsNodesAndInDegrees) {
    const Graph g = parse("0 1\n1 2\n");
    EXPECT_EQ(g.node_count(), 3u);
    EXPECT_EQ(g.edge_count(), 2u);
    EXPECT_EQ(g.in_degree(0), 0u);
    EXPECT_EQ(g.in_degree(1), 1u);
    EXPECT_EQ(g.in_degree(2), 1u);
    EXPECT_EQ(g.out_edges(0)[0].weight, 0.0);
}

TEST(EdgeList, ReadsWeight) {
    const Graph g = parse("0 1 0.25\n");
    ASSERT_EQ(g.out_degree(0), 1u);
    EXPECT_EQ(g.out_edges(0)[0].target, 1u);
    EXPECT_EQ(g.out_edges(0)[0].weight, 0.25);
}

TEST(EdgeList, CommentsAndBlankLinesAreSkipped) {
    const Graph g = parse("# header\n\n0 1\n   \n# more\n2 0\n");
    EXPECT_EQ(g.edge_count(), 2u);
    EXPECT_EQ(g.node_count(), 3u);
}

TEST(EdgeList, ParallelEdgesKept) {
    const Graph g = parse("0 1\n0 1\n");
    EXPECT_EQ(g.edge_count(), 2u);
    EXPECT_EQ(g.in_degree(1), 2u);
}

TEST(EdgeList, MalformedLineReportsLineNumber) {
    try {
        parse("0 1\n0 x\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    EXPECT_THROW(parse("0\n"), ParseError);
    EXPECT_THROW(parse("0 1 0.5 7\n"), ParseError);
    EXPECT_THROW(parse("-1 2\n"), ParseError);
}

TEST(EdgeList, WeightOutsideUnitIntervalRejected) {
    EXPECT_THROW(parse("0 1 1.5\n"), ValidationError);
    EXPECT_THROW(parse("0 1 -0.1\n"), ValidationError);
}

TEST(EdgeList, SelfLoopsDroppedAndCounted) {
    EdgeListReport report;
    const Graph g = parse("0 0\n0 1\n1 1 0.5\n", {}, &report);
    EXPECT_EQ(g.edge_count(), 1u);
    EXPECT_EQ(report.self_loops_dropped, 2u);
    EXPECT_EQ(report.edges, 1u);
}

TEST(EdgeList, UndirectedEmitsBothDirections) {
    const Graph g = parse("0 1 0.5\n", EdgeListOptions{.undirected = true});
    EXPECT_EQ(g.edge_count(), 2u);
    EXPECT_EQ(g.out_edges(1)[0].target, 0u);
    EXPECT_EQ(g.out_edges(1)[0].weight, 0.5);
}

TEST(EdgeList, RemapIdsByFirstAppearance) {
    EdgeListReport report;
    const Graph g = parse("100 7\n7 42\n", EdgeListOptions{.remap_ids = true}, &report);
    EXPECT_EQ(g.node_count(), 3u);
    EXPECT_EQ((report.original_ids), (std::vector<std::uint64_t>{100, 7, 42}));
    EXPECT_EQ(g.out_edges(0)[0].target, 1u);
    EXPECT_EQ(g.out_edges(1)[0].target, 2u);
}

TEST(EdgeList, RoundTrip) {
    Rng rng(5);
    std::vector<std::vector<Edge>> out(30);
    for (int i = 0; i < 120; ++i) {
        const auto u = static_cast<NodeId>(rng.below(30));
        auto v = static_cast<NodeId>(rng.below(30));
        if (u == v) v = (v + 1) % 30;
        out[u].push_back({v, rng.uniform()});
    }
    out.resize(32);  // two trailing isolated nodes
    const Graph g(32, out);
    std::ostringstream first;
    write_edge_list(g, first);
    const Graph back = parse(first.str());
    EXPECT_EQ(back, g);
    std::ostringstream second;
    write_edge_list(back, second);
    EXPECT_EQ(second.str(), first.str());
}

TEST(Graph, RejectsBadEdges) {
    EXPECT_THROW(Graph(2, {{{5, 0.5}}, {}}), ValidationError);
    EXPECT_THROW(Graph(2, {{{1, 1.5}}, {}}), ValidationError);
}

TEST(WeightedCascade, InDegreeFourGivesQuarter) {
    const Graph g = assign_wc_weights(parse("0 4\n1 4\n2 4\n3 4\n4 5\n"));
    for (NodeId u = 0; u < 4; ++u) EXPECT_EQ(g.out_edges(u)[0].weight, 0.25);
    EXPECT_EQ(g.out_edges(4)[0].weight, 1.0);
}

TEST(WeightedCascade, IncomingWeightsSumToOne) {
    Rng rng(11);
    std::vector<std::vector<Edge>> out(200);
    for (int i = 0; i < 2000; ++i) out[rng.below(200)].push_back({static_cast<NodeId>(rng.below(200)), 0.0});
    const Graph g = assign_wc_weights(Graph(200, out));
    std::vector<double> incoming(200, 0.0);
    for (NodeId u = 0; u < 200; ++u)
        for (const Edge& e : g.out_edges(u)) incoming[e.target] += e.weight;
    for (NodeId v = 0; v < 200; ++v) {
        if (g.in_degree(v) == 0) continue;
        EXPECT_NEAR(incoming[v], 1.0, 1e-15 * static_cast<double>(g.in_degree(v)));
    }
    EXPECT_LE(g.max_incoming_weight(), 1.0 + 1e-9);
}

TEST(TriValency, WeightsFromTheThreeValues) {
    std::vector<std::vector<Edge>> out(2);
    for (int i = 0; i < 30000; ++i) out[0].push_back({1, 0.0});
    const Graph base(2, out);
    Rng rng(1);
    const Graph g = assign_tv_weights(base, rng);
    std::size_t tenth = 0;
    for (const Edge& e : g.out_edges(0)) {
        EXPECT_TRUE(e.weight == 0.1 || e.weight == 0.01 || e.weight == 0.001);
        if (e.weight == 0.1) ++tenth;
    }
    EXPECT_NEAR(static_cast<double>(tenth) / 30000.0, 1.0 / 3.0, 0.02);

    Rng again(1);
    EXPECT_EQ(assign_tv_weights(base, again), g);
}
