#include "doctest.h"

#include "permlab/corpus.hpp"
#include "permlab/graph.hpp"
#include "permlab/io.hpp"

using namespace permlab;

TEST_CASE("from_adjacency_matrix identity and complete") {
    const auto id3 = BipartiteGraph::from_adjacency_matrix({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    CHECK(id3.part_size() == 3);
    CHECK(id3.edge_count() == 3);
    for (int i = 0; i < 3; ++i) CHECK(id3.has_edge(i, i));

    const auto k22 = BipartiteGraph::from_adjacency_matrix({{1, 1}, {1, 1}});
    CHECK(k22.edge_count() == 4);
}

TEST_CASE("from_adjacency_matrix rejects malformed input") {
    CHECK_THROWS_AS(BipartiteGraph::from_adjacency_matrix({{1, 0}, {0, 1, 1}}), PreconditionError);
    CHECK_THROWS_AS(BipartiteGraph::from_adjacency_matrix({{1, 2}, {0, 1}}), PreconditionError);
    CHECK_THROWS_AS(BipartiteGraph::from_edges(2, {{0, 0}, {0, 0}}), PreconditionError);
    CHECK_THROWS_AS(BipartiteGraph::from_edges(2, {{0, 2}}), PreconditionError);
}

TEST_CASE("matrix round-trip is the identity") {
    SplitMix64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(6));
        const auto g = gen::random_bipartite(n, 0.4, rng);
        const auto back = BipartiteGraph::from_adjacency_matrix(g.to_adjacency_matrix());
        CHECK(back == g);
    }
}

TEST_CASE("neighbors of vertex sets") {
    const auto k33 = gen::complete(3);
    const std::vector<VertexId> s = {{Side::Left, 0}};
    CHECK(neighbors(k33, s).size() == 3);

    const auto id3 = gen::identity(3);
    const std::vector<VertexId> two = {{Side::Left, 0}, {Side::Left, 1}};
    const auto n2 = neighbors(id3, two);
    REQUIRE(n2.size() == 2);
    CHECK(n2[0] == VertexId{Side::Right, 0});
    CHECK(n2[1] == VertexId{Side::Right, 1});

    CHECK(neighbors(id3, std::span<const VertexId>{}).empty());

    const std::vector<VertexId> mixed = {{Side::Left, 0}, {Side::Right, 1}};
    CHECK_THROWS_AS(neighbors(id3, mixed), PreconditionError);
}

TEST_CASE("neighborhood size bounded by degree sum, equality iff disjoint") {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(6));
        const auto g = gen::random_bipartite(n, 0.5, rng);
        std::vector<int> s;
        for (int i = 0; i < n; ++i)
            if (rng.chance(0.5)) s.push_back(i);
        int degree_sum = 0;
        for (int v : s) degree_sum += g.degree(Side::Left, v);
        const auto nbr = neighbors(g, Side::Left, s);
        CHECK(static_cast<int>(nbr.size()) <= degree_sum);

        std::vector<int> seen(n, 0);
        bool disjoint = true;
        for (int v : s)
            for (int r : g.neighbors_of(Side::Left, v)) disjoint = disjoint && !seen[r]++;
        CHECK((static_cast<int>(nbr.size()) == degree_sum) == disjoint);
    }
}

TEST_CASE("induced subgraph") {
    const auto k33 = gen::complete(3);
    const auto sub = induced_subgraph(k33, {0, 1}, {0, 1});
    CHECK(sub == gen::complete(2));

    const auto nothing = induced_subgraph(k33, {}, {});
    CHECK(nothing.part_size() == 0);

    // identity graph restricted to left {0,1}, right {1,2}: only edge (1,1)
    // survives and is reindexed to (1,0)
    const auto id3 = gen::identity(3);
    const auto slice = induced_subgraph(id3, {0, 1}, {1, 2});
    CHECK(slice.edges() == std::vector<std::pair<int, int>>{{1, 0}});

    CHECK_THROWS_AS(induced_subgraph(k33, {0}, {0, 1}), PreconditionError);
}

TEST_CASE("induced subgraph keeps exactly the edges between retained vertices") {
    SplitMix64 rng(19);
    for (int trial = 0; trial < 15; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(6));
        const auto g = gen::random_bipartite(n, 0.5, rng);
        std::vector<int> left, right;
        for (int i = 0; i < n; ++i) {
            if (rng.chance(0.5)) left.push_back(i);
            if (rng.chance(0.5)) right.push_back(i);
        }
        const int k = static_cast<int>(std::min(left.size(), right.size()));
        left.resize(k);
        right.resize(k);
        const auto sub = induced_subgraph(g, left, right);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                CHECK(sub.has_edge(i, j) == g.has_edge(left[i], right[j]));
    }
}

TEST_CASE("induced subgraph on the full vertex sets is the original graph") {
    SplitMix64 rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(6));
        const auto g = gen::random_bipartite(n, 0.5, rng);
        std::vector<int> all(n);
        for (int i = 0; i < n; ++i) all[i] = i;
        CHECK(induced_subgraph(g, all, all) == g);
    }
}

TEST_CASE("matching validation") {
    const auto k22 = gen::complete(2);
    CHECK_NOTHROW(resolve_matching(k22, Matching({{0, 0}, {1, 1}})));
    CHECK_THROWS_AS(resolve_matching(k22, Matching({{0, 0}, {0, 1}})), PreconditionError);
    CHECK_THROWS_AS(resolve_matching(gen::identity(2), Matching({{0, 1}})), PreconditionError);
}

TEST_CASE("dense matrix parser") {
    const auto g = parse_dense_matrix("1 0 1\n010\n1 11\n");
    CHECK(g.part_size() == 3);
    CHECK(g.edge_count() == 6);
    CHECK_THROWS_AS(parse_dense_matrix("10\n011\n"), ParseError);
    CHECK_THROWS_AS(parse_dense_matrix("1x\n01\n"), ParseError);
    CHECK_THROWS_AS(parse_dense_matrix("\n\n"), ParseError);
}

TEST_CASE("edge list parser") {
    const auto g = parse_edge_list("bipartite 2 4\n0 0\n0 1\n1 0\n1 1\n");
    CHECK(g == gen::complete(2));
    CHECK_THROWS_AS(parse_edge_list("bipartite 2 3\n0 0\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("bipartite 2 1\n0 5\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("bipartite 2 2\n0 0\n0 0\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("graph 2 1\n0 0\n"), ParseError);
}

TEST_CASE("format sniffing and emitters round-trip") {
    SplitMix64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(5));
        const auto g = gen::random_bipartite(n, 0.5, rng);
        GraphFormat fmt;
        CHECK(parse_graph(emit_dense_matrix(g), &fmt) == g);
        CHECK(fmt == GraphFormat::Dense);
        CHECK(parse_graph(emit_edge_list(g), &fmt) == g);
        CHECK(fmt == GraphFormat::EdgeList);
    }
}

TEST_CASE("transpose flips sides") {
    const auto g = BipartiteGraph::from_edges(3, {{0, 1}, {2, 0}});
    const auto t = g.transposed();
    CHECK(t.has_edge(1, 0));
    CHECK(t.has_edge(0, 2));
    CHECK(t.transposed() == g);
}

TEST_CASE("degree profile") {
    const auto g = BipartiteGraph::from_edges(3, {{0, 0}, {0, 1}, {1, 0}});
    const auto p = g.degree_profile();
    CHECK(p.max_degree == 2);
    CHECK(p.left_degrees == std::vector<int>{2, 1, 0});
    CHECK(p.right_degrees == std::vector<int>{2, 1, 0});
}
