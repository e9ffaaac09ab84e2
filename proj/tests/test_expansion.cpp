#include "doctest.h"

#include <cmath>

#include "permlab/corpus.hpp"
#include "permlab/exact.hpp"
#include "permlab/expansion.hpp"
#include "support/oracles.hpp"

using namespace permlab;

TEST_CASE("expansion coefficient of named graphs") {
    CHECK(expansion_coefficient(gen::complete(3)) == 2.0);  // only |A| = 1 eligible
    CHECK(expansion_coefficient(gen::identity(4)) == 0.0);
    CHECK(expansion_coefficient(gen::cycle(4)) == 0.5);  // 8-cycle: pair of adjacent lefts
    CHECK(expansion_coefficient(gen::identity(1)) ==
          std::numeric_limits<double>::infinity());  // no eligible subset
    CHECK_THROWS_AS(expansion_coefficient(gen::identity(15)), CapacityError);
}

TEST_CASE("expansion coefficient matches independent enumeration") {
    SplitMix64 rng(121);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(7));
        const auto g = gen::random_bipartite(n, 0.4, rng);
        CHECK(expansion_coefficient(g) == testsupport::expansion_by_enumeration(g));
    }
}

TEST_CASE("test_expansion verdicts on named graphs") {
    const auto k33 = gen::complete(3);
    CHECK(test_expansion(k33, 1.0).kind == ExpansionVerdict::Kind::Certified);

    const auto id4 = gen::identity(4);
    const auto verdict = test_expansion(id4, 0.5);
    REQUIRE(verdict.kind == ExpansionVerdict::Kind::Violator);
    CHECK(verdict.witness == std::vector<int>{0});
    CHECK(verdict.neighborhood_size == 1);
    CHECK(verdict.neighborhood_size <= (1.0 + 2 * 0.5) * verdict.witness.size());

    CHECK_THROWS_AS(test_expansion(k33, 0.0), PreconditionError);
}

TEST_CASE("test_expansion agrees with the coefficient and violators re-check") {
    SplitMix64 rng(232);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(9));
        const auto g = rng.chance(0.3) ? gen::random_regular(n, 3, rng)
                                       : gen::random_bipartite(n, 0.4, rng);
        const double coeff = expansion_coefficient(g);
        for (double alpha : {0.1, 0.5, 1.0}) {
            const auto verdict = test_expansion(g, alpha);
            CHECK((verdict.kind == ExpansionVerdict::Kind::Certified) == (coeff >= alpha));
            if (verdict.kind == ExpansionVerdict::Kind::Violator) {
                CHECK(static_cast<int>(verdict.witness.size()) <= n / 2);
                const auto nbr = neighbors(g, verdict.side, verdict.witness);
                CHECK(static_cast<int>(nbr.size()) == verdict.neighborhood_size);
                CHECK(static_cast<double>(nbr.size()) <=
                      (1.0 + 2.0 * alpha) * static_cast<double>(verdict.witness.size()));
            }
        }
    }
}

TEST_CASE("test_expansion at the measured coefficient boundary") {
    SplitMix64 rng(343);
    for (int trial = 0; trial < 15; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(7));
        const auto g = gen::random_bipartite(n, 0.5, rng);
        const double coeff = expansion_coefficient(g);
        if (coeff <= 0.0 || std::isinf(coeff)) continue;
        CHECK(test_expansion(g, coeff).certified());  // threshold met with equality
        CHECK(test_expansion(g, coeff + 0.01).kind == ExpansionVerdict::Kind::Violator);
    }
}

TEST_CASE("heuristic regime above the enumeration cap") {
    ExpansionOptions opt;
    opt.enum_cap = 6;  // force the heuristic path at moderate n
    const auto blocks = gen::two_block(10);
    const auto verdict = test_expansion(blocks, 0.4, opt);
    REQUIRE(verdict.kind == ExpansionVerdict::Kind::Violator);
    const auto nbr = neighbors(blocks, verdict.side, verdict.witness);
    CHECK(static_cast<double>(nbr.size()) < (1.0 + 0.4) * verdict.witness.size());

    const auto good = gen::complete(10);
    CHECK(test_expansion(good, 0.4, opt).kind == ExpansionVerdict::Kind::CertifiedHeuristic);
}

TEST_CASE("alternating path on tiny cases") {
    const auto id2 = gen::identity(2);
    const Matching m({{0, 0}});
    const std::vector<int> start = {1};
    const auto path = find_alternating_path(id2, m, start);
    REQUIRE(path.has_value());
    REQUIRE(path->vertices.size() == 2);
    CHECK(path->vertices[0] == VertexId{Side::Left, 1});
    CHECK(path->vertices[1] == VertexId{Side::Right, 1});

    // left0-right0-left1 path plus pendant right1 on left1: augmenting route
    // must go around the matched pair
    const auto zig = BipartiteGraph::from_edges(2, {{0, 0}, {1, 0}, {1, 1}});
    const Matching m2({{1, 0}});
    const auto path2 = find_alternating_path(zig, m2, std::vector<int>{0});
    REQUIRE(path2.has_value());
    REQUIRE(path2->vertices.size() == 4);
    CHECK(path2->vertices[0] == VertexId{Side::Left, 0});
    CHECK(path2->vertices[1] == VertexId{Side::Right, 0});
    CHECK(path2->vertices[2] == VertexId{Side::Left, 1});
    CHECK(path2->vertices[3] == VertexId{Side::Right, 1});

    const auto m3 = augment_along(zig, m2, *path2);
    CHECK(m3.size() == 2);

    CHECK_THROWS_AS(find_alternating_path(id2, m, std::vector<int>{0}), PreconditionError);
    CHECK_THROWS_AS(find_alternating_path(id2, Matching({{0, 1}}), start), PreconditionError);
}

TEST_CASE("augmenting along found paths always yields a valid larger matching") {
    SplitMix64 rng(454);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(7));
        const auto g = gen::random_bipartite(n, 0.5, rng);
        // grow a matching from empty using the module itself
        Matching m;
        while (true) {
            const auto view = resolve_matching(g, m);
            std::vector<int> unmatched;
            for (int l = 0; l < n; ++l)
                if (view.left_match[l] == -1) unmatched.push_back(l);
            if (unmatched.empty()) break;
            const auto path = find_alternating_path(g, m, unmatched);
            if (!path.has_value()) break;
            const int before = m.size();
            m = augment_along(g, m, *path);
            CHECK(m.size() == before + 1);
            CHECK_NOTHROW(resolve_matching(g, m));
        }
        // NotFound from the full unmatched set iff the matching is maximum
        CHECK(m.size() == max_matching_size(g));
    }
}

TEST_CASE("found paths are shortest, against exhaustive search") {
    SplitMix64 rng(565);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(7));
        const auto g = gen::random_bipartite(n, 0.5, rng);
        // random partial matching: take a maximum matching and drop some edges
        auto edges = maximum_matching(g).edges;
        std::vector<std::pair<int, int>> kept;
        for (auto e : edges)
            if (rng.chance(0.6)) kept.push_back(e);
        const Matching m(std::move(kept));
        const auto view = resolve_matching(g, m);
        std::vector<int> unmatched;
        for (int l = 0; l < n; ++l)
            if (view.left_match[l] == -1) unmatched.push_back(l);
        if (unmatched.empty()) continue;

        const auto path = find_alternating_path(g, m, unmatched);
        const auto brute = testsupport::shortest_alternating_path_by_dfs(g, m, unmatched);
        CHECK(path.has_value() == brute.has_value());
        if (path.has_value()) {
            CHECK(path->length() == *brute);
            CHECK(augment_along(g, m, *path).size() == m.size() + 1);
        }
    }
}

TEST_CASE("alternating length bound") {
    CHECK(alternating_length_bound(8, 0, 1.0, 1.0) == 2.0);  // additive floor
    CHECK(alternating_length_bound(8, 7, 1.0, 1.0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(alternating_length_bound(8, 7, 1.0, 2.0) == doctest::Approx(6.0).epsilon(1e-12));
    CHECK_THROWS_AS(alternating_length_bound(8, 8, 1.0, 1.0), PreconditionError);
    CHECK_THROWS_AS(alternating_length_bound(8, 3, 0.0, 1.0), PreconditionError);
}

TEST_CASE("measured path lengths fit the bound with the default constant") {
    // calibration sweep: the smallest c covering every measured shortest path
    // on this seeded corpus of 3-regular expanders must stay within the
    // default calibration constant 2
    SplitMix64 rng(676);
    double needed_c = 0.0;
    for (int trial = 0; trial < 15; ++trial) {
        const int n = 4 + static_cast<int>(rng.below(7));
        const auto g = gen::random_regular(n, 3, rng);
        const double alpha = expansion_coefficient(g);
        if (alpha <= 0.0) continue;
        Matching m;
        while (m.size() < n) {
            const auto view = resolve_matching(g, m);
            std::vector<int> unmatched;
            for (int l = 0; l < n; ++l)
                if (view.left_match[l] == -1) unmatched.push_back(l);
            if (unmatched.empty()) break;
            const auto path = find_alternating_path(g, m, unmatched);
            if (!path.has_value()) break;
            const int k = m.size();
            if (path->length() > 2 && k >= 1) {
                const double denom = std::log(static_cast<double>(n) / (n - k));
                needed_c = std::max(needed_c, path->length() * std::log1p(alpha) / denom);
            }
            m = augment_along(g, m, *path);
        }
    }
    CHECK(needed_c > 0.0);  // the corpus exercises nontrivial paths
    CHECK(needed_c <= 2.0);
}
