#include "vc2reg/core/decomposition.hpp"
#include "vc2reg/core/hypergraph.hpp"
#include "vc2reg/core/parallel.hpp"
#include "vc2reg/core/random.hpp"
#include "vc2reg/core/rational.hpp"
#include "vc2reg/core/triad.hpp"
#include "vc2reg/generators.hpp"
#include "vc2reg/quasirandomness.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace vc2reg;

TEST(Rational, ParsesFractionsDecimalsAndIntegers) {
    EXPECT_EQ(parse_rational("3/4"), Rational(3, 4));
    EXPECT_EQ(parse_rational("0.125"), Rational(1, 8));
    EXPECT_EQ(parse_rational("-2"), Rational(-2));
    EXPECT_THROW(parse_rational("abc"), std::exception);
    EXPECT_THROW(parse_rational("1/0"), std::exception);
    EXPECT_EQ(parse_rational("010"), Rational(10));
    EXPECT_EQ(parse_rational("007/0010"), Rational(7, 10));
    EXPECT_EQ(parse_rational("-.5"), Rational(-1, 2));
    EXPECT_THROW(parse_rational("0x10"), std::exception);
    EXPECT_THROW(parse_rational("1.2.3"), std::exception);
}

TEST(Rational, FloorCeilAndRoots) {
    EXPECT_EQ(floor_of(Rational(7, 2)), 3);
    EXPECT_EQ(ceil_of(Rational(7, 2)), 4);
    EXPECT_EQ(floor_of(Rational(-7, 2)), -4);
    EXPECT_EQ(ceil_of(Rational(4)), 4);
    EXPECT_TRUE(le_fourth_root(Rational(1, 2), Rational(1, 16)));
    EXPECT_FALSE(le_fourth_root(Rational(51, 100), Rational(1, 16)));
    EXPECT_TRUE(le_sum_fourth_roots(Rational(1), Rational(1, 16), Rational(1, 16)));
    EXPECT_FALSE(le_sum_fourth_roots(Rational(101, 100), Rational(1, 16), Rational(1, 16)));
}

TEST(Random, StreamsAreDeterministicAndTagged) {
    Rng a = Rng::stream(5, "x", {1, 2}), b = Rng::stream(5, "x", {1, 2}), c = Rng::stream(5, "y", {1, 2});
    const auto va = a.next();
    EXPECT_EQ(va, b.next());
    EXPECT_NE(va, c.next());
    EXPECT_NE(Rng::derive(5, "x", {1, 2}), Rng::derive(5, "x", {2, 1}));
}

TEST(Random, BelowStaysInRangeAndBernoulliEndpoints) {
    Rng r(9);
    for (int i = 0; i < 1000; ++i) EXPECT_LT(r.below(7), 7u);
    Bernoulli never(0), always(1);
    for (int i = 0; i < 100; ++i) {
        EXPECT_FALSE(never(r));
        EXPECT_TRUE(always(r));
    }
}

TEST(Hypergraph, ParsesSemicolonDocument) {
    const auto h = parse_hypergraph("n=4; 0 1 2; 0 1 3");
    EXPECT_EQ(h.n(), 4u);
    EXPECT_EQ(h.edge_count(), 2u);
    EXPECT_TRUE(h.contains(2, 1, 0));
    EXPECT_TRUE(h.contains(3, 0, 1));
    EXPECT_FALSE(h.contains(1, 2, 3));
}

TEST(Hypergraph, RejectsBadInput) {
    EXPECT_THROW(parse_hypergraph("n=3; 0 0 1"), ParseError);
    EXPECT_THROW(parse_hypergraph("n=3\n0 1 3\n"), ParseError);
    EXPECT_THROW(parse_hypergraph("0 1 2\n"), ParseError);
    EXPECT_THROW(parse_hypergraph("n=5\n0 1\n"), ParseError);
    try {
        parse_hypergraph("n=5\n0 1 2\n# ok\n1 1 2\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 4u);
    }
}

TEST(Hypergraph, DeduplicatesAndSorts) {
    const auto h = parse_hypergraph("n=4\n2 1 0\n0 1 2\n3 2 1\n");
    EXPECT_EQ(h.edge_count(), 2u);
    EXPECT_EQ(h.edges()[0], (Triple{0, 1, 2}));
}

TEST(Hypergraph, RoundTripOnRandomInstances) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto g = gen_random_triad(4, 5, 3, Rational(1, 2), seed);
        const auto h = gen_random_hypergraph_on(g, Rational(1, 3), seed + 1000);
        EXPECT_EQ(parse_hypergraph(serialize_hypergraph(h)), h) << "seed " << seed;
    }
}

TEST(Hypergraph, SmallVertexCountIsEdgeless) {
    const auto h = parse_hypergraph("n=2\n");
    EXPECT_EQ(h.edge_count(), 0u);
}

namespace {

Decomposition full_two_class(std::size_t a, std::size_t b) {
    std::vector<Vertex> v0(a), v1(b);
    std::iota(v0.begin(), v0.end(), 0);
    std::iota(v1.begin(), v1.end(), static_cast<Vertex>(a));
    PairList all;
    for (auto x : v0)
        for (auto y : v1) all.emplace_back(x, y);
    return Decomposition({v0, v1}, {{{0, 1}, {all}}});
}

}  // namespace

TEST(Decomposition, TrivialTwoClassIsValid) {
    const auto p = full_two_class(3, 4);
    const auto rep = validate_decomposition(Hypergraph3(7, {}), p);
    EXPECT_TRUE(rep.ok);
    EXPECT_EQ(p.ell(), 1u);
}

TEST(Decomposition, OverlapIsLocalized) {
    auto p = full_two_class(2, 2);
    auto pp = p.pair_parts();
    pp[{0, 1}].push_back({{0, 2}});
    const auto rep = validate_decomposition(Hypergraph3(4, {}), Decomposition(p.vertex_parts(), pp));
    ASSERT_FALSE(rep.ok);
    bool found = false;
    for (const auto& v : rep.violations) found |= v.kind == "overlap" && v.location == "overlap at (0,1)";
    EXPECT_TRUE(found);
}

TEST(Decomposition, UncoveredAndForeignPairsAreReported) {
    auto p = full_two_class(2, 2);
    auto pp = p.pair_parts();
    pp[{0, 1}][0].pop_back();
    auto rep = validate_decomposition(Hypergraph3(4, {}), Decomposition(p.vertex_parts(), pp));
    ASSERT_FALSE(rep.ok);
    EXPECT_EQ(rep.violations.front().kind, "uncovered_pairs");
    pp = p.pair_parts();
    pp[{0, 1}][0].push_back({0, 1});
    rep = validate_decomposition(Hypergraph3(4, {}), Decomposition(p.vertex_parts(), pp));
    ASSERT_FALSE(rep.ok);
    EXPECT_EQ(rep.violations.front().kind, "foreign_pair");
}

TEST(Decomposition, VertexCoverViolations) {
    auto p = full_two_class(2, 2);
    auto rep = validate_decomposition(Hypergraph3(5, {}), p);
    ASSERT_FALSE(rep.ok);
    EXPECT_EQ(rep.violations.front().kind, "vertex_uncovered");
}

TEST(Decomposition, EmptyPartsAreWarningsNotErrors) {
    Decomposition p({{0, 1}, {}}, {{{0, 1}, {}}});
    const auto rep = validate_decomposition(Hypergraph3(2, {}), p);
    EXPECT_TRUE(rep.ok);
    EXPECT_FALSE(rep.warnings.empty());
}

TEST(Decomposition, PlantedOutputValidatesAndCountsAddUp) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        PlantedParams prm;
        prm.n = 40 + seed % 7;
        prm.t = 3 + seed % 3;
        prm.ell = 1 + seed % 4;
        prm.groups_per_pair = 1 + seed % 2;
        prm.seed = seed;
        const auto inst = gen_planted_decomposition(prm);
        const auto rep = validate_decomposition(inst.hypergraph, inst.decomposition);
        ASSERT_TRUE(rep.ok) << "seed " << seed;
        const auto& vp = inst.decomposition.vertex_parts();
        for (const auto& [key, parts] : inst.decomposition.pair_parts()) {
            std::size_t total = 0;
            for (const auto& part : parts) total += part.size();
            EXPECT_EQ(total, vp[key.first].size() * vp[key.second].size());
        }
    }
}

TEST(Decomposition, SerializationRoundTrip) {
    PlantedParams prm;
    prm.n = 30;
    prm.t = 3;
    prm.ell = 3;
    prm.seed = 4;
    const auto inst = gen_planted_decomposition(prm);
    const auto text = serialize_decomposition(inst.decomposition);
    EXPECT_EQ(parse_decomposition(text), inst.decomposition);
    EXPECT_EQ(serialize_decomposition(parse_decomposition(text)), text);
    EXPECT_THROW(parse_decomposition("{\"vertex_parts\": 3}"), std::exception);
}

TEST(Decomposition, TriadTriangleSetsPartitionCrossTriples) {
    PlantedParams prm;
    prm.n = 24;
    prm.t = 4;
    prm.ell = 3;
    prm.seed = 11;
    const auto inst = gen_planted_decomposition(prm);
    const IndexedDecomposition idx(inst.hypergraph, inst.decomposition);
    std::set<Triple> seen;
    std::size_t total = 0;
    for (int i = 0; i < idx.t(); ++i)
        for (int j = i + 1; j < idx.t(); ++j)
            for (int s = j + 1; s < idx.t(); ++s)
                for (std::size_t a = 0; a < idx.ell(i, j); ++a)
                    for (std::size_t b = 0; b < idx.ell(i, s); ++b)
                        for (std::size_t c = 0; c < idx.ell(j, s); ++c) {
                            const auto g = idx.triad({i, j, s, int(a), int(b), int(c)});
                            for (const auto& tr : triangle_set(g).triples) {
                                ++total;
                                seen.insert(sorted_triple(tr[0], tr[1], tr[2]));
                            }
                        }
    EXPECT_EQ(total, seen.size());
    EXPECT_EQ(BigInt(total), idx.cross_triples());
}

TEST(Bipartite, RejectsOverlappingSidesAndNonCrossEdges) {
    EXPECT_THROW(BipartiteGraph({0, 1}, {1, 2}, {}), std::invalid_argument);
    const BipartiteGraph g({0, 1}, {2, 3}, {{0, 1}, {1, 0}});
    EXPECT_EQ(g.edge_count(), 2u);
    EXPECT_EQ(g.density(), Rational(1, 2));
    EXPECT_EQ(g.complement().edge_count(), 2u);
    EXPECT_TRUE(g.has(0, 1));
    EXPECT_FALSE(g.has(0, 0));
}

TEST(Bipartite, ColoredGraphsNeedTotalColoring) {
    EXPECT_THROW(EdgeColoredBipartiteGraph({0, 1}, {2}, {0}), std::invalid_argument);
    const EdgeColoredBipartiteGraph g({0, 1}, {2, 3}, {0, 1, 2, 1});
    EXPECT_EQ(g.color_count(1), 2u);
    EXPECT_EQ(g.color_count(0) + g.color_count(1) + g.color_count(2), 4u);
    EXPECT_TRUE(g.neighbors(1, 0).test(1));
    EXPECT_THROW(EdgeColoredTripartite3Graph(1, 1, 1, {3}), std::invalid_argument);
}

TEST(Triad, RejectsMismatchedParts) {
    const BipartiteGraph ab({0}, {1}, {}), ac({0}, {2}, {}), bc({1}, {3}, {});
    EXPECT_THROW(Triad(ab, ac, bc), std::invalid_argument);
    EXPECT_NO_THROW(Triad(ab, ac, BipartiteGraph({1}, {2}, {})));
}

TEST(Parallel, ResultsIndependentOfThreadLimit) {
    std::vector<std::uint64_t> one(500), many(500);
    set_thread_limit(1);
    parallel_for(one.size(), [&](std::size_t i) { one[i] = Rng::derive(i, "p"); });
    set_thread_limit(4);
    parallel_for(many.size(), [&](std::size_t i) { many[i] = Rng::derive(i, "p"); });
    set_thread_limit(0);
    EXPECT_EQ(one, many);
}
