#include "vc2reg/generators.hpp"
#include "vc2reg/quasirandomness.hpp"

#include <gtest/gtest.h>

using namespace vc2reg;

namespace {

BipartiteGraph complete(std::size_t a, std::size_t b) { return gen_random_bipartite(a, b, Rational(1), 0); }
BipartiteGraph empty(std::size_t a, std::size_t b) { return gen_random_bipartite(a, b, Rational(0), 0); }

BipartiteGraph half_graph(std::size_t n) {
    std::vector<Vertex> l(n), r(n);
    std::iota(l.begin(), l.end(), 0);
    std::iota(r.begin(), r.end(), static_cast<Vertex>(n));
    std::vector<LocalEdge> e;
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i; j < n; ++j) e.emplace_back(i, j);
    return BipartiteGraph(l, r, e);
}

// max over all subset pairs of |e(U',W') - d|U'||W'|| / (|U||W|)
Rational disc_brute(const BipartiteGraph& b, const Rational& d) {
    Rational best = 0;
    for (std::uint32_t mu = 0; mu < (1u << b.nl()); ++mu)
        for (std::uint32_t mw = 0; mw < (1u << b.nr()); ++mw) {
            long long e = 0, nu = __builtin_popcount(mu), nw = __builtin_popcount(mw);
            for (std::size_t i = 0; i < b.nl(); ++i)
                if (mu >> i & 1)
                    for (std::size_t j = 0; j < b.nr(); ++j)
                        if (mw >> j & 1) e += b.has(i, j);
            const Rational v = abs(Rational(e) - d * nu * nw) / (b.nl() * b.nr());
            if (v > best) best = v;
        }
    return best;
}

Triad complete_triad(std::size_t a, std::size_t b, std::size_t c) { return gen_random_triad(a, b, c, Rational(1), 0); }

Hypergraph3 all_triangles(const Triad& g) {
    std::vector<Triple> e;
    for (const auto& t : triangle_set(g).triples) e.push_back(t);
    return Hypergraph3(g.part_a().size() + g.part_b().size() + g.part_c().size(), e);
}

}  // namespace

TEST(Dev2, CompleteAndEmptyHaveZeroSum) {
    for (auto [a, b] : {std::pair{3, 5}, std::pair{7, 2}}) {
        const auto c = dev2(complete(a, b));
        EXPECT_EQ(c.density, 1);
        EXPECT_EQ(c.raw_sum, 0);
        const auto e = dev2(empty(a, b));
        EXPECT_EQ(e.density, 0);
        EXPECT_EQ(e.raw_sum, 0);
    }
}

TEST(Dev2, SingleEdgeTwoByTwo) {
    const BipartiteGraph g({0, 1}, {2, 3}, {{0, 0}});
    for (auto mode : {Mode::brute, Mode::fast}) {
        const auto r = dev2(g, mode);
        EXPECT_EQ(r.density, Rational(1, 4));
        EXPECT_EQ(r.raw_sum, Rational(7, 16));
        EXPECT_EQ(r.normalized, Rational(7, 256));
    }
}

TEST(Dev2, FastEqualsBruteOnRandomGraphs) {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const auto g = gen_random_bipartite(1 + seed % 8, 1 + (seed / 8) % 8, Rational(1 + seed % 5, 6), seed);
        const auto f = dev2(g, Mode::fast), b = dev2(g, Mode::brute);
        EXPECT_EQ(f.raw_sum, b.raw_sum) << "seed " << seed;
        EXPECT_EQ(f.normalized, b.normalized);
        EXPECT_NEAR(dev2_normalized_double(g), to_double(f.normalized), 1e-12);
    }
}

TEST(HasDev2, CompleteGraphDensityGate) {
    const auto g = complete(6, 6);
    EXPECT_TRUE(has_dev2(g, Rational(1, 10), Rational(1)));
    EXPECT_FALSE(has_dev2(g, Rational(1, 10), Rational(1, 2)));
}

TEST(HasDev2, RandomDenseGraphsAreQuasirandom) {
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed)
        ok += has_dev2(gen_random_bipartite(200, 200, Rational(1, 2), seed), Rational(1, 20), Rational(1, 2));
    EXPECT_GE(ok, 95);
}

TEST(Disc2, CompleteHasZeroDefect) {
    const auto g = complete(5, 4);
    EXPECT_EQ(disc2(g, DiscMode::exact).defect, 0);
    EXPECT_EQ(disc2(g, DiscMode::sampled, 200, 1).defect, 0);
}

TEST(Disc2, HalfGraphExactMatchesSubsetEnumeration) {
    const auto g = half_graph(6);
    const auto r = disc2(g, DiscMode::exact);
    EXPECT_EQ(r.defect, disc_brute(g, g.density()));
    EXPECT_FALSE(r.witness_left.empty());
}

TEST(Disc2, SampledNeverExceedsExact) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto g = gen_random_bipartite(10, 10, Rational(1, 2), seed);
        EXPECT_LE(disc2(g, DiscMode::sampled, 300, seed).defect, disc2(g, DiscMode::exact).defect);
    }
}

TEST(Equivalence, CompleteGraph) {
    const auto r = check_equivalence(complete(4, 4), Rational(1));
    EXPECT_EQ(r.dev_eps, 0);
    EXPECT_EQ(r.disc_eps, 0);
    EXPECT_TRUE(r.ok);
}

TEST(Equivalence, HoldsOnRandomAndSingleEdgeGraphs) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto g = gen_random_bipartite(10, 10, Rational(1 + seed % 3, 4), seed);
        EXPECT_TRUE(check_equivalence(g, g.density()).ok) << "seed " << seed;
    }
    EXPECT_TRUE(check_equivalence(BipartiteGraph({0, 1}, {2, 3}, {{0, 0}}), Rational(1, 4)).ok);
}

TEST(Triangles, CompleteEmptyAndBrute) {
    EXPECT_EQ(triangle_set(complete_triad(2, 3, 4)).count, 24u);
    const auto g = gen_random_triad(3, 3, 3, Rational(1, 2), 1);
    const Triad holed(g.ab(), g.ac(), BipartiteGraph(g.part_b(), g.part_c(), {}));
    EXPECT_EQ(triangle_set(holed).count, 0u);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto t = gen_random_triad(10, 10, 10, Rational(1, 2), seed);
        std::size_t brute = 0;
        for (std::size_t a = 0; a < 10; ++a)
            for (std::size_t b = 0; b < 10; ++b)
                for (std::size_t c = 0; c < 10; ++c) brute += t.ab().has(a, b) && t.ac().has(a, c) && t.bc().has(b, c);
        EXPECT_EQ(triangle_set(t).count, brute);
        EXPECT_EQ(triangle_count(t.view()), brute);
    }
}

TEST(Dev23, FullAndEmptyHypergraphs) {
    const auto g = gen_random_triad(4, 4, 4, Rational(2, 3), 3);
    const auto full = dev23(all_triangles(g), g);
    EXPECT_EQ(full.d3, 1);
    EXPECT_EQ(full.raw_sum, 0);
    const auto none = dev23(Hypergraph3(12, {}), g);
    EXPECT_EQ(none.d3, 0);
    EXPECT_EQ(none.raw_sum, 0);
}

TEST(Dev23, FastEqualsBrute) {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto g = gen_random_triad(6, 6, 6, Rational(1, 2), seed);
        const auto h = gen_random_hypergraph_on(g, Rational(1, 2), seed + 77);
        const auto f = dev23(h, g, Mode::fast), b = dev23(h, g, Mode::brute);
        EXPECT_EQ(f.raw_sum, b.raw_sum) << "seed " << seed;
        EXPECT_EQ(f.normalized_bound_lhs, b.normalized_bound_lhs);
        EXPECT_EQ(f.triangles, b.triangles);
        EXPECT_NEAR(dev23_normalized_double(h, g), to_double(f.normalized_bound_lhs), 1e-9);
    }
}

TEST(Dev23, HasDev23UsesMeanPairDensity) {
    const auto g = complete_triad(3, 3, 3);
    const auto r = dev23(all_triangles(g), g);
    EXPECT_EQ(mean_pair_density(r), 1);
    EXPECT_TRUE(has_dev23(r, Rational(1, 100), Rational(1, 10)));
    EXPECT_FALSE(has_dev23(r, Rational(1, 100), Rational(1, 10), Rational(1, 2)));
    EXPECT_EQ(dev23_ratio(r), 0);
}

TEST(K222, CompleteEmptyAndBrute) {
    const auto full = complete_triad(2, 3, 2);
    EXPECT_EQ(k222_count(full), BigInt(4 * 9 * 4));
    const Triad holed(full.ab(), full.ac(), BipartiteGraph(full.part_b(), full.part_c(), {}));
    EXPECT_EQ(k222_count(holed), 0);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto t = gen_random_triad(6, 6, 6, Rational(1, 2), seed);
        const auto v = t.view();
        BigInt brute = 0;
        for (std::size_t a0 = 0; a0 < 6; ++a0)
            for (std::size_t a1 = 0; a1 < 6; ++a1)
                for (std::size_t b0 = 0; b0 < 6; ++b0)
                    for (std::size_t b1 = 0; b1 < 6; ++b1)
                        for (std::size_t c0 = 0; c0 < 6; ++c0)
                            for (std::size_t c1 = 0; c1 < 6; ++c1) {
                                bool all = true;
                                for (auto a : {a0, a1})
                                    for (auto b : {b0, b1})
                                        for (auto c : {c0, c1}) all = all && v.is_triangle(a, b, c);
                                brute += all;
                            }
        EXPECT_EQ(k222_count(t), brute);
    }
}

TEST(K222, LinkOnCompleteTriad) {
    const auto g = complete_triad(2, 2, 2);
    EXPECT_EQ(k222_link(g, g.part_a()[0], g.part_b()[0], g.part_c()[0]), 8);
}

TEST(CountingLemma, CompleteAndRandomAndLopsided) {
    const auto c = counting_lemma_check(complete_triad(3, 3, 3), Rational(1));
    EXPECT_EQ(c.lhs, 0);
    EXPECT_TRUE(c.ok);
    for (std::uint64_t seed = 0; seed < 50; ++seed)
        EXPECT_TRUE(counting_lemma_check(gen_random_triad(40, 40, 40, Rational(1, 2), seed), Rational(1, 2)).ok);
    const auto full = complete_triad(5, 5, 5);
    const Triad lop(full.ab(), full.ac(), BipartiteGraph(full.part_b(), full.part_c(), {}));
    const auto r = counting_lemma_check(lop, Rational(1, 2));
    EXPECT_GT(r.eps, 0);
    EXPECT_TRUE(r.ok);
}

TEST(SymmetryScan, DensityBranchesAndWitness) {
    EXPECT_EQ(symmetry_scan(complete(10, 10), Rational(1, 10)).branch, SymmetryScan::Branch::high_density);
    EXPECT_EQ(symmetry_scan(empty(10, 10), Rational(1, 10)).branch, SymmetryScan::Branch::low_density);
    const auto r = symmetry_scan(half_graph(20), Rational(1, 20));
    EXPECT_TRUE(r.branch == SymmetryScan::Branch::left_witness || r.branch == SymmetryScan::Branch::right_witness);
    EXPECT_FALSE(r.witness.empty());
}

TEST(UnionFact, EmptySummandRandomPairsAndComplementHalves) {
    const auto b = gen_random_bipartite(20, 20, Rational(1, 3), 1);
    EXPECT_TRUE(union_dev2_check(empty(20, 20), b).ok);
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto g = gen_random_bipartite(40, 40, Rational(1, 2), seed);
        std::vector<LocalEdge> x, y;
        Rng rng = Rng::stream(seed, "test/union");
        for (const auto& e : g.local_edges()) (rng.below(2) ? x : y).push_back(e);
        const BipartiteGraph b1(g.left(), g.right(), x), b2(g.left(), g.right(), y);
        EXPECT_TRUE(union_dev2_check(b1, b2).ok) << "seed " << seed;
        EXPECT_TRUE(union_dev2_check(g, g.complement()).ok);
    }
    EXPECT_THROW(union_dev2_check(b, b), std::invalid_argument);
}

TEST(HomImpliesRandom, EmptyHypergraph) {
    const auto g = gen_random_triad(10, 10, 10, Rational(1, 2), 1);
    const auto r = hom_implies_random_check(Hypergraph3(30, {}), g, Rational(1, 20), Rational(1, 10), Rational(1, 2));
    EXPECT_EQ(r.raw_sum, 0);
    EXPECT_TRUE(r.ok);
}

TEST(HomImpliesRandom, SparsePlantedOverRandomTriad) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto g = gen_random_triad(30, 30, 30, Rational(1, 2), seed);
        const auto h = gen_random_hypergraph_on(g, Rational(1, 40), seed + 500);
        const auto r = hom_implies_random_check(h, g, Rational(1, 20), Rational(1, 10), Rational(1, 2));
        EXPECT_TRUE(r.ok) << "seed " << seed;
        EXPECT_TRUE(r.chain_ok) << "seed " << seed;
        EXPECT_EQ(r.raw_sum, dev23(h, g, Mode::fast).raw_sum);
    }
}

TEST(HomImpliesRandom, DenseHypergraphViolatesPrecondition) {
    const auto g = complete_triad(3, 3, 3);
    EXPECT_THROW(hom_implies_random_check(all_triangles(g), g, Rational(1, 20), Rational(1, 10), Rational(1)), std::domain_error);
}
