#include "vc2reg/generators.hpp"
#include "vc2reg/vc.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace vc2reg;

namespace {

Hypergraph3 complete_3graph(std::size_t n) {
    std::vector<Triple> e;
    for (Vertex a = 0; a < n; ++a)
        for (Vertex b = a + 1; b < n; ++b)
            for (Vertex c = b + 1; c < n; ++c) e.push_back({a, b, c});
    return Hypergraph3(n, e);
}

// Colors 1 on U(k) edges and 0 on its non-edges.
EdgeColoredBipartiteGraph uk_colored(int k) {
    const auto u = build_uk(k);
    std::vector<std::int64_t> left(u.a_vertices.begin(), u.a_vertices.end()), right(u.c_vertices.begin(), u.c_vertices.end());
    std::vector<std::uint8_t> colors(left.size() * right.size(), 0);
    for (auto [a, c] : u.edges) colors[a * right.size() + (c - k)] = 1;
    return EdgeColoredBipartiteGraph(left, right, colors);
}

}  // namespace

TEST(VcDim, SingletonsEmptyAndPowerSet) {
    EXPECT_EQ(vc_dim(SetSystem::from_lists(5, {{0}, {1}, {2}, {3}, {4}})), 1);
    EXPECT_EQ(vc_dim(SetSystem::from_lists(5, {})), 0);
    EXPECT_EQ(vc_dim(SetSystem::from_lists(5, {{}})), 0);
    std::vector<std::vector<std::size_t>> all;
    for (int m = 0; m < 16; ++m) {
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < 4; ++i)
            if (m >> i & 1) s.push_back(i);
        all.push_back(s);
    }
    EXPECT_EQ(vc_dim(SetSystem::from_lists(4, all)), 4);
    EXPECT_THROW(SetSystem::from_lists(3, {{3}}), std::out_of_range);
}

TEST(VcDim, MatchesBruteOnRandomSystems) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng = Rng::stream(seed, "test/vc");
        const std::size_t ground = 6;
        std::vector<std::vector<std::size_t>> lists;
        std::vector<std::uint32_t> masks;
        for (int s = 0; s < 12; ++s) {
            const auto m = static_cast<std::uint32_t>(rng.below(64));
            masks.push_back(m);
            std::vector<std::size_t> l;
            for (std::size_t i = 0; i < ground; ++i)
                if (m >> i & 1) l.push_back(i);
            lists.push_back(l);
        }
        int brute = 0;
        for (std::uint32_t x = 1; x < 64; ++x) {
            std::set<std::uint32_t> traces;
            for (auto m : masks) traces.insert(m & x);
            if (traces.size() == (1u << __builtin_popcount(x))) brute = std::max(brute, __builtin_popcount(x));
        }
        EXPECT_EQ(vc_dim(SetSystem::from_lists(ground, lists)), brute) << "seed " << seed;
    }
}

TEST(Vc2Dim, EmptyAndComplete) {
    EXPECT_EQ(vc2_dim(Hypergraph3(8, {}), 2).dimension, 0);
    const auto r = vc2_dim(complete_3graph(10), 2);
    EXPECT_EQ(r.dimension, 0);
    EXPECT_FALSE(r.incomplete);
}

TEST(Vc2Dim, PlantedIp2Instances) {
    for (int k : {1, 2}) {
        const auto r = vc2_dim(gen_ip2_hypergraph(k), k);
        EXPECT_EQ(r.dimension, k);
        EXPECT_FALSE(r.incomplete);
        ASSERT_TRUE(r.witness.has_value());
        EXPECT_EQ(r.witness->a.size(), static_cast<std::size_t>(k));
    }
}

TEST(Vc2Dim, WitnessRealizesEveryPattern) {
    const auto inst = gen_ip2_instance(2, 3, 5);
    const auto r = vc2_dim(inst.hypergraph, 2);
    ASSERT_EQ(r.dimension, 2);
    const auto& w = *r.witness;
    for (std::size_t s = 0; s < w.c.size(); ++s)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                EXPECT_EQ(inst.hypergraph.contains(w.a[i], w.b[j], w.c[s]), bool(s >> (i * 2 + j) & 1));
}

TEST(Vc2Dim, BudgetExhaustionIsFlagged) {
    const auto r = vc2_dim(gen_ip2_hypergraph(2), 2, 10);
    EXPECT_TRUE(r.incomplete);
    EXPECT_LE(r.dimension, 2);
}

TEST(BuildUk, SmallCases) {
    const auto u1 = build_uk(1);
    EXPECT_EQ(u1.a_vertices.size(), 1u);
    EXPECT_EQ(u1.c_vertices.size(), 2u);
    ASSERT_EQ(u1.edges.size(), 1u);
    EXPECT_EQ(u1.edges[0], (std::pair<Vertex, Vertex>{u1.a_vertices[0], u1.c_vertices[1]}));
    EXPECT_EQ(build_uk(2).edges.size(), 4u);
    for (int k = 1; k <= 5; ++k) {
        const auto u = build_uk(k);
        EXPECT_EQ(u.c_vertices.size(), std::size_t{1} << k);
        EXPECT_EQ(u.edges.size(), static_cast<std::size_t>(k) << (k - 1));
        EXPECT_EQ(uk_bipartite(u).edge_count(), u.edges.size());
    }
}

TEST(UkCopy, FoundOnPlantedAndMissingOnDegenerateColorings) {
    const auto g = uk_colored(2);
    const auto w = find_e0e1_uk_copy(g, 2);
    ASSERT_TRUE(w.has_value());
    for (std::size_t s = 0; s < 4; ++s)
        for (int i = 0; i < 2; ++i) EXPECT_EQ(g.color(w->left[i], w->right[s]), (s >> i & 1) ? 1 : 0);
    const std::vector<std::int64_t> l{0, 1, 2}, r{3, 4, 5, 6};
    EXPECT_FALSE(find_e0e1_uk_copy(EdgeColoredBipartiteGraph(l, r, std::vector<std::uint8_t>(12, 2)), 1).has_value());
    EXPECT_FALSE(find_e0e1_uk_copy(EdgeColoredBipartiteGraph(l, r, std::vector<std::uint8_t>(12, 1)), 1).has_value());
    EXPECT_FALSE(find_e0e1_uk_copy(g, 3).has_value());
}
