#include "vc2reg/generators.hpp"
#include "vc2reg/splitting.hpp"

#include <gtest/gtest.h>

using namespace vc2reg;

namespace {

std::size_t total_edges(const SplitResult& r) {
    std::size_t s = r.remainder.edge_count();
    for (const auto& p : r.parts) s += p.edge_count();
    return s;
}

}  // namespace

TEST(Split, EmptyInputIsDegenerate) {
    const auto b = gen_random_bipartite(10, 10, Rational(0), 1);
    const auto r = split_quasirandom(b, 3, Rational(1, 10), 1);
    EXPECT_TRUE(r.degenerate);
    ASSERT_EQ(r.parts.size(), 3u);
    for (const auto& p : r.parts) EXPECT_EQ(p.edge_count(), 0u);
}

TEST(Split, OnePartIsIdentity) {
    const auto b = gen_random_bipartite(30, 30, Rational(1, 2), 2);
    const auto r = split_quasirandom(b, 1, Rational(1, 10), 2);
    ASSERT_EQ(r.parts.size(), 1u);
    EXPECT_EQ(r.parts[0], b);
    EXPECT_EQ(r.achieved[0].normalized, r.input_dev2.normalized);
    EXPECT_TRUE(r.met);
}

TEST(Split, FourWaySplitMeetsTargetsMostSeeds) {
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto b = gen_random_bipartite(200, 200, Rational(1, 2), seed);
        const auto r = split_quasirandom(b, 4, Rational(1, 10), seed, 1);
        bool good = r.remainder.edge_count() == 0;
        for (const auto& a : r.achieved)
            good = good && abs(a.density - Rational(1, 8)) <= Rational(1, 80) && a.normalized <= 4 * r.input_dev2.normalized;
        ok += good;
    }
    EXPECT_GE(ok, 90);
}

TEST(Split, PartitionIsExact) {
    const auto b = gen_random_bipartite(40, 50, Rational(1, 3), 4);
    const auto r = split_quasirandom(b, 5, Rational(1, 5), 4);
    EXPECT_EQ(total_edges(r), b.edge_count());
    EXPECT_EQ(merge_parts(r.parts).graph, b);
}

TEST(Split, SameSeedSameParts) {
    const auto b = gen_random_bipartite(30, 30, Rational(1, 2), 5);
    const auto x = split_quasirandom(b, 3, Rational(1, 5), 9), y = split_quasirandom(b, 3, Rational(1, 5), 9);
    EXPECT_EQ(x.parts, y.parts);
    EXPECT_NE(x.parts, split_quasirandom(b, 3, Rational(1, 5), 10).parts);
}

TEST(SplitByProbability, IntegralReciprocalLeavesNoRemainder) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto b = gen_random_bipartite(30, 30, Rational(1, 2), seed);
        const auto r = split_by_probability(b, Rational(1, 3), Rational(1, 5), seed);
        EXPECT_EQ(r.parts.size(), 3u);
        EXPECT_EQ(r.remainder.edge_count(), 0u);
    }
}

TEST(SplitByProbability, TwoFifthsLeavesAFifth) {
    const auto b = gen_random_bipartite(100, 100, Rational(1, 2), 6);
    const auto r = split_by_probability(b, Rational(2, 5), Rational(1, 5), 6);
    EXPECT_EQ(r.parts.size(), 2u);
    EXPECT_NEAR(double(r.remainder.edge_count()) / b.edge_count(), 0.2, 0.03);
    EXPECT_EQ(total_edges(r), b.edge_count());
    EXPECT_TRUE(r.remainder_ok);
}

TEST(SplitByProbability, AboveOneHalfGivesOnePart) {
    const auto b = gen_random_bipartite(100, 100, Rational(1, 2), 7);
    const auto r = split_by_probability(b, Rational(3, 5), Rational(1, 5), 7);
    EXPECT_EQ(r.parts.size(), 1u);
    EXPECT_NEAR(double(r.remainder.edge_count()) / b.edge_count(), 0.4, 0.03);
    EXPECT_THROW(split_by_probability(b, Rational(1), Rational(1, 5), 7), std::invalid_argument);
}

TEST(Merge, SinglePartIsIdentity) {
    const auto b = gen_random_bipartite(20, 20, Rational(1, 2), 8);
    const auto m = merge_parts({b});
    EXPECT_EQ(m.graph, b);
    EXPECT_EQ(m.dev2.normalized, dev2(b).normalized);
}

TEST(Merge, TwoDisjointQuarterGraphs) {
    const auto b = gen_random_bipartite(60, 60, Rational(1, 2), 9);
    const auto r = split_quasirandom(b, 2, Rational(1, 5), 9);
    const auto m = merge_parts(r.parts);
    EXPECT_NEAR(to_double(m.dev2.density), 0.5, 0.05);
    EXPECT_TRUE(m.bound_ok);
    EXPECT_TRUE(m.bound_is_theorem);
}

TEST(Merge, RejectsOverlapAndMismatchedSides) {
    const auto b = gen_random_bipartite(5, 5, Rational(1, 2), 10);
    EXPECT_THROW(merge_parts({b, b}), std::invalid_argument);
    EXPECT_THROW(merge_parts({b, gen_random_bipartite(5, 6, Rational(0), 0)}), std::invalid_argument);
    EXPECT_THROW(merge_parts({}), std::invalid_argument);
}
