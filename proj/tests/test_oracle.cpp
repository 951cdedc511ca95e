#include <gtest/gtest.h>

#include "mlgcp/oracle.hpp"
#include "test_support.hpp"

namespace mlgcp {
namespace {

TEST(BruteForce, SmallCases) {
    const CutSolution one = brute_force(testing::single_edge());
    EXPECT_EQ(one.labels, (LabelSet{0}));
    EXPECT_EQ(one.cost, 1.0);

    const CutSolution split = brute_force(LabeledGraph(4, {{0, 1, 0}, {2, 3, 1}}, 2));
    EXPECT_TRUE(split.labels.empty());
    EXPECT_EQ(split.cost, 0.0);

    const CutSolution k3 = brute_force(testing::triangle());
    EXPECT_EQ(k3.cost, 2.0);
    EXPECT_EQ(k3.labels, (LabelSet{0, 1}));
}

TEST(BruteForce, WeightedTieBreak) {
    // {a} alone and {b, c} both cost 2 once the edge labeled a is a bridge.
    const LabeledGraph g(3, {{0, 1, 0}, {1, 2, 1}, {1, 2, 2}}, 3, {2.0, 1.0, 1.0});
    const CutSolution s = brute_force(g);
    EXPECT_EQ(s.cost, 2.0);
    EXPECT_EQ(s.labels, (LabelSet{0}));
}

TEST(BruteForce, Cap) {
    std::vector<Edge> edges;
    for (int l = 0; l < 5; ++l) edges.push_back({0, 1, l});
    const LabeledGraph g(2, edges, 5);
    EXPECT_THROW(brute_force(g, 4), std::invalid_argument);
    EXPECT_EQ(brute_force(g, 5).cost, 5.0);
}

TEST(BruteForce, MatchesIndependentEnumeration) {
    RandomStream rng(61);
    for (int t = 0; t < 100; ++t) {
        const LabeledGraph g = testing::random_instance(rng, 2, 12, 1, 12, t % 2 == 0);
        const CutSolution s = brute_force(g);
        EXPECT_TRUE(s.feasible());
        EXPECT_NEAR(s.cost, testing::exhaustive_optimum(g), 1e-12);
        std::size_t k = 0;
        const auto masks = testing::disconnecting_masks(g);
        const auto sets = enumerate_feasible_cuts(g);
        ASSERT_EQ(sets.size(), masks.size());
        for (const LabelSet& ls : sets) EXPECT_EQ(testing::mask_of(ls), masks[k++]);
    }
}

}  // namespace
}  // namespace mlgcp
