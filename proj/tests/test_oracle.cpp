#include "rankdist/oracle.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace rankdist;

namespace {

std::uint64_t odd_product(unsigned m)
{
    std::uint64_t r = 1;
    for (unsigned j = 1; j <= m; j += 2) {
        r *= j;
    }
    return r;
}

} // namespace

TEST(Enumerate, VisitCountsEqualTreeCount)
{
    for (unsigned n = 1; n <= 9; ++n) {
        std::uint64_t seen = 0;
        const auto visited = oracle::enumerate_trees(n, [&](const PlaneTree& t) {
            seen += t.size() == n;
        });
        const std::uint64_t want = n == 1 ? 1 : odd_product(2 * n - 3);
        EXPECT_EQ(visited, want) << n;
        EXPECT_EQ(seen, want) << n;
    }
}

TEST(Enumerate, FifteenTreesOnFourVertices)
{
    EXPECT_EQ(oracle::enumerate_trees(4, [](const PlaneTree&) {}), 15u);
}

TEST(Enumerate, TreesAreValidAndDistinct)
{
    std::set<std::vector<std::vector<PlaneTree::Vertex>>> shapes;
    oracle::enumerate_trees(6, [&](const PlaneTree& t) {
        EXPECT_TRUE(t.valid());
        shapes.insert(t.children);
    });
    EXPECT_EQ(shapes.size(), 945u);
}

TEST(Enumerate, CapIsEnforced)
{
    auto noop = [](const PlaneTree&) {};
    EXPECT_THROW(oracle::enumerate_trees(0, noop), std::invalid_argument);
    EXPECT_THROW(oracle::enumerate_trees(10, noop), std::invalid_argument);
    oracle::EnumerationOptions force;
    force.force = true;
    EXPECT_THROW(oracle::enumerate_trees(11, noop, force), std::invalid_argument);
    EXPECT_THROW(oracle::census_all(10), std::invalid_argument);
}

TEST(DecodeSlots, BijectionOnFiveVertices)
{
    std::set<std::vector<std::vector<PlaneTree::Vertex>>> shapes;
    std::vector<unsigned> s(4, 1);
    // s_m ranges over 1..2m-3 for m = 2..5
    for (s[0] = 1; s[0] <= 1; ++s[0])
        for (s[1] = 1; s[1] <= 3; ++s[1])
            for (s[2] = 1; s[2] <= 5; ++s[2])
                for (s[3] = 1; s[3] <= 7; ++s[3]) {
                    const PlaneTree t = oracle::decode_slots(s);
                    EXPECT_TRUE(t.valid());
                    shapes.insert(t.children);
                }
    EXPECT_EQ(shapes.size(), 105u);
    std::set<std::vector<std::vector<PlaneTree::Vertex>>> enumerated;
    oracle::enumerate_trees(5, [&](const PlaneTree& t) { enumerated.insert(t.children); });
    EXPECT_EQ(shapes, enumerated);
    EXPECT_THROW(oracle::decode_slots({2}), std::out_of_range);
    EXPECT_THROW(oracle::decode_slots({0}), std::out_of_range);
}

TEST(Census, ThreeVertices)
{
    const auto c = oracle::census_all(3);
    EXPECT_EQ(c.tree_total, 3u);
    EXPECT_EQ(c.a, (std::vector<std::uint64_t>{5, 3, 1}));
    EXPECT_EQ(c.b, (std::vector<std::uint64_t>{0, 2, 1}));
    EXPECT_EQ(c.ptype, (std::vector<std::uint64_t>{5, 1, 1}));
    EXPECT_EQ(c.pi_exact[1], make_rational(1, 3));
    EXPECT_EQ(c.ptype_pair[0], 4u);
}

TEST(Census, LeavesOnSixVertices) { EXPECT_EQ(oracle::census_all(6).a[0], 3465u); }

TEST(Census, Invariants)
{
    for (unsigned n = 1; n <= 8; ++n) {
        const auto c = oracle::census_all(n);
        const std::uint64_t t = n == 1 ? 1 : odd_product(2 * n - 3);
        EXPECT_EQ(c.tree_total, t);
        std::uint64_t vertices = 0, trees = 0, pairs = 0;
        for (unsigned k = 0; k < n; ++k) {
            vertices += c.a[k];
            trees += c.b[k];
            for (unsigned j = 0; j < n; ++j) {
                EXPECT_EQ(c.pair[k][j], c.pair[j][k]);
                pairs += c.pair[k][j];
            }
            if (k > 0) {
                EXPECT_LE(c.pi_exact[k], c.pi_exact[k - 1]);
            }
            const ExactRational root_tail = k + 1 < n ? make_rational(static_cast<unsigned long>(c.b_geq(k + 1)),
                                                                      static_cast<unsigned long>(t))
                                                      : ExactRational(0);
            EXPECT_GE(c.pi_exact[k], root_tail);
        }
        EXPECT_EQ(vertices, n * t);
        EXPECT_EQ(trees, t);
        EXPECT_EQ(pairs, static_cast<std::uint64_t>(n) * (n - 1) * t);
    }
}

TEST(Census, IndependentOfThreadCount)
{
    oracle::EnumerationOptions one, three;
    three.threads = 3;
    const auto a = oracle::census_all(7, one);
    const auto b = oracle::census_all(7, three);
    EXPECT_EQ(a.a, b.a);
    EXPECT_EQ(a.b, b.b);
    EXPECT_EQ(a.ptype, b.ptype);
    EXPECT_EQ(a.ptype_pair, b.ptype_pair);
    EXPECT_EQ(a.pair, b.pair);
    EXPECT_EQ(a.pi_exact, b.pi_exact);
}

TEST(Census, WalkValuesFourAndFive)
{
    EXPECT_EQ(oracle::census_all(4).pi_exact[1], make_rational(1, 3));
    EXPECT_EQ(oracle::census_all(5).pi_exact[1], make_rational(12, 35));
}

TEST(PlaneTree, AttachDetach)
{
    PlaneTree t = PlaneTree::single_vertex();
    t.attach(0, 0);
    t.attach(0, 0); // vertex 2 left of vertex 1
    EXPECT_EQ(t.children[0], (std::vector<PlaneTree::Vertex>{2, 1}));
    EXPECT_TRUE(t.valid());
    t.detach_last();
    EXPECT_EQ(t.children[0], (std::vector<PlaneTree::Vertex>{1}));
    EXPECT_THROW(t.attach(0, 5), std::out_of_range);
    EXPECT_THROW(t.attach(7, 0), std::out_of_range);
}
