#include <gtest/gtest.h>

#include <random>

#include "setbranch/heuristics.hpp"
#include "setbranch/instance_io.hpp"
#include "setbranch/propagation.hpp"
#include "support/oracles.hpp"

using namespace setbranch;

TEST(Wdeg, Examples) {
    const Problem p = parse_instance(
        "var x 0..2\nvar y 0..2\nvar z 0..0\nvar w 1..1\nvar lone 0..3\n"
        "con int (x,y) : ne(x,y)\ncon int (x,z,w) : ne(add(x,z),w)\n");
    SearchState s(p);
    EXPECT_EQ(wdeg(s, 4), 0u);
    s.set_weight(0, 2);
    s.set_weight(1, 5);
    EXPECT_EQ(wdeg(s, 0), 2u);

    const Problem q = parse_instance(
        "var x 0..2\nvar a 0..2\nvar b 0..2\nvar c 0..2\n"
        "con int (x,a) : ne(x,a)\ncon int (x,b) : ne(x,b)\ncon int (x,c) : ne(x,c)\n");
    SearchState t(q);
    EXPECT_EQ(wdeg(t, 0), 3u);
}

TEST(SelectVariable, Examples) {
    const Problem single = parse_instance("var a 0..0\nvar b 0..3\nvar c 5..5\n");
    SearchState s0(single);
    EXPECT_EQ(select_variable(s0), std::optional<VarId>(1));

    const Problem p = parse_instance(
        "var x 0..1\nvar y 0..2\nvar z 0..3\nvar w 0..3\nvar u 0..3\n"
        "con int (x,z) : ne(x,z)\ncon int (x,w) : ne(x,w)\ncon int (y,u) : ne(y,u)\n");
    SearchState s(p);
    EXPECT_EQ(select_variable(s), std::optional<VarId>(0));

    const Problem tie = parse_instance("var a 0..1\nvar b 0..1\ncon int (a,b) : ne(a,b)\n");
    SearchState st(tie);
    EXPECT_EQ(select_variable(st), std::optional<VarId>(0));

    const Problem done = parse_instance("var a 0..0\n");
    SearchState sd(done);
    EXPECT_EQ(select_variable(sd), std::nullopt);
}

TEST(SelectVariable, ArgminInvariantUnderWeightScaling) {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 300; ++i) {
        const Problem p = oracle::random_mixed(rng, 6, 5);
        SearchState s(p);
        for (ConstraintId c = 0; c < p.num_constraints(); ++c) s.set_weight(c, 1 + rng() % 9);
        const auto before = select_variable(s);
        const std::uint64_t k = 2 + rng() % 50;
        for (ConstraintId c = 0; c < p.num_constraints(); ++c) s.set_weight(c, s.weight(c) * k);
        ASSERT_EQ(select_variable(s), before);
    }
}

TEST(Promise, Examples) {
    const Problem p = parse_instance(
        "var x 0..0\nvar y 0..2\nvar z 0..3\nvar q 7..9\n"
        "con int (x,y) : le(y,1)\ncon int (x,z) : ne(x,z)\ncon int (x,q) : eq(q,add(x,10))\n");
    SearchState s(p);
    // q has no compatible value with x = 0
    EXPECT_EQ(promise(s, 0, 0).score, 0);
    const Problem r = parse_instance(
        "var x 0..0\nvar y 0..2\nvar z 0..3\ncon int (x,y) : le(y,1)\ncon int (x,z) : ne(x,z)\n");
    SearchState t(r);
    EXPECT_EQ(promise(t, 0, 0).score, 6);
    const Problem alone = parse_instance("var x 0..3\nvar y 0..3\n");
    SearchState u(alone);
    EXPECT_EQ(promise(u, 0, 2).score, 1);
}

TEST(Promise, AssignedNeighborsAndSharedScopes) {
    // Two constraints on (x,y) intersect; y singleton is skipped.
    const Problem p = parse_instance(
        "var x 0..3\nvar y 0..3\nvar z 2..2\n"
        "con int (x,y) : ne(x,y)\ncon int (y,x) : le(y,2)\ncon int (x,z) : ne(x,z)\n");
    SearchState s(p);
    EXPECT_EQ(promise(s, 0, 0).score, 2);  // y in {1,2}
    EXPECT_EQ(promise(s, 0, 3).score, 3);  // y in {0,1,2}
    EXPECT_EQ(promise(s, 0, 2).score, 2);  // z is assigned and would give 0
}

TEST(ScoreDomain, OrderingAndTieBreak) {
    const Problem p = parse_instance("var x 0..2\nvar y 0..4\ncon int (x,y) : or(gt(x,0),lt(y,2))\n");
    SearchState s(p);
    const auto sc = score_domain(s, 0);
    ASSERT_EQ(sc.size(), 3u);
    EXPECT_EQ(sc[0].value, 1);
    EXPECT_EQ(sc[1].value, 2);
    EXPECT_EQ(sc[2].value, 0);
    EXPECT_EQ(sc[0].score, 5);
    EXPECT_EQ(sc[2].score, 2);

    const Problem one = parse_instance("var x 4..4\n");
    SearchState so(one);
    EXPECT_EQ(score_domain(so, 0).size(), 1u);
}

TEST(ScoreDomain, RecomputedAfterPropagation) {
    const Problem p = parse_instance(
        "var x 0..2\nvar y 0..4\nvar w 0..4\ncon int (x,y) : le(x,y)\ncon int (y,w) : lt(w,y)\n");
    SearchState s(p);
    const auto before = score_domain(s, 0);
    const auto t = s.push_level();
    const std::vector<Value> keep{0};
    s.reduce_domain(2, keep);
    s.remove_value(1, 4);
    ASSERT_TRUE(propagate(s, std::vector<Arc>{{1, 1}, {0, 0}}).consistent());
    const auto after = score_domain(s, 0);
    EXPECT_NE(before, after);
    s.undo_to(t);
    EXPECT_EQ(score_domain(s, 0), before);
}

TEST(Promise, LargeProductsDoNotWrap) {
    std::string text = "var x 0..1\n";
    for (int i = 0; i < 12; ++i) text += "var y" + std::to_string(i) + " 0..40000\n";
    for (int i = 0; i < 12; ++i) text += "con int (x,y" + std::to_string(i) + ") : ge(y" + std::to_string(i) + ",x)\n";
    const Problem p = parse_instance(text);
    SearchState s(p);
    const auto sc = score_domain(s, 0);
    EXPECT_GT(sc[0].score, 1e50L);
    EXPECT_EQ(sc[0].value, 0);
}
