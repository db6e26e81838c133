#include <gtest/gtest.h>

#include <random>

#include "setbranch/generators.hpp"
#include "setbranch/instance_io.hpp"
#include "setbranch/propagation.hpp"
#include "support/oracles.hpp"

using namespace setbranch;

TEST(Revise, NotEqualRemovesUnsupported) {
    const Problem p = parse_instance("var x 1..2\nvar y 1..1\ncon int (x,y) : ne(x,y)\n");
    SearchState s(p);
    EXPECT_TRUE(revise(s, p.constraint(0), 0));
    EXPECT_EQ(s.values(0), (std::vector<Value>{2}));
    EXPECT_FALSE(revise(s, p.constraint(0), 1));
}

TEST(Revise, AllSupportedTableNoChange) {
    const Problem p = parse_instance("var x 0..1\nvar y 0..1\ncon ext allowed (x,y) : (0,0) (1,1)\n");
    SearchState s(p);
    EXPECT_FALSE(revise(s, p.constraint(0), 0));
    EXPECT_FALSE(revise(s, p.constraint(0), 1));
    EXPECT_EQ(s.trail_size(), 0u);
}

TEST(Revise, TernaryIntensional) {
    const Problem p = parse_instance("var x 0..1\nvar y 0..1\nvar z 0..1\ncon int (x,y,z) : eq(add(x,y),z)\n");
    SearchState s(p);
    EXPECT_FALSE(revise(s, p.constraint(0), 2));
    EXPECT_EQ(s.values(2), (std::vector<Value>{0, 1}));

    const Problem q = parse_instance("var x 0..1\nvar y 0..1\nvar z 2..2\ncon int (x,y,z) : eq(add(x,y),z)\n");
    SearchState t(q);
    EXPECT_FALSE(revise(t, q.constraint(0), 2));
    EXPECT_TRUE(revise(t, q.constraint(0), 0));
    EXPECT_EQ(t.values(0), (std::vector<Value>{1}));
    // x = 1 is forced; now z = 2 needs y = 1
    const auto r = propagate(t, std::vector<Arc>{{0, 1}, {0, 2}});
    EXPECT_TRUE(r.consistent());
    EXPECT_EQ(t.values(1), (std::vector<Value>{1}));

    const Problem w = parse_instance("var x 0..1\nvar y 0..1\nvar z 3..3\ncon int (x,y,z) : eq(add(x,y),z)\n");
    SearchState u(w);
    EXPECT_TRUE(revise(u, w.constraint(0), 2));
    EXPECT_TRUE(u.empty(2));
}

TEST(Propagate, PigeonsTwoWipesOutAtRoot) {
    const Problem p = gen_pigeons(2);
    SearchState s(p);
    const auto r = establish_root_gac(s);
    EXPECT_FALSE(r.consistent());
    EXPECT_EQ(r.constraint, 0u);
    EXPECT_EQ(s.weight(0), 2u);
    EXPECT_EQ(s.counters.wipeouts, 1u);
}

TEST(Propagate, Chain) {
    const Problem p = parse_instance("var x 0..2\nvar y 0..2\nvar z 0..2\ncon int (x,y) : lt(x,y)\ncon int (y,z) : lt(y,z)\n");
    SearchState s(p);
    ASSERT_TRUE(establish_root_gac(s).consistent());
    EXPECT_EQ(s.values(0), (std::vector<Value>{0}));
    EXPECT_EQ(s.values(1), (std::vector<Value>{1}));
    EXPECT_EQ(s.values(2), (std::vector<Value>{2}));
}

TEST(Propagate, FullQwhIsAllSingletons) {
    const Problem p = gen_qwh(5, 0, 4);
    SearchState s(p);
    ASSERT_TRUE(establish_root_gac(s).consistent());
    for (VarId x = 0; x < p.num_variables(); ++x) EXPECT_EQ(s.size(x), 1u);
}

TEST(Propagate, IdempotentOnConsistentState) {
    const Problem p = gen_randomb(8, 4, 10, 5, 1);
    SearchState s(p);
    ASSERT_TRUE(establish_root_gac(s).consistent());
    Propagator prop(p);
    const auto r = prop.propagate_all(s);
    EXPECT_TRUE(r.consistent());
    EXPECT_EQ(r.removed, 0u);
}

TEST(Propagate, OnlyEmptyingConstraintGetsWeight) {
    const Problem p = parse_instance("var x 0..1\nvar y 0..1\nvar z 0..1\ncon int (x,y) : ne(x,y)\ncon int (x,z) : eq(x,z)\ncon int (y,z) : eq(y,z)\n");
    SearchState s(p);
    const auto r = establish_root_gac(s);
    ASSERT_TRUE(r.consistent());
    const auto t = s.push_level();
    s.remove_value(0, 0);
    Propagator prop(p);
    const auto arcs = prop.arcs_touching(0);
    const auto r2 = prop.propagate(s, arcs);
    EXPECT_FALSE(r2.consistent());
    std::uint64_t total = 0;
    for (ConstraintId c = 0; c < 3; ++c) total += s.weight(c);
    EXPECT_EQ(total, 4u);
    EXPECT_EQ(s.weight(r2.constraint), 2u);
    s.undo_to(t);
    EXPECT_EQ(s.values(0), (std::vector<Value>{0, 1}));
}

TEST(Propagate, MatchesNaiveClosureOnRandomProblems) {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 200; ++i) {
        const Problem p = oracle::random_mixed(rng);
        SearchState s(p);
        const auto r = establish_root_gac(s);
        const auto expected = oracle::gac_closure(p, oracle::original_domains(p));
        ASSERT_EQ(r.consistent(), expected.has_value()) << serialize_instance(p);
        if (expected) {
            ASSERT_EQ(oracle::current_domains(s), *expected) << serialize_instance(p);
        }
    }
}

TEST(Propagate, LargeDomainUsesTupleScan) {
    // 3000 x 3000 exceeds the support-matrix limit.
    const Problem p = parse_instance("var x 0..2999\nvar y 0..2999\ncon int (x,y) : eq(x,add(y,2998))\n");
    EXPECT_EQ(p.binary_support(0), nullptr);
    SearchState s(p);
    ASSERT_TRUE(establish_root_gac(s).consistent());
    EXPECT_EQ(s.values(0), (std::vector<Value>{2998, 2999}));
    EXPECT_EQ(s.values(1), (std::vector<Value>{0, 1}));
}
