#include <gtest/gtest.h>

#include <set>

#include "setbranch/generators.hpp"
#include "setbranch/instance_io.hpp"
#include "setbranch/search.hpp"
#include "support/oracles.hpp"

using namespace setbranch;

TEST(Pigeons, ShapeAndUnsat) {
    const Problem p2 = gen_pigeons(2);
    EXPECT_EQ(p2.num_variables(), 2u);
    EXPECT_EQ(p2.domain(0), (std::vector<Value>{0}));
    EXPECT_EQ(p2.num_constraints(), 1u);
    EXPECT_FALSE(oracle::brute_force(p2));
    const Problem p5 = gen_pigeons(5);
    EXPECT_EQ(p5.num_variables(), 5u);
    EXPECT_EQ(p5.num_constraints(), 10u);
    EXPECT_FALSE(oracle::brute_force(p5));
    const Problem p30 = gen_pigeons(30);
    EXPECT_EQ(p30.num_variables(), 30u);
    EXPECT_EQ(p30.num_constraints(), 435u);
    EXPECT_THROW(gen_pigeons(1), ModelError);
}

TEST(Pigeons, UnsatByBruteForceUpTo7) {
    for (std::size_t n = 2; n <= 7; ++n) EXPECT_FALSE(oracle::brute_force(gen_pigeons(n))) << n;
}

TEST(Langford, PatternByBruteForce) {
    for (std::size_t n = 2; n <= 4; ++n) {
        const bool sat = n % 4 == 0 || n % 4 == 3;
        EXPECT_EQ(oracle::brute_force(gen_langford(n)).has_value(), sat) << n;
    }
    EXPECT_EQ(gen_langford(4).num_variables(), 8u);
    EXPECT_THROW(gen_langford(1), ModelError);
}

TEST(Langford, SolutionIsAPairing) {
    const Problem p = gen_langford(3);
    const auto sol = oracle::brute_force(p);
    ASSERT_TRUE(sol);
    std::vector<int> seq(6, 0);
    for (int i = 1; i <= 3; ++i) {
        const Value a = (*sol)[2 * (i - 1)], b = (*sol)[2 * (i - 1) + 1];
        EXPECT_EQ(b - a, i + 1);
        seq[a] = seq[b] = i;
    }
    for (int v : seq) EXPECT_NE(v, 0);
}

TEST(RandomB, ExactCounts) {
    const Problem p = gen_randomb(8, 5, 12, 7, 99);
    EXPECT_EQ(p.num_variables(), 8u);
    ASSERT_EQ(p.num_constraints(), 12u);
    std::set<std::pair<VarId, VarId>> pairs;
    for (const auto& c : p.constraints()) {
        ASSERT_EQ(c.scope.size(), 2u);
        EXPECT_LT(c.scope[0], c.scope[1]);
        pairs.insert({c.scope[0], c.scope[1]});
        const auto& e = std::get<Extensional>(c.relation);
        EXPECT_FALSE(e.allowed);
        EXPECT_EQ(e.tuples.size(), 7u);
    }
    EXPECT_EQ(pairs.size(), 12u);
}

TEST(RandomB, AllForbiddenIsUnsat) {
    const Problem p = gen_randomb(2, 2, 1, 4, 0);
    EXPECT_FALSE(oracle::brute_force(p));
}

TEST(RandomB, Bounds) {
    EXPECT_THROW(gen_randomb(3, 2, 0, 1, 0), ModelError);
    EXPECT_THROW(gen_randomb(3, 2, 4, 1, 0), ModelError);
    EXPECT_THROW(gen_randomb(3, 2, 1, 0, 0), ModelError);
    EXPECT_THROW(gen_randomb(3, 2, 1, 5, 0), ModelError);
}

// Text checked against a separate Python rendition of the draw order;
// satisfiability and solution count from the enumeration oracle.
TEST(RandomB, PinnedInstance) {
    const Problem p = gen_randomb(5, 4, 6, 4, 42);
    EXPECT_EQ(serialize_instance(p),
              "var x0 0..3\nvar x1 0..3\nvar x2 0..3\nvar x3 0..3\nvar x4 0..3\n"
              "con ext forbidden (x0,x3) : (0,1) (1,3) (2,3) (3,3)\n"
              "con ext forbidden (x0,x4) : (0,1) (0,3) (3,0) (3,3)\n"
              "con ext forbidden (x1,x3) : (0,2) (1,0) (2,0) (3,0)\n"
              "con ext forbidden (x1,x4) : (2,1) (2,3) (3,1) (3,2)\n"
              "con ext forbidden (x2,x4) : (0,1) (0,2) (3,0) (3,2)\n"
              "con ext forbidden (x3,x4) : (0,2) (1,1) (3,0) (3,3)\n");
    EXPECT_TRUE(oracle::brute_force(p));
    EXPECT_EQ(oracle::count_solutions(p), 166u);
}

TEST(RandomB, DeterministicText) {
    EXPECT_EQ(serialize_instance(gen_randomb(7, 4, 9, 5, 3)), serialize_instance(gen_randomb(7, 4, 9, 5, 3)));
    EXPECT_NE(serialize_instance(gen_randomb(7, 4, 9, 5, 3)), serialize_instance(gen_randomb(7, 4, 9, 5, 4)));
}

TEST(Forced, PlantedSolutionVerifies) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto inst = gen_forced_planted(6 + seed % 5, 2 + seed % 4, 5, 1 + seed % 3, seed);
        EXPECT_TRUE(verify(inst.problem, inst.solution)) << seed;
    }
}

TEST(Forced, MaximalTightnessAllowsOnlyPlantedPair) {
    const auto inst = gen_forced_planted(5, 3, 10, 8, 17);
    for (const auto& c : inst.problem.constraints()) {
        std::size_t allowed = 0;
        for (Value a = 0; a < 3; ++a) {
            for (Value b = 0; b < 3; ++b) {
                const std::vector<Value> t{a, b};
                if (check_tuple(c, t)) {
                    ++allowed;
                    EXPECT_EQ(a, inst.solution[c.scope[0]]);
                    EXPECT_EQ(b, inst.solution[c.scope[1]]);
                }
            }
        }
        EXPECT_EQ(allowed, 1u);
    }
    EXPECT_THROW(gen_forced(5, 3, 10, 9, 17), ModelError);
}

TEST(Forced, SatUnderAllSchemes) {
    const Problem p = gen_forced(10, 5, 20, 10, 7);
    for (const auto& [kind, name] : kSchemeNames) {
        SolveOptions o;
        o.scheme.kind = kind;
        const auto out = solve(p, o);
        EXPECT_EQ(out.status, Status::Sat) << name;
        EXPECT_TRUE(verify(p, out.assignment));
    }
}

namespace {

bool is_latin(const std::vector<Value>& sq, std::size_t order) {
    for (std::size_t i = 0; i < order; ++i) {
        std::set<Value> row, col;
        for (std::size_t j = 0; j < order; ++j) {
            row.insert(sq[i * order + j]);
            col.insert(sq[j * order + i]);
        }
        if (row.size() != order || col.size() != order) return false;
    }
    return true;
}

}  // namespace

TEST(Qwh, SquareIsLatinAndVerifies) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto inst = gen_qwh_planted(6, 15, seed);
        EXPECT_TRUE(is_latin(inst.solution, 6));
        EXPECT_TRUE(verify(inst.problem, inst.solution));
        std::size_t open = 0;
        for (VarId x = 0; x < inst.problem.num_variables(); ++x) open += inst.problem.domain(x).size() > 1;
        EXPECT_EQ(open, 15u);
    }
}

TEST(Qwh, NoHolesNeedsNoSearch) {
    const Problem p = gen_qwh(4, 0, 1);
    const auto out = solve(p, SolveOptions{});
    EXPECT_EQ(out.status, Status::Sat);
    EXPECT_EQ(out.stats.decisions, 0u);
}

TEST(Qwh, SolverSolutionIsLatin) {
    const Problem p = gen_qwh(5, 10, 3);
    const auto out = solve(p, SolveOptions{});
    ASSERT_EQ(out.status, Status::Sat);
    EXPECT_TRUE(is_latin(out.assignment, 5));
}

TEST(Qwh, Bounds) {
    EXPECT_THROW(gen_qwh(1, 0, 0), ModelError);
    EXPECT_THROW(gen_qwh(3, 10, 0), ModelError);
    EXPECT_NO_THROW(gen_qwh(3, 9, 0));
}

TEST(Coloring, Triangle) {
    const auto tri = [](std::size_t k) { return gen_coloring(3, 3, k, 0); };
    EXPECT_FALSE(oracle::brute_force(tri(2)));
    EXPECT_TRUE(oracle::brute_force(tri(3)));
    EXPECT_THROW(gen_coloring(3, 4, 3, 0), ModelError);
    EXPECT_THROW(gen_coloring(3, 1, 0, 0), ModelError);
}

TEST(Coloring, PinnedInstance) {
    const Problem p = gen_coloring(12, 30, 3, 11);
    EXPECT_EQ(p.num_constraints(), 30u);
    EXPECT_FALSE(oracle::brute_force(p));
}

TEST(GenSpec, ParseNameAndDispatch) {
    const GenSpec g = parse_gen_spec("randomb n=5 d=4 p1=6 p2=4 seed=42");
    EXPECT_EQ(g.family, Family::RandomB);
    EXPECT_EQ(spec_name(g), "randomb-n5-d4-p6-t4-s42");
    EXPECT_EQ(generate(g), gen_randomb(5, 4, 6, 4, 42));
    EXPECT_EQ(spec_name(parse_gen_spec("pigeons n=6")), "pigeons-n6");
    EXPECT_EQ(spec_name(parse_gen_spec("qwh order=5 holes=9 seed=2")), "qwh-o5-h9-s2");
    EXPECT_THROW(parse_gen_spec("dragons n=3"), Error);
    EXPECT_THROW(parse_gen_spec("pigeons n=x"), Error);
    EXPECT_THROW(parse_gen_spec("pigeons size=3"), Error);
    EXPECT_THROW(parse_gen_spec(""), Error);
}
