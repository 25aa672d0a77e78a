#include "fixtures.hpp"

#include "phorslab/semantics.hpp"
#include "phorslab/solver.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace phorslab;
using namespace phorslab::testing;

namespace {

Rat catalan(unsigned n)
{
    mpz_class c;
    mpz_bin_uiui(c.get_mpz_t(), 2 * n, n);
    return Rat(c) / Rat(n + 1);
}

Rat pow2(unsigned k) { return Rat(mpz_class(1) << k); }

// w = a z w^2 + b z, built directly.
Fas quadratic(const Rat& a, const Rat& b, const std::string& name)
{
    Fas f;
    VarId w = var_id(name);
    Poly z = Poly::variable(Fas::z()), pw = Poly::variable(w);
    f.start = w;
    f.vars = {w};
    f.eqs[w] = (pw * pw * z).scaled(a) + z.scaled(b);
    return f;
}

}  // namespace

TEST(Kleene, CatalanCoefficients)
{
    Fas f = compile(load_scheme("randomwalk"));
    TruncSeries s = kleene_series(f, 21).at(f.start);
    for (unsigned i = 0; i <= 10; ++i) {
        EXPECT_EQ(s[2 * i + 1], catalan(i) / pow2(2 * i + 1)) << i;
        EXPECT_EQ(s[2 * i], 0) << i;
    }
}

TEST(Kleene, GeometricCoefficients)
{
    Fas f = compile(load_scheme("geometric"));
    TruncSeries s = kleene_series(f, 12).at(f.start);
    EXPECT_EQ(s[0], 0);
    for (unsigned i = 1; i <= 12; ++i) EXPECT_EQ(s[i], Rat(1) / pow2(i)) << i;
}

TEST(Kleene, FloatVariantTracksExact)
{
    Fas f = compile(load_scheme("eq3"));
    TruncSeries s = kleene_series(f, 20).at(f.start);
    FloatSeries g = kleene_series_float(f, 20);
    for (unsigned i = 0; i <= 20; ++i) EXPECT_NEAR(double(g[i]), to_long_double(s[i]), 1e-15) << i;
}

TEST(Kleene, ParametersTakeGivenSeries)
{
    Fas f = compile(load_scheme("dyck_core"));
    EXPECT_THROW(kleene_series(f, 5), PreconditionViolated);
}

TEST(Kleene, IterationGuardReportsIterates)
{
    Fas f = quadratic(Rat(1, 2), Rat(1, 2), "solver.guard");
    EXPECT_THROW(kleene_series(f, 9, {}, 2), NonStationary);
}

TEST(Kleene, MonotonicityIsTallied)
{
    auto before = monotonicity_stats();
    Fas f = compile(load_scheme("randomwalk"));
    kleene_series(f, 9);
    auto after = monotonicity_stats();
    EXPECT_EQ(after.runs, before.runs + 1);
    EXPECT_GT(after.comparisons, before.comparisons);
    EXPECT_EQ(after.violations, 0u);
}

TEST(SolveAtOne, ExactValues)
{
    struct Case {
        const char* scheme;
        Rat value;
    } cases[] = {{"randomwalk", Rat(1)}, {"geometric", Rat(1)}, {"eq3", Rat(4, 7)}, {"omega", Rat(0)},
                 {"unit", Rat(1)},       {"affine", Rat(1)},    {"chain", Rat(1)}};
    for (const auto& c : cases) {
        MinSolution sol = solve_at_one(compile(load_scheme(c.scheme)));
        ASSERT_TRUE(sol.exact()) << c.scheme;
        EXPECT_EQ(*sol.value(sol.system.start), c.value) << c.scheme;
    }
}

TEST(SolveAtOne, TerminationProbabilityOfNestedChoices)
{
    // p_term = beta / (1 - alpha) with alpha = a^2 b^2 + a (1 - a) c^2, beta = 1 - a.
    Rat a(1, 2), b(1, 2), c(1, 2);
    Rat alpha = a * a * b * b + a * (1 - a) * c * c, beta = 1 - a;
    MinSolution sol = solve_at_one(compile(load_scheme("eq3")));
    EXPECT_EQ(*sol.value(sol.system.start), beta / (1 - alpha));
}

TEST(SolveAtOne, LeastSolutionOfAQuadratic)
{
    // w = 1/3 w^2 + 2/3 has roots 1 and 2: least is 1.
    MinSolution s1 = solve_at_one(quadratic(Rat(1, 3), Rat(2, 3), "solver.q1"));
    ASSERT_TRUE(s1.exact());
    EXPECT_EQ(*s1.value(s1.system.start), 1);
    // w = 3/4 w^2 + 1/4 has roots 1/3 and 1: least is 1/3.
    MinSolution s2 = solve_at_one(quadratic(Rat(3, 4), Rat(1, 4), "solver.q2"));
    ASSERT_TRUE(s2.exact());
    EXPECT_EQ(*s2.value(s2.system.start), Rat(1, 3));
    // w = 1/2 w^2 + 1/2: double root 1, critical.
    MinSolution s3 = solve_at_one(quadratic(Rat(1, 2), Rat(1, 2), "solver.q3"));
    ASSERT_TRUE(s3.exact());
    EXPECT_EQ(*s3.value(s3.system.start), 1);
    EXPECT_EQ(s3.sccs.back().witness, LeastWitness::Critical);
}

TEST(SolveAtOne, IrrationalSolutionIsBracketed)
{
    // w = 1/2 w^2 + 1/4: least root 1 - sqrt(1/2).
    SolveConfig cfg;
    MinSolution sol = solve_at_one(quadratic(Rat(1, 2), Rat(1, 4), "solver.irr"), cfg);
    EXPECT_FALSE(sol.exact());
    VarId w = sol.system.start;
    ASSERT_TRUE(sol.upper.at(w).has_value());
    long double truth = 1.0L - std::sqrt(0.5L);
    EXPECT_LE(to_long_double(sol.lower.at(w)), truth);
    EXPECT_GE(to_long_double(*sol.upper.at(w)), truth);
    EXPECT_LE(*sol.upper.at(w) - sol.lower.at(w), cfg.tolerance);
    EXPECT_FALSE(sol.inconclusive_width);
}

TEST(ExpectedSteps, GeometricIsTwo)
{
    MinSolution sol = solve_at_one(compile(load_scheme("geometric")));
    ExpectedSteps e = expected_steps(sol);
    ASSERT_EQ(e.kind, ExpectedSteps::Kind::Finite);
    // sum_i i / 2^i
    Rat oracle;
    for (unsigned i = 1; i <= 200; ++i) oracle += Rat(i) / pow2(i);
    EXPECT_EQ(e.value, 2);
    EXPECT_LT(Rat(2) - oracle, Rat(1, 1000000));
}

TEST(ExpectedSteps, RandomWalkIsInfiniteWithCriticalWitness)
{
    MinSolution sol = solve_at_one(compile(load_scheme("randomwalk")));
    ExpectedSteps e = expected_steps(sol);
    ASSERT_EQ(e.kind, ExpectedSteps::Kind::Infinite);
    EXPECT_FALSE(e.critical_vars.empty());
    for (const Rat& u : e.eigenvector) EXPECT_GT(u, 0);
    EXPECT_LT(e.critical_rank, e.critical_vars.size());
    ASSERT_FALSE(e.path.empty());
    EXPECT_EQ(e.path.front(), sol.system.start);
}

TEST(ExpectedSteps, NeedsAlmostSureTermination)
{
    MinSolution sol = solve_at_one(compile(load_scheme("eq3")));
    EXPECT_THROW(expected_steps(sol), PreconditionViolated);
}

TEST(ExpectedSteps, AffineTakesTwoChoices)
{
    MinSolution sol = solve_at_one(compile(load_scheme("affine")));
    ExpectedSteps e = expected_steps(sol);
    ASSERT_EQ(e.kind, ExpectedSteps::Kind::Finite);
    EXPECT_EQ(e.value, 2);
}

TEST(Scc, DependenciesComeFirst)
{
    Fas f = compile(load_scheme("eq3"));
    auto comps = scc_bottom_up(f);
    std::map<VarId, std::size_t> where;
    for (std::size_t i = 0; i < comps.size(); ++i)
        for (VarId v : comps[i]) where[v] = i;
    for (VarId v : f.vars)
        for (VarId u : f.dependencies(v)) EXPECT_LE(where.at(u), where.at(v));
}
