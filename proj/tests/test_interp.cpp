#include "fixtures.hpp"
#include "random_scheme.hpp"

#include "phorslab/exec.hpp"
#include "phorslab/semantics.hpp"
#include "phorslab/solver.hpp"
#include "phorslab/typing.hpp"

#include <gtest/gtest.h>

using namespace phorslab;
using namespace phorslab::testing;

namespace {

Index fun1() { return Index::arrow({{Index(), 1}}, Index()); }  // [*]>*

Poly v(const std::string& name) { return Poly::variable(var_id(name)); }

}  // namespace

TEST(Compile, RandomWalkSystem)
{
    Fas f = compile(load_scheme("randomwalk"));
    // F x = F (F x) [1/2] x: one use of x in either branch.
    std::string F = fas_var_name("F", fun1());
    EXPECT_EQ(F, "F@[*]>*");
    Poly z = Poly::variable(Fas::z());
    Poly expect = (v(F) * v(F) * z).scaled(Rat(1, 2)) + z.scaled(Rat(1, 2));
    EXPECT_EQ(f.rhs(var_id(F)), expect);
    EXPECT_EQ(f.rhs(f.start), v(F));
    EXPECT_EQ(f.size(), 2u);
    EXPECT_TRUE(f.closed());
}

TEST(Compile, InterpretBodyReadsOffTheArgumentUse)
{
    Scheme s = load_scheme("randomwalk");
    Poly p = interpret_body(s, "F", fun1());
    EXPECT_EQ(p, compile(s).rhs(var_id("F@[*]>*")));
    // F used with x zero times is identically zero.
    EXPECT_TRUE(interpret_body(s, "F", Index::arrow({}, Index())).is_zero());
    EXPECT_THROW(interpret_body(s, "F", Index()), CompileError);
}

TEST(Compile, GeometricSystem)
{
    Fas f = compile(load_scheme("geometric"));
    std::string F = "F@[*]>*";
    Poly z = Poly::variable(Fas::z());
    EXPECT_EQ(f.rhs(var_id(F)), (z + v(F) * z).scaled(Rat(1, 2)));
}

TEST(Compile, StartIsKeptWhenDead)
{
    Fas f = compile(load_scheme("omega"));
    EXPECT_TRUE(f.has(f.start));
    EXPECT_TRUE(f.rhs(f.start).is_zero());
}

TEST(Compile, OpenSchemeHasParameterVariables)
{
    Fas f = compile(load_scheme("dyck_core"));
    ASSERT_FALSE(f.closed());
    for (VarId p : f.params) {
        const std::string& n = var_name(p);
        EXPECT_TRUE(n.rfind("f@", 0) == 0 || n.rfind("g@", 0) == 0) << n;
    }
}

TEST(Compile, IndexCapIsEnforced)
{
    CompileOptions opt;
    opt.var_cap = 5;
    EXPECT_THROW(compile(load_scheme("chain"), opt), IndexCapExceeded);
}

TEST(Compile, RejectsInfiniteGrades)
{
    EXPECT_THROW(compile(load_scheme("dyck")), CompileError);
}

TEST(Compile, FasJsonRoundTrip)
{
    for (const auto& name : kFinitarySchemes) {
        Fas f = compile(load_scheme(name));
        Fas g = Fas::from_json(f.to_json());
        EXPECT_EQ(g.start, f.start) << name;
        EXPECT_EQ(g.vars, f.vars) << name;
        EXPECT_EQ(g.eqs, f.eqs) << name;
    }
}

// Order-1 bodies are affine in the variables standing for ground arguments.
TEST(Property, OrderOneBodiesAreAffineInArguments)
{
    unsigned checked = 0;
    for (std::uint64_t seed = 1000; checked < 50; ++seed) {
        RandomSchemeOptions opt;
        opt.max_order = 1;
        opt.max_grade = 3;
        opt.max_arity = 3;
        Scheme s = random_scheme(seed, opt);
        ASSERT_TRUE(check_fin(s).accepted);
        ASSERT_LE(s.order(), 1u);
        for (const auto& b : raw_bodies(s)) {
            EXPECT_LE(b.poly.degree_in(b.argument_vars), 1u) << b.rule << ": " << b.poly.str();
        }
        ++checked;
    }
}

// Coefficients of the compiled system agree with exhaustive execution.
TEST(Property, SeriesAgreesWithEnumerationOnRandomSchemes)
{
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        RandomSchemeOptions opt;
        opt.max_order = 1 + seed % 2;
        Scheme s = random_scheme(seed, opt);
        Fas f = compile(s);
        TruncSeries k = kleene_series(f, 6).at(f.start);
        // Choice-free loops exhaust the budget; the enumeration is then a lower bound.
        Enumeration e = enumerate(s, 6, 20000);
        for (unsigned i = 0; i <= 6; ++i) {
            Rat p = e.terminating.count(i) ? e.terminating.at(i) : Rat(0);
            if (e.lower_bound()) {
                EXPECT_LE(p, k[i]) << "seed " << seed << " z^" << i << "\n" << print(s);
            } else {
                EXPECT_EQ(p, k[i]) << "seed " << seed << " z^" << i << "\n" << print(s);
            }
        }
    }
}
