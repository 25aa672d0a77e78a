#include "fixtures.hpp"
#include "random_scheme.hpp"

#include "phorslab/typing.hpp"

#include <gtest/gtest.h>

using namespace phorslab;
using namespace phorslab::testing;

namespace {

const Diagnostic* find_constraint(const TypingReport& r, const std::string& c)
{
    for (const auto& d : r.diagnostics)
        if (d.constraint == c) return &d;
    return nullptr;
}

std::string derived_type(const TypingReport& r, const std::string& name)
{
    for (const auto& [n, t] : r.derived)
        if (n == name) return t.str();
    return "";
}

}  // namespace

TEST(GradedCtx, SumScaleJoin)
{
    Type o;
    GradedCtx a = GradedCtx::single("x", 1, o), b = GradedCtx::single("x", 2, o) + GradedCtx::single("y", 1, o);
    GradedCtx s = a + b;
    EXPECT_EQ(s.grade_of("x"), 3u);
    EXPECT_EQ(s.grade_of("y"), 1u);
    EXPECT_EQ(s.scaled(2).grade_of("x"), 6u);
    EXPECT_EQ(a.join(b).grade_of("x"), 2u);
    EXPECT_EQ(a.grade_of("z"), 0u);
    EXPECT_EQ(GradedCtx::single("z", 0, o), GradedCtx());
    EXPECT_THROW(a + GradedCtx::single("x", 1, parse_type("!1 o -o o")), ContextMismatch);
}

TEST(Subtype, GradesAreCovariantEverywhere)
{
    EXPECT_TRUE(subtype(parse_type("!1 o -o o"), parse_type("!2 o -o o")));
    EXPECT_FALSE(subtype(parse_type("!2 o -o o"), parse_type("!1 o -o o")));
    EXPECT_TRUE(subtype(parse_type("!1 (!1 o -o o) -o o"), parse_type("!1 (!2 o -o o) -o o")));
    EXPECT_FALSE(subtype(parse_type("o"), parse_type("o^2")));
}

TEST(Typing, RandomWalkIsOrderOne)
{
    Scheme s = load_scheme("randomwalk");
    TypingReport r = check_fin(s);
    ASSERT_TRUE(r.accepted);
    EXPECT_EQ(derived_type(r, "F"), "!1 o -o o");
    EXPECT_EQ(s.order(), 1u);
}

TEST(Typing, TwoUsesOfAFunctionArgumentNeedGradeTwo)
{
    TypingReport r = check_fin(load_scheme("eq3"));
    ASSERT_TRUE(r.accepted);
    EXPECT_EQ(derived_type(r, "H"), "!2 (!1 o -o o) -o !1 o -o o");
}

TEST(Typing, SelfCompositionOverflowsEveryFiniteGrade)
{
    Scheme s = load_scheme("nonalg");
    for (TypeSystem sys : {TypeSystem::Finitary, TypeSystem::Infinitary}) {
        TypingReport r = check(s, sys);
        EXPECT_FALSE(r.accepted);
        const Diagnostic* d = find_constraint(r, "grade-overflow");
        ASSERT_NE(d, nullptr);
        EXPECT_EQ(d->rule, "L");
        ASSERT_TRUE(d->inferred.has_value());
        EXPECT_EQ(d->inferred->grade(), Grade(4));
    }
}

TEST(Typing, UnboundedArgumentMustBeANameOrParameter)
{
    Scheme s = load_scheme("nonalg_inf");
    TypingReport inf = check_inf(s);
    EXPECT_FALSE(inf.accepted);
    const Diagnostic* d = find_constraint(inf, "infinitary-argument");
    ASSERT_NE(d, nullptr);
    EXPECT_NE(d->message.find("neither a parameter nor a non-terminal"), std::string::npos);
    EXPECT_FALSE(check_fin(s).accepted);
}

TEST(Typing, DyckNeedsTheInfinitarySystem)
{
    Scheme s = load_scheme("dyck");
    TypingReport fin = check_fin(s);
    EXPECT_FALSE(fin.accepted);
    EXPECT_NE(find_constraint(fin, "infinite-grade"), nullptr);
    EXPECT_TRUE(check_inf(s).accepted);
}

TEST(Typing, FinitaryAcceptanceImpliesInfinitaryAcceptance)
{
    for (const auto& name : kFinitarySchemes) {
        Scheme s = load_scheme(name);
        EXPECT_TRUE(check_fin(s).accepted) << name;
        EXPECT_TRUE(check_inf(s).accepted) << name;
    }
}

TEST(Typing, ChoiceMustBeGround)
{
    Scheme s = parse("F : !1 o -o o ;\nG : !1 o -o o ;\nG x = x ;\nF x = x ;\nH : !1 o -o o ;\n"
                     "H x = (F [1/2] G) x ;\nS : o ;\nS = H e ;\n");
    TypingReport r = check_fin(s);
    EXPECT_FALSE(r.accepted);
    EXPECT_NE(find_constraint(r, "choice-not-ground"), nullptr);
}

TEST(Typing, DeclaredGradeMayExceedUse)
{
    Scheme s = parse("F : !3 o -o o ;\nF x = x ;\nS : o ;\nS = F e ;\n");
    EXPECT_TRUE(check_fin(s).accepted);
}

TEST(Typing, RandomSchemesAreWellTyped)
{
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        RandomSchemeOptions opt;
        opt.max_order = 1 + seed % 2;
        opt.max_grade = 3;
        Scheme s = random_scheme(seed, opt);
        TypingReport r = check_fin(s);
        EXPECT_TRUE(r.accepted) << print(s) << (r.diagnostics.empty() ? "" : r.diagnostics[0].message);
    }
}
