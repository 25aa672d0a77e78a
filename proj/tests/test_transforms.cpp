#include "fixtures.hpp"
#include "random_scheme.hpp"

#include "phorslab/pipeline.hpp"
#include "phorslab/transforms.hpp"

#include <gtest/gtest.h>

#include <deque>
#include <set>

using namespace phorslab;
using namespace phorslab::testing;

namespace {

std::set<std::string> reachable_rules(const Scheme& s)
{
    std::set<std::string> seen{s.start};
    std::deque<std::string> todo{s.start};
    while (!todo.empty()) {
        const Rule* r = s.find(todo.front());
        todo.pop_front();
        replace_leaves(r->body, [&](const Term& t) -> std::optional<Term> {
            if (t.kind() == TermKind::NonTerm && seen.insert(t.name()).second) todo.push_back(t.name());
            return std::nullopt;
        });
    }
    return seen;
}

void expect_same_series(const Scheme& a, const Scheme& b, unsigned n)
{
    TruncSeries x = start_series(a, n), y = start_series(b, n);
    for (unsigned i = 0; i <= n; ++i) EXPECT_EQ(x[i], y[i]) << "z^" << i << "\n" << print(a) << "\n" << print(b);
}

}  // namespace

TEST(Linearize, AffineTypes)
{
    EXPECT_EQ(affine_type(parse_type("!2 o -o o")).str(), "!1 o -o !1 o -o o");
    EXPECT_EQ(affine_type(parse_type("!0 o -o o")).str(), "o");
    EXPECT_EQ(affine_type(parse_type("!2 (!2 o -o o) -o !1 o -o o")).str(),
              "!1 (!1 o -o !1 o -o o) -o !1 (!1 o -o !1 o -o o) -o !1 o -o o");
    EXPECT_EQ(affine_type(parse_type("o^3")).str(), "o^3");
}

TEST(Linearize, PreservesNestedChoiceSeries)
{
    Scheme s = load_scheme("eq3");
    Scheme l = linearize(s);
    EXPECT_TRUE(check_fin(l).accepted);
    EXPECT_LE(l.max_grade(), 1u);
    expect_same_series(s, l, 12);
    EXPECT_EQ(l.find("H")->params, (std::vector<std::string>{"f_1", "f_2", "x"}));
}

TEST(Linearize, AffineSchemeIsUnchanged)
{
    Scheme s = load_scheme("affine");
    EXPECT_EQ(linearize(s), s);
    Scheme r = load_scheme("randomwalk");
    EXPECT_EQ(linearize(r), r);
}

TEST(Linearize, DoublingTower)
{
    // Eight copies of a function argument: the index sets outgrow the default cap.
    Scheme s = load_scheme("chain");
    Scheme l = linearize(s);
    EXPECT_LE(l.max_grade(), 1u);
    EXPECT_THROW(start_series(l, 12), IndexCapExceeded);
    EXPECT_TRUE(verify_same_series(s, l, 12, 1000000).equal);
}

TEST(Linearize, RejectsIllTypedInput)
{
    EXPECT_THROW(linearize(load_scheme("nonalg")), TransformError);
    EXPECT_THROW(linearize(load_scheme("dyck")), TransformError);
}

TEST(Property, LinearizationPreservesCoefficients)
{
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        RandomSchemeOptions opt;
        opt.max_order = 1 + seed % 2;
        opt.max_grade = 3;
        Scheme s = random_scheme(seed, opt);
        Scheme l = linearize(s);
        ASSERT_TRUE(check_fin(l).accepted) << print(l);
        EXPECT_LE(l.max_grade(), 1u);
        expect_same_series(s, l, 10);
    }
}

TEST(SizeBound, LinearizeHoldsOnTheCorpus)
{
    for (const auto& name : kFinitarySchemes) {
        Scheme s = load_scheme(name);
        SizeCheck c = linearize_size_check(s, linearize(s));
        EXPECT_TRUE(c.holds()) << name << ": " << c.str();
    }
}

// A duplicated function argument that is itself an application of a
// duplicating function: the copies nest and outgrow grade times size.
TEST(SizeBound, LinearizeCanExceedGradeTimesSize)
{
    Scheme s = parse("H : !2 (!1 o -o o) -o o ;\nH f = f (f e) ;\nK : !1 o -o o ;\nK x = x ;\n"
                     "G : !2 (!1 o -o o) -o !1 o -o o ;\nG f x = f (f x) ;\nS : o ;\nS = H (G K) ;\n");
    Scheme l = linearize(s);
    SizeCheck c = linearize_size_check(s, l);
    EXPECT_EQ(c.before, 20u);
    EXPECT_EQ(c.bound, 40u);
    EXPECT_EQ(c.after, 52u);  // S = H (G K K) (G K K)
    EXPECT_FALSE(c.holds());
    EXPECT_NE(c.str().find("exceeded"), std::string::npos);
    expect_same_series(s, l, 6);
}

TEST(SizeBound, ReduceHolds)
{
    std::vector<Scheme> cases{load_scheme("dyck")};
    for (const auto& name : kFinitarySchemes) cases.push_back(load_scheme(name));
    cases.push_back(parse("L : !inf (!1 o -o o) -o !inf (!1 o -o o) -o !1 o -o o ;\n"
                          "L f g x = f (L g f x) [1/3] g x ;\nA : !1 o -o o ;\nA x = x ;\n"
                          "B : !1 o -o o ;\nB x = x [1/2] e ;\nS : o ;\nS = L A B e ;\n"));
    for (const Scheme& s : cases) {
        SizeCheck c = reduce_size_check(s, reduce_inf(s));
        EXPECT_TRUE(c.holds()) << print(s) << c.str();
    }
}

TEST(Reduce, InstanceNames)
{
    EXPECT_EQ(instance_name("L", {"A", "B"}), "L__A_B");
    EXPECT_EQ(instance_name("S", {}), "S");
}

TEST(Reduce, DyckBecomesFinitary)
{
    Scheme r = reduce_inf(load_scheme("dyck"));
    EXPECT_TRUE(check_fin(r).accepted);
    EXPECT_EQ(reachable_rules(r), (std::set<std::string>{"S", "L__A_B", "A", "B"}));
    TruncSeries s = start_series(r, 9);
    TruncSeries walk = start_series(load_scheme("randomwalk"), 9);
    for (unsigned i = 0; i <= 9; ++i) EXPECT_EQ(s[i], walk[i]) << i;
}

TEST(Reduce, FinitarySchemeIsKept)
{
    Scheme s = load_scheme("geometric");
    Scheme r = reduce_inf(s);
    expect_same_series(s, r, 10);
    EXPECT_EQ(reachable_rules(r), reachable_rules(s));
}

TEST(Reduce, Preconditions)
{
    EXPECT_THROW(reduce_inf(load_scheme("nonalg_inf")), TransformError);
    EXPECT_THROW(reduce_inf(load_scheme("dyck_core")), TransformError);
}

TEST(Reduce, NameClashGetsAPrime)
{
    Scheme s = parse("L : !inf (!1 o -o o) -o !1 o -o o ;\nL f x = f x [1/2] L f x ;\n"
                     "L__A : o ;\nL__A = e ;\nA : !1 o -o o ;\nA x = x ;\nS : o ;\nS = L A L__A ;\n");
    ASSERT_TRUE(check_inf(s).accepted);
    Scheme r = reduce_inf(s);
    EXPECT_NE(r.find("L__A'"), nullptr);
    EXPECT_NE(r.find("L__A"), nullptr);
    Enumeration e = enumerate(s, 6);
    TruncSeries k = start_series(r, 6);
    for (unsigned i = 0; i <= 6; ++i) EXPECT_EQ(k[i], e.terminating.count(i) ? e.terminating.at(i) : Rat(0));
}

// Plugging both parameters of the open core yields the reduced Dyck scheme.
TEST(Compose, FillingTheCoreMatchesTheReduction)
{
    Scheme core = load_scheme("dyck_core");
    Scheme plugs = load_scheme("dyck");
    Scheme one = compose(core, plugs, "f", "A");
    EXPECT_EQ(one.params.size(), 1u);
    Scheme both = compose(one, plugs, "g", "B");
    EXPECT_TRUE(both.closed());
    EXPECT_TRUE(check_fin(both).accepted);
    expect_same_series(both, reduce_inf(plugs), 11);
}

TEST(Compose, ImportsOnlyReachableRules)
{
    Scheme both = compose(load_scheme("dyck_core"), load_scheme("dyck"), "f", "A");
    EXPECT_EQ(both.find("B"), nullptr);
    EXPECT_NE(both.find("A"), nullptr);
}

TEST(Compose, ClashesAreRenamedOrRejected)
{
    Scheme core = load_scheme("dyck_core");
    Scheme plug = load_scheme("dyck_core_plug");
    Scheme c = compose(core, plug, "f", "L");
    EXPECT_NE(c.find("L_2"), nullptr);
    EXPECT_NE(print_term(c.find("L")->body).find("L_2"), std::string::npos);
    ComposeOptions strict;
    strict.auto_rename = false;
    EXPECT_THROW(compose(core, plug, "f", "L", strict), TransformError);
}

TEST(Compose, TypeMismatchIsRejected)
{
    EXPECT_THROW(compose(load_scheme("dyck_core"), load_scheme("eq3"), "f", "H"), TransformError);
    EXPECT_THROW(compose(load_scheme("dyck_core"), load_scheme("eq3"), "h", "A"), TransformError);
    EXPECT_THROW(compose(load_scheme("dyck_core"), load_scheme("eq3"), "f", "Missing"), TransformError);
}

TEST(Verify, ReportsAgreementAndDisagreement)
{
    Scheme s = load_scheme("eq3");
    EXPECT_TRUE(verify_same_series(s, linearize(s), 12).equal);
    Verification bad = verify_same_series(s, load_scheme("geometric"), 4);
    EXPECT_FALSE(bad.equal);
    EXPECT_NE(bad.message.find("differ at z^2"), std::string::npos) << bad.message;
    EXPECT_TRUE(verify_same_series(load_scheme("dyck"), reduce_inf(load_scheme("dyck")), 9).equal);
}
