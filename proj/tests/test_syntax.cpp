#include "fixtures.hpp"
#include "random_scheme.hpp"

#include "phorslab/parser.hpp"

#include <gtest/gtest.h>

using namespace phorslab;
using namespace phorslab::testing;

TEST(Parser, ReadsRandomWalk)
{
    Scheme s = load_scheme("randomwalk");
    ASSERT_EQ(s.rules.size(), 2u);
    EXPECT_EQ(s.start, "S");
    const Rule* f = s.find("F");
    ASSERT_NE(f, nullptr);
    EXPECT_EQ(f->type.str(), "!1 o -o o");
    EXPECT_EQ(f->params, std::vector<std::string>{"x"});
    EXPECT_EQ(f->body.kind(), TermKind::Choice);
    EXPECT_EQ(f->body.bias(), Rat(1, 2));
    EXPECT_EQ(s.order(), 1u);
}

TEST(Parser, TypesAssociateToTheRight)
{
    Type t = parse_type("!2 (!1 o -o o) -o !1 o -o o");
    EXPECT_EQ(t.grade(), Grade(2));
    EXPECT_EQ(t.arg().str(), "!1 o -o o");
    EXPECT_EQ(t.result().str(), "!1 o -o o");
    EXPECT_EQ(order(t), 2u);
    EXPECT_EQ(parse_type("!inf o -o o").grade(), Grade::inf());
    EXPECT_EQ(parse_type("o^3").width(), 3u);
}

TEST(Parser, RoundTripsBundledSchemes)
{
    for (const auto& list : {kFinitarySchemes, kInfinitarySchemes, kOpenSchemes, kRejectedSchemes})
        for (const auto& name : list) {
            Scheme s = load_scheme(name);
            EXPECT_EQ(parse(print(s)), s) << name << "\n" << print(s);
        }
}

TEST(Parser, RoundTripsRandomSchemes)
{
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        RandomSchemeOptions opt;
        opt.max_order = 1 + seed % 2;
        Scheme s = random_scheme(seed, opt);
        EXPECT_EQ(parse(print(s)), s) << print(s);
    }
}

TEST(Parser, TuplesAndProjections)
{
    Scheme s = load_scheme("affine");
    const Rule* p = s.find("P");
    ASSERT_NE(p, nullptr);
    EXPECT_EQ(p->body.kind(), TermKind::Tuple);
    EXPECT_EQ(p->body.items().size(), 2u);
    const Rule* f = s.find("F");
    EXPECT_EQ(f->body.left().kind(), TermKind::Proj);
    EXPECT_EQ(f->body.left().index(), 1u);
}

TEST(Parser, OpenParameters)
{
    Scheme s = load_scheme("dyck_core");
    ASSERT_EQ(s.params.size(), 2u);
    EXPECT_FALSE(s.closed());
    EXPECT_EQ(s.param_type("f")->str(), "!1 o -o o");
}

namespace {

void expect_error_at(const std::string& src, unsigned line, const std::string& fragment)
{
    try {
        parse(src);
        ADD_FAILURE() << "accepted: " << src;
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line, line) << e.what();
        EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
    }
}

}  // namespace

TEST(Parser, DiagnosticsCarryPositions)
{
    expect_error_at("S : o ;\nS = F e ;\n", 2, "unknown identifier 'F'");
    expect_error_at("S : o ;\nS = e [3/2] e ;\n", 2, "outside [0,1]");
    expect_error_at("S : o ;\nS = e ;\nS = e ;\n", 3, "duplicate non-terminal");
    expect_error_at("F : !1 o -o o ;\nF x = x ;", 2, "missing start symbol");
    expect_error_at("S : !1 o -o o ;\nS x = x ;\n", 1, "must have type o");
    expect_error_at("S : o ;\nS = pi_0 e ;\n", 2, "projection indices start at 1");
    expect_error_at("S : o ;\nS = e $ ;\n", 2, "unexpected character");
}

TEST(Parser, MissingFileIsAParseError)
{
    EXPECT_THROW(parse_file("/nonexistent/x.phors"), ParseError);
}
