#include "phorslab/index.hpp"
#include "phorslab/linalg.hpp"
#include "phorslab/parser.hpp"
#include "phorslab/poly.hpp"
#include "phorslab/series.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace phorslab;

TEST(Rational, ParseAndRender)
{
    EXPECT_EQ(parse_rat("3/4"), Rat(3, 4));
    EXPECT_EQ(parse_rat("0.125"), Rat(1, 8));
    EXPECT_EQ(parse_rat("6/8"), Rat(3, 4));
    EXPECT_EQ(to_string(Rat(4, 7)), "4/7");
    EXPECT_EQ(to_string(Rat(2)), "2");
    EXPECT_THROW(parse_rat("x"), std::invalid_argument);
    EXPECT_THROW(parse_rat("1/0"), std::invalid_argument);
}

TEST(Rational, DyadicRoundingBracketsValue)
{
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        Rat q(static_cast<long>(rng() % 100000), static_cast<long>(rng() % 9999 + 1));
        q.canonicalize();
        for (unsigned bits : {1u, 8u, 48u, 96u}) {
            Rat lo = round_down_dyadic(q, bits), hi = round_up_dyadic(q, bits);
            EXPECT_LE(lo, q);
            EXPECT_GE(hi, q);
            Rat ulp(1);
            ulp /= Rat(mpz_class(1) << bits);
            EXPECT_LE(hi - lo, ulp);
        }
    }
}

TEST(Rational, RationalizeRecoversSmallFractions)
{
    EXPECT_EQ(rationalize(4.0L / 7.0L, 1e-15L, 1000000), Rat(4, 7));
    EXPECT_EQ(rationalize(0.5L, 1e-15L, 1000000), Rat(1, 2));
    EXPECT_EQ(from_long_double(0.375L), Rat(3, 8));
}

TEST(Poly, ArithmeticAndCalculus)
{
    VarId x = var_id("alg.x"), y = var_id("alg.y");
    Poly px = Poly::variable(x), py = Poly::variable(y);
    Poly sq = (px + Poly::constant(Rat(1))).pow(2);
    EXPECT_EQ(sq.coefficient(Monomial::of(x, 2)), 1);
    EXPECT_EQ(sq.coefficient(Monomial::of(x)), 2);
    EXPECT_EQ(sq.constant_term(), 1);
    EXPECT_EQ(sq.total_degree(), 2u);
    EXPECT_EQ(sq.derivative(x), px.scaled(Rat(2)) + Poly::constant(Rat(2)));
    Poly sub = (px * py).substitute({{x, py}});
    EXPECT_EQ(sub, py.pow(2));
    EXPECT_TRUE((px * py).kill({x}).is_zero());
    EXPECT_EQ((px * px * py).degree_in({x}), 2u);
}

TEST(Series, GeometricSquareHasLinearCoefficients)
{
    // (1/(1-z))^2 = sum (i+1) z^i
    std::vector<Rat> ones(11, Rat(1));
    TruncSeries g = TruncSeries::from_coefficients(ones, false);
    TruncSeries sq = g * g;
    for (unsigned i = 0; i <= 10; ++i) EXPECT_EQ(sq[i], Rat(i + 1)) << i;
    EXPECT_FALSE(sq.polynomial());
}

TEST(Series, RenderMarksTruncation)
{
    TruncSeries s = TruncSeries::z(3);
    EXPECT_EQ(render_series(s), "z");
    s.set_polynomial(false);
    EXPECT_EQ(render_series(s), "z + O(z^4)");
}

namespace {

// |[[o^n]]| = n; |[[!k A -o R]]| = (k+1)^|[[A]]| * |[[R]]|.
std::size_t count_oracle(const Type& t)
{
    if (t.is_ground()) return t.width();
    std::size_t a = count_oracle(t.arg()), k = t.grade().value(), m = 1;
    for (std::size_t i = 0; i < a; ++i) m *= k + 1;
    return m * count_oracle(t.result());
}

}  // namespace

TEST(Index, CountsMatchMultisetFormula)
{
    for (const char* src : {"o", "o^3", "!1 o -o o", "!2 o -o o", "!3 o^2 -o o", "!2 (!1 o -o o) -o !1 o -o o",
                            "!1 (!1 o -o o) -o !1 (!1 o -o o) -o !1 o -o o", "!0 o -o o", "!4 (!1 o -o o) -o o"}) {
        Type t = parse_type(src);
        EXPECT_EQ(index_count(t), count_oracle(t)) << src;
    }
}

TEST(Index, EnumerationIsCompleteDistinctAndInside)
{
    for (const char* src : {"!2 o^2 -o o", "!2 (!1 o -o o) -o !1 o -o o", "!1 (!2 o -o o) -o o^2"}) {
        Type t = parse_type(src);
        auto pts = enumerate_index(t);
        EXPECT_EQ(pts.size(), count_oracle(t)) << src;
        std::set<Index> seen(pts.begin(), pts.end());
        EXPECT_EQ(seen.size(), pts.size()) << src;
        for (const auto& p : pts) EXPECT_TRUE(index_in(p, t)) << p.str();
    }
}

TEST(Index, CapIsEnforced)
{
    EXPECT_THROW(enumerate_index(parse_type("!8 (!2 o^3 -o o) -o o"), 100), IndexCapExceeded);
}

TEST(Index, Rendering)
{
    Index star;
    Index f = Index::arrow({{star, 1}}, star);
    EXPECT_EQ(f.str(), "[*]>*");
    EXPECT_EQ(Index::arrow({{f, 2}}, f).str(), "[([*]>*)^2]>[*]>*");
    EXPECT_EQ(Index::ground(2).str(), "*2");
}

TEST(Linalg, SolveRankNullspace)
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = 1 + rng() % 4;
        RatMatrix a(n, RatVector(n));
        RatVector x(n);
        for (auto& row : a)
            for (auto& v : row) {
                v = Rat(static_cast<long>(rng() % 11) - 5, static_cast<long>(rng() % 3 + 1));
                v.canonicalize();
            }
        for (auto& v : x) v = Rat(static_cast<long>(rng() % 7) - 3);
        RatVector b = mat_vec(a, x);
        auto got = solve(a, b);
        std::size_t r = rank(a);
        EXPECT_EQ(r + nullspace(a).size(), n);
        if (r == n) {
            ASSERT_TRUE(got.has_value());
            EXPECT_EQ(*got, x);
        } else {
            EXPECT_FALSE(got.has_value());
            for (const auto& v : nullspace(a)) EXPECT_EQ(mat_vec(a, v), RatVector(n, Rat(0)));
        }
    }
}

TEST(Linalg, FloatSolve)
{
    auto x = solve_ld({{2, 1}, {1, 3}}, {3, 5});
    ASSERT_TRUE(x.has_value());
    EXPECT_NEAR(static_cast<double>((*x)[0]), 0.8, 1e-12);
    EXPECT_NEAR(static_cast<double>((*x)[1]), 1.4, 1e-12);
    EXPECT_FALSE(solve_ld({{1, 1}, {1, 1}}, {1, 2}).has_value());
}
