#include "fixtures.hpp"
#include "random_scheme.hpp"

#include "phorslab/exec.hpp"
#include "phorslab/pipeline.hpp"

#include <gtest/gtest.h>

using namespace phorslab;
using namespace phorslab::testing;

namespace {

DirectionSampler always(bool left)
{
    return [left](const Rat&) { return left; };
}

Rat prob(const Enumeration& e, unsigned i)
{
    auto it = e.terminating.find(i);
    return it == e.terminating.end() ? Rat(0) : it->second;
}

}  // namespace

TEST(Step, StartUnfoldsWithoutAChoice)
{
    Scheme s = load_scheme("randomwalk");
    auto r = step(s, Term::nonterm("S"), always(true));
    ASSERT_TRUE(r.has_value());
    EXPECT_FALSE(r->second.has_value());
    EXPECT_EQ(print_term(r->first), "F e");
}

TEST(Step, ChoiceAddsOrRemovesAnF)
{
    Scheme s = load_scheme("randomwalk");
    Term fe = Term::app(Term::nonterm("F"), Term());
    auto unfolded = step(s, fe, always(true));
    ASSERT_TRUE(unfolded && !unfolded->second);
    auto left = step(s, unfolded->first, always(true));
    ASSERT_TRUE(left && left->second);
    EXPECT_TRUE(left->second->left);
    EXPECT_EQ(left->second->probability, Rat(1, 2));
    EXPECT_EQ(print_term(left->first), "F (F e)");
    auto right = step(s, unfolded->first, always(false));
    EXPECT_EQ(print_term(right->first), "e");
    EXPECT_EQ(right->second->probability, Rat(1, 2));
}

TEST(Step, NormalForms)
{
    Scheme s = load_scheme("randomwalk");
    EXPECT_FALSE(step(s, Term(), always(true)).has_value());
    EXPECT_FALSE(step(s, Term::omega(), always(true)).has_value());
    EXPECT_EQ(head_redex(s, Term()).kind, RedexKind::Value);
    EXPECT_EQ(head_redex(s, Term::omega()).kind, RedexKind::Diverge);
}

TEST(Step, StuckTerms)
{
    Scheme s = load_scheme("randomwalk");
    EXPECT_THROW(head_redex(s, Term::var("x")), StuckTerm);
    EXPECT_THROW(head_redex(s, Term::nonterm("F")), StuckTerm);
    EXPECT_THROW(head_redex(s, Term::nonterm("Nope")), StuckTerm);
}

TEST(Step, ProjectionReducesInsideTuple)
{
    Scheme s = load_scheme("affine");
    Term t = Term::proj(2, Term::apply(Term::nonterm("P"), {Term::omega(), Term()}));
    Redex r = head_redex(s, t);
    ASSERT_EQ(r.kind, RedexKind::Unfold);
    EXPECT_EQ(print_term(r.next), "pi_2 <Omega, e>");
    Redex r2 = head_redex(s, r.next);
    ASSERT_EQ(r2.kind, RedexKind::Unfold);
    EXPECT_EQ(r2.next.kind(), TermKind::Unit);
}

TEST(Enumerate, RandomWalk)
{
    Enumeration e = enumerate(load_scheme("randomwalk"), 5);
    EXPECT_EQ(e.terminating, (std::map<unsigned, Rat>{{1, Rat(1, 2)}, {3, Rat(1, 8)}, {5, Rat(1, 16)}}));
    EXPECT_FALSE(e.lower_bound());
    EXPECT_EQ(e.cut + Rat(1, 2) + Rat(1, 8) + Rat(1, 16), 1);
}

TEST(Enumerate, Geometric)
{
    Enumeration e = enumerate(load_scheme("geometric"), 3);
    EXPECT_EQ(e.terminating, (std::map<unsigned, Rat>{{1, Rat(1, 2)}, {2, Rat(1, 4)}, {3, Rat(1, 8)}}));
}

TEST(Enumerate, UnitAndOmega)
{
    EXPECT_EQ(enumerate(load_scheme("unit"), 3).terminating, (std::map<unsigned, Rat>{{0, Rat(1)}}));
    Enumeration om = enumerate(load_scheme("omega"), 3);
    EXPECT_TRUE(om.terminating.empty());
    EXPECT_EQ(om.diverged, 1);
}

TEST(Enumerate, StepBudgetFlagsChoiceFreeDivergence)
{
    // G e unfolds forever without choices while its term keeps growing.
    Scheme s = parse("G : !1 o -o o ;\nG x = G (G x) ;\nS : o ;\nS = e [1/2] G e ;\n");
    Enumeration e = enumerate(s, 3, 200000);
    EXPECT_TRUE(e.lower_bound());
    EXPECT_EQ(e.exhausted, Rat(1, 2));
    EXPECT_EQ(prob(e, 1), Rat(1, 2));
}

// Exact agreement with the compiled series on every bundled closed scheme.
TEST(Enumerate, AgreesWithSeriesOnBundledSchemes)
{
    std::vector<std::string> names = kFinitarySchemes;
    names.insert(names.end(), kInfinitarySchemes.begin(), kInfinitarySchemes.end());
    for (const auto& name : names) {
        Scheme s = load_scheme(name);
        TruncSeries k = start_series(s, 7);
        Enumeration e = enumerate(s, 7);
        ASSERT_FALSE(e.lower_bound()) << name;
        for (unsigned i = 0; i <= 7; ++i) EXPECT_EQ(prob(e, i), k[i]) << name << " z^" << i;
    }
}

TEST(Wilson, IntervalShape)
{
    Interval w = wilson(50, 100);
    EXPECT_LT(w.lower, 0.5);
    EXPECT_GT(w.upper, 0.5);
    EXPECT_NEAR(w.lower + w.upper, 1.0, 1e-12);
    Interval zero = wilson(0, 1000);
    EXPECT_EQ(zero.lower, 0.0);
    EXPECT_GT(zero.upper, 0.0);
    Interval all = wilson(1000, 1000);
    EXPECT_EQ(all.upper, 1.0);
    EXPECT_LT(all.lower, 1.0);
}

TEST(MonteCarlo, ReproducibleAcrossThreadCounts)
{
    Scheme s = load_scheme("eq3");
    MonteCarloOptions opt;
    opt.trials = 5000;
    opt.seed = 99;
    opt.threads = 1;
    RunStats a = monte_carlo(s, opt);
    opt.threads = 4;
    RunStats b = monte_carlo(s, opt);
    EXPECT_EQ(a.to_json(), b.to_json());
    EXPECT_EQ(a.histogram_csv(), b.histogram_csv());
    opt.seed = 100;
    EXPECT_NE(monte_carlo(s, opt).to_json(), a.to_json());
}

TEST(MonteCarlo, CountsAddUp)
{
    MonteCarloOptions opt;
    opt.trials = 3000;
    opt.choice_cap = 20;
    RunStats st = monte_carlo(load_scheme("randomwalk"), opt);
    EXPECT_EQ(st.trials, 3000u);
    EXPECT_EQ(st.terminated + st.diverged + st.exhausted + st.capped, st.trials);
    std::uint64_t hist = 0;
    for (const auto& [i, c] : st.histogram) {
        hist += c;
        EXPECT_LE(i, 20u);
        EXPECT_EQ(i % 2, 1u);
    }
    EXPECT_EQ(hist, st.terminated);
    EXPECT_GT(st.capped, 0u);
}

TEST(MonteCarlo, DivergenceNeverTerminates)
{
    MonteCarloOptions opt;
    opt.trials = 1000;
    RunStats st = monte_carlo(load_scheme("omega"), opt);
    EXPECT_EQ(st.terminated, 0u);
    EXPECT_EQ(st.diverged, 1000u);
}

TEST(MonteCarlo, RunStatsMergeIsAssociative)
{
    RunStats a, b, c;
    a.trials = 3;
    a.terminated = 2;
    a.histogram[1] = 2;
    b.trials = 5;
    b.terminated = 1;
    b.histogram[3] = 1;
    c.trials = 2;
    c.capped = 2;
    RunStats left = a, bc = b, right = a;
    left.merge(b);
    left.merge(c);
    bc.merge(c);
    right.merge(bc);
    EXPECT_EQ(left.to_json(), right.to_json());
}

// Frequencies of exactly i choices lie in the Wilson interval of the exact
// enumeration probabilities.
TEST(MonteCarlo, HistogramConsistentWithEnumeration)
{
    for (const char* name : {"randomwalk", "geometric", "eq3", "affine"}) {
        Scheme s = load_scheme(name);
        Enumeration e = enumerate(s, 7);
        MonteCarloOptions opt;
        opt.trials = 20000;
        opt.seed = 5;
        RunStats st = monte_carlo(s, opt);
        for (unsigned i = 0; i <= 7; ++i) {
            std::uint64_t k = st.histogram.count(i) ? st.histogram.at(i) : 0;
            Interval w = wilson(k, st.trials);
            EXPECT_TRUE(w.contains(double(to_long_double(prob(e, i)))))
                << name << " i=" << i << " freq " << double(k) / double(st.trials);
        }
    }
}

TEST(MonteCarlo, RunStatsJson)
{
    MonteCarloOptions opt;
    opt.trials = 100;
    opt.seed = 7;
    nlohmann::json j = monte_carlo(load_scheme("geometric"), opt).to_json();
    EXPECT_EQ(j["generator"], "splitmix64");
    EXPECT_EQ(j["seed"], 7u);
    EXPECT_EQ(j["trials"], 100u);
    EXPECT_TRUE(j["histogram"].is_object());
    EXPECT_TRUE(j.contains("p_term_wilson"));
}
