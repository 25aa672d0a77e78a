#include "phorslab/decide.hpp"

#include <cstdio>

namespace phorslab {

std::string to_string(Answer a)
{
    switch (a) {
    case Answer::Yes: return "yes";
    case Answer::No: return "no";
    case Answer::Inconclusive: return "inconclusive";
    }
    return "?";
}

std::optional<Rat> Verdict::p_term() const
{
    if (p_hi && *p_hi == p_lo) return p_lo;
    return std::nullopt;
}

namespace {

std::string ld_str(long double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17Lg", x);
    return buf;
}

// Values on every variable reachable in the original system; unproductive
// ones are 0.
std::map<VarId, Rat> full_values(const Fas& fas, const MinSolution& sol, bool upper)
{
    std::map<VarId, Rat> out;
    for (VarId v : reachable(fas).vars) {
        if (!sol.lower.count(v)) {
            out[v] = 0;
            continue;
        }
        out[v] = upper ? *sol.upper.at(v) : sol.lower.at(v);
    }
    return out;
}

std::vector<Certificate::Component> evidence(const MinSolution& sol)
{
    std::vector<Certificate::Component> out;
    for (const auto& s : sol.sccs) {
        if (s.witness != LeastWitness::Contracting && s.witness != LeastWitness::Critical) continue;
        out.push_back({s.vars, to_string(s.witness), s.witness_vector});
    }
    return out;
}

}  // namespace

nlohmann::json Verdict::to_json() const
{
    nlohmann::json j;
    j["ast"] = to_string(ast);
    j["past"] = to_string(past);
    if (auto p = p_term())
        j["p_term"] = to_string(*p);
    else
        j["p_term"] = {{"lower", to_string(p_lo)}, {"upper", p_hi ? nlohmann::json(to_string(*p_hi)) : nlohmann::json()}};
    j["p_term_approx"] = ld_str(p_approx);
    switch (expectation) {
    case Expectation::Finite: j["expected_steps"] = to_string(expected); break;
    case Expectation::Infinite: j["expected_steps"] = "inf"; break;
    case Expectation::Unknown: j["expected_steps"] = nullptr; break;
    }
    if (expected_approx) j["expected_steps_approx"] = ld_str(*expected_approx);
    j["ast_certificate"] = ast_certificate.to_json();
    j["past_certificate"] = past_certificate.to_json();
    j["notes"] = notes;
    return j;
}

Verdict decide_ast(const Fas& fas, const SolveConfig& cfg, MinSolution* out)
{
    Verdict v;
    MinSolution sol = solve_at_one(fas, cfg);
    VarId s = fas.start;
    v.p_lo = sol.lower.at(s);
    v.p_hi = sol.upper.at(s);
    v.p_approx = sol.approx.at(s);
    if (sol.exact()) {
        Certificate c;
        c.values = full_values(fas, sol, false);
        c.components = evidence(sol);
        if (v.p_lo == 1) {
            c.kind = Certificate::Kind::FixpointAtOne;
            v.ast = Answer::Yes;
        } else if (v.p_lo < 1) {
            c.kind = Certificate::Kind::PreFixpointBelowOne;
            v.ast = Answer::No;
        } else {
            v.notes.push_back("start value exceeds 1; not a probabilistic system");
        }
        v.ast_certificate = c;
    } else if (v.p_hi && *v.p_hi < 1) {
        Certificate c;
        c.kind = Certificate::Kind::PreFixpointBelowOne;
        c.values = full_values(fas, sol, true);
        v.ast_certificate = c;
        v.ast = Answer::No;
        v.notes.push_back("termination probability known only within bounds");
    } else {
        v.notes.push_back(v.p_hi ? "bounds straddle 1; no certificate found" : "no certified upper bound");
        if (cfg.mode == Arithmetic::Float && 1 - v.p_approx < 1e-9L)
            v.notes.push_back("float estimate within 1e-9 of 1");
    }
    if (v.ast != Answer::Inconclusive) {
        auto chk = check_certificate(fas, v.ast_certificate);
        if (!chk.ok) {
            v.notes.push_back("AST certificate rejected: " + chk.reason);
            v.ast = Answer::Inconclusive;
        } else if (v.p_term() && !chk.least && v.ast == Answer::No) {
            v.notes.push_back("exact value without leastness evidence: " + chk.reason);
        }
    }
    if (out) *out = std::move(sol);
    return v;
}

Verdict decide(const Fas& fas, const SolveConfig& cfg)
{
    MinSolution sol;
    Verdict v = decide_ast(fas, cfg, &sol);
    if (v.ast == Answer::No) {
        v.past = Answer::No;
        return v;
    }
    if (v.ast == Answer::Inconclusive) return v;
    ExpectedSteps e = expected_steps(sol, cfg);
    v.expected_approx = e.approx;
    Certificate c;
    c.values = v.ast_certificate.values;
    c.components = v.ast_certificate.components;
    switch (e.kind) {
    case ExpectedSteps::Kind::Finite:
        c.kind = Certificate::Kind::NonsingularLinearSolve;
        c.derivative = e.d;
        v.past = Answer::Yes;
        v.expectation = Verdict::Expectation::Finite;
        v.expected = e.value;
        break;
    case ExpectedSteps::Kind::Infinite:
        c.kind = Certificate::Kind::CriticalJacobian;
        c.critical_vars = e.critical_vars;
        c.eigenvector = e.eigenvector;
        c.critical_rank = e.critical_rank;
        c.path = e.path;
        v.past = Answer::No;
        v.expectation = Verdict::Expectation::Infinite;
        break;
    case ExpectedSteps::Kind::Inconclusive:
        v.notes.push_back("expected steps: " + e.note);
        return v;
    }
    auto chk = check_certificate(fas, c);
    if (!chk.ok) {
        v.notes.push_back("PAST certificate rejected: " + chk.reason);
        v.past = Answer::Inconclusive;
        v.expectation = Verdict::Expectation::Unknown;
        return v;
    }
    v.past_certificate = c;
    return v;
}

}  // namespace phorslab
